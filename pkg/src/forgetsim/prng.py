"""splitmix64 pseudo-random generator.

The simulator needs a tiny deterministic generator that can be reimplemented
bit-for-bit in the compiled kernel, so runs are reproducible across backends
and languages. splitmix64 (Steele, Lea, Flood 2014; public domain) fits: one
64-bit word of state, three shift-xor-multiply rounds per draw.
"""
from __future__ import annotations

__all__ = ["MASK64", "seed_state", "next_u64", "next_index"]

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def seed_state(seed: int) -> int:
    """Initial generator state for a 64-bit seed."""
    return seed & MASK64


def next_u64(state: int) -> tuple[int, int]:
    """Draw one 64-bit word; returns (value, next_state)."""
    state = (state + _GOLDEN) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31), state


def next_index(state: int, n: int) -> tuple[int, int]:
    """Uniform draw from {1, ..., n}; returns (index, next_state).

    Draws below 2**64 mod n are rejected so every index has probability
    exactly 1/n (plain modulo would bias small indices).
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    threshold = ((1 << 64) - n) % n
    while True:
        u, state = next_u64(state)
        if u >= threshold:
            return (u % n) + 1, state
