"""Lesson windows, element-selection policies, and busy-time policies.

A lesson schedule is a set of half-open time windows [start, end) during
which elements may be accessed. A selection policy picks which element the
next access goes to. A busy policy says what happens to everyone's knowledge
while one access's effort interval is being paid.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union

from . import prng
from .errors import ConfigError, ScheduleComplete

__all__ = [
    "LessonSchedule",
    "in_lesson",
    "FixedTimes",
    "UniformRandom",
    "RoundRobin",
    "SelectionPolicy",
    "initial_policy_state",
    "next_element",
    "BusyPolicy",
    "BusyBehavior",
    "busy_elapse",
]


@dataclass(frozen=True)
class LessonSchedule:
    """Ascending, non-overlapping half-open windows of lesson time.

    An empty tuple is a valid schedule with no lesson time at all (useful for
    pure-decay runs).
    """

    windows: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "windows", tuple((float(a), float(b)) for a, b in self.windows)
        )
        prev_end = None
        for start, end in self.windows:
            if not start < end:
                raise ConfigError(f"window must satisfy start < end, got ({start}, {end})")
            if prev_end is not None and start < prev_end:
                raise ConfigError(
                    f"windows must be ascending and non-overlapping; "
                    f"({start}, {end}) starts before {prev_end}"
                )
            prev_end = end

    def total_duration(self) -> float:
        return sum(end - start for start, end in self.windows)

    def last_end(self) -> float | None:
        return self.windows[-1][1] if self.windows else None


def in_lesson(t: float, schedule: LessonSchedule) -> bool:
    """True when t falls inside some window; ends are exclusive."""
    for start, end in schedule.windows:
        if start <= t < end:
            return True
    return False


@dataclass(frozen=True)
class FixedTimes:
    """Present prescribed elements at prescribed times, in order.

    pairs is ((time, element), ...) with strictly increasing times and 1-based
    element indices. A presentation that comes due while an effort interval is
    still being paid waits for the first free step.
    """

    pairs: tuple[tuple[float, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "pairs", tuple((float(t), int(e)) for t, e in self.pairs)
        )
        prev_t = None
        for t, e in self.pairs:
            if prev_t is not None and t <= prev_t:
                raise ConfigError(f"fixed times must be strictly increasing, got {t} after {prev_t}")
            if e < 1:
                raise ConfigError(f"element indices are 1-based, got {e}")
            prev_t = t


@dataclass(frozen=True)
class UniformRandom:
    """Draw the accessed element uniformly from {1..N} on every free step.

    seed=None defers to the run configuration's seed.
    """

    seed: int | None = None


@dataclass(frozen=True)
class RoundRobin:
    """Cycle start, start+1, ..., N, 1, 2, ... on every free step."""

    start: int = 1

    def __post_init__(self) -> None:
        if self.start < 1:
            raise ConfigError(f"round-robin start is 1-based, got {self.start}")


SelectionPolicy = Union[FixedTimes, UniformRandom, RoundRobin]


def initial_policy_state(policy: SelectionPolicy, seed: int) -> int:
    """Opaque per-policy cursor: RNG state, cycle position, or list position."""
    if isinstance(policy, UniformRandom):
        return prng.seed_state(seed if policy.seed is None else policy.seed)
    if isinstance(policy, RoundRobin):
        return policy.start
    return 0


def next_element(policy: SelectionPolicy, state: int, n: int) -> tuple[int, int]:
    """Pick the next element; returns (1-based index, advanced state).

    The state advances only as the policy requires: RNG state for
    UniformRandom, cycle position for RoundRobin, list position for
    FixedTimes. FixedTimes raises ScheduleComplete once exhausted; timing of
    the fixed entries is enforced by the caller, not here.
    """
    if n < 1:
        raise ConfigError(f"element count must be at least 1, got {n}")
    if isinstance(policy, UniformRandom):
        return prng.next_index(state, n)
    if isinstance(policy, RoundRobin):
        if policy.start > n:
            raise ConfigError(f"round-robin start {policy.start} exceeds element count {n}")
        idx = (state - 1) % n + 1
        return idx, idx % n + 1
    if isinstance(policy, FixedTimes):
        if state >= len(policy.pairs):
            raise ScheduleComplete
        _, element = policy.pairs[state]
        if element > n:
            raise ConfigError(f"fixed schedule names element {element} of {n}")
        return element, state + 1
    raise ConfigError(f"unknown selection policy {policy!r}")


class BusyPolicy(Enum):
    """What an access's effort interval does to the simulation.

    SKIP_TIME: the clock jumps forward by tau; no decay accrues during the
    jump (the interval is outside simulated experience).
    FREEZE_ACTIVE: time passes step by step; every element except the one
    being accessed decays.
    DECAY_ALL: time passes step by step; every element decays, including the
    one being accessed.
    """

    SKIP_TIME = "skip_time"
    FREEZE_ACTIVE = "freeze_active"
    DECAY_ALL = "decay_all"


@dataclass(frozen=True)
class BusyBehavior:
    """Effect of one effort interval, as concrete flags."""

    decays_active: bool
    decays_others: bool
    jumps_clock: bool


_BUSY_TABLE = {
    BusyPolicy.SKIP_TIME: BusyBehavior(decays_active=False, decays_others=False, jumps_clock=True),
    BusyPolicy.FREEZE_ACTIVE: BusyBehavior(decays_active=False, decays_others=True, jumps_clock=False),
    BusyPolicy.DECAY_ALL: BusyBehavior(decays_active=True, decays_others=True, jumps_clock=False),
}


def busy_elapse(policy: BusyPolicy) -> BusyBehavior:
    """Describe how an effort interval elapses under the given policy."""
    try:
        return _BUSY_TABLE[policy]
    except KeyError:
        raise ConfigError(f"unknown busy policy {policy!r}") from None
