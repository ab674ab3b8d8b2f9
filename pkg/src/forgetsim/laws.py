"""Forgetting and effort laws, and single-element state transitions.

An element of learning material carries a knowledge level Z in [0, 1] and an
access count s. Each access resets Z to 1 and makes the element both easier
to retain and cheaper to revisit:

    gamma(s) = gamma0 * exp(-s / beta)      per-step forgetting coefficient
    tau(s)   = tau_inf + a * exp(-s / b)    effort (time units) of one access

Between accesses Z decays geometrically, one factor per integration step:

    Z' = Z * (1 - gamma(s))                 PER_STEP mode

PER_STEP ties the decay to the step count, which is the cadence the reference
scenarios were published with. CONTINUOUS_RATE instead reads gamma(s) as a
rate per dt_ref of simulated time, so halving dt halves the per-step loss:

    Z' = Z * (1 - gamma(s) / dt_ref * dt)   CONTINUOUS_RATE mode

Time is measured in UEV, the unit effort value: tau(s) -> tau_inf as s grows,
so one UEV is the cost of accessing a fully practiced element.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import ConfigError

__all__ = [
    "DecayMode",
    "ForgettingLaw",
    "EffortLaw",
    "ElementState",
    "gamma_of",
    "tau_of",
    "decay_step",
    "closed_form_decay",
    "access",
]


class DecayMode(Enum):
    PER_STEP = "perstep"
    CONTINUOUS_RATE = "continuous"


@dataclass(frozen=True)
class ForgettingLaw:
    """Parameters of gamma(s) plus the decay-mode switch."""

    gamma0: float
    beta: float
    mode: DecayMode = DecayMode.PER_STEP
    dt_ref: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.gamma0 < 1.0:
            raise ConfigError(f"gamma0 must be in (0, 1), got {self.gamma0}")
        if not self.beta > 0.0:
            raise ConfigError(f"beta must be positive, got {self.beta}")
        if not isinstance(self.mode, DecayMode):
            raise ConfigError(f"mode must be a DecayMode, got {self.mode!r}")
        if not self.dt_ref > 0.0:
            raise ConfigError(f"dt_ref must be positive, got {self.dt_ref}")

    def gamma(self, s: int) -> float:
        return gamma_of(s, self)


@dataclass(frozen=True)
class EffortLaw:
    """Parameters of tau(s)."""

    tau_inf: float
    a: float
    b: float

    def __post_init__(self) -> None:
        if not self.tau_inf > 0.0:
            raise ConfigError(f"tau_inf must be positive, got {self.tau_inf}")
        if self.a < 0.0:
            raise ConfigError(f"a must be non-negative, got {self.a}")
        if not self.b > 0.0:
            raise ConfigError(f"b must be positive, got {self.b}")

    def tau(self, s: int) -> float:
        return tau_of(s, self)


@dataclass(frozen=True)
class ElementState:
    """Access count and knowledge level of one element."""

    s: int
    z: float

    def __post_init__(self) -> None:
        if self.s < 0:
            raise ConfigError(f"access count must be non-negative, got {self.s}")
        if not 0.0 <= self.z <= 1.0:
            raise ConfigError(f"knowledge level must be in [0, 1], got {self.z}")


def gamma_of(s: int, law: ForgettingLaw) -> float:
    """Forgetting coefficient after s accesses."""
    if s < 0:
        raise ValueError(f"access count must be non-negative, got {s}")
    return law.gamma0 * math.exp(-s / law.beta)


def tau_of(s: int, law: EffortLaw) -> float:
    """Effort of the next access after s prior accesses."""
    if s < 0:
        raise ValueError(f"access count must be non-negative, got {s}")
    return law.tau_inf + law.a * math.exp(-s / law.b)


def decay_step(state: ElementState, law: ForgettingLaw, dt: float) -> ElementState:
    """One integration step of forgetting; s is unchanged.

    dt must be positive. In CONTINUOUS_RATE mode the explicit update is only
    stable while lambda*dt < 1 (lambda = gamma(s)/dt_ref); larger steps are
    rejected rather than allowed to push Z negative.
    """
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    g = gamma_of(state.s, law)
    if law.mode is DecayMode.PER_STEP:
        z = state.z * (1.0 - g)
    else:
        lam_dt = g / law.dt_ref * dt
        if lam_dt >= 1.0:
            raise ValueError(
                f"unstable step: lambda*dt = {lam_dt} >= 1; reduce dt or gamma0"
            )
        z = state.z * (1.0 - lam_dt)
    # exact arithmetic keeps z in [0, 1]; guard against rounding at the edges
    if z < 0.0:
        z = 0.0
    elif z > 1.0:
        z = 1.0
    return ElementState(s=state.s, z=z)


def closed_form_decay(z0: float, gamma_step: float, n: int) -> float:
    """Knowledge level after n uninterrupted steps with constant loss factor.

    Reference value for the step loop: z0 * (1 - gamma_step)^n.
    """
    if n < 0:
        raise ValueError(f"step count must be non-negative, got {n}")
    if not 0.0 <= gamma_step < 1.0:
        raise ValueError(f"gamma_step must be in [0, 1), got {gamma_step}")
    return z0 * (1.0 - gamma_step) ** n


def access(state: ElementState, law: EffortLaw) -> tuple[ElementState, float]:
    """Access an element: increment s, reset Z to 1, pay tau at the new s.

    The effort uses the post-increment count: the access being paid for is
    itself practice.
    """
    s_new = state.s + 1
    return ElementState(s=s_new, z=1.0), tau_of(s_new, law)
