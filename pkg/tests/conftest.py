"""Shared fixtures: small fast configs on power-of-two time grids.

dt values are negative powers of two and interval bounds are integers, so
step counts are exact and accumulated clock values carry no rounding noise.
"""
import pytest

from forgetsim import (
    BusyPolicy,
    EffortLaw,
    ForgettingLaw,
    LessonSchedule,
    SimulationConfig,
    available_backends,
)

BACKENDS = available_backends()


def make_config(**overrides) -> SimulationConfig:
    """A small freeze-active run on [0, 8] with one open window."""
    base = dict(
        n=3,
        dt=1 / 64,
        t_start=0.0,
        t_end=8.0,
        forgetting=ForgettingLaw(gamma0=0.01, beta=2.0),
        effort=EffortLaw(tau_inf=0.5, a=1.0, b=3.0),
        schedule=LessonSchedule(windows=((0.0, 8.0),)),
        policy=None,
        busy=BusyPolicy.FREEZE_ACTIVE,
        sample_every=1,
        seed=1,
    )
    base.update(overrides)
    return SimulationConfig(**base)


def decay_only_config(gamma0: float, *, n=1, steps=1024, dt=1 / 64, **overrides):
    """No windows, no policy: nothing ever fires, knowledge only decays."""
    kwargs = dict(
        n=n,
        dt=dt,
        t_start=0.0,
        t_end=steps * dt,
        forgetting=ForgettingLaw(gamma0=gamma0, beta=1.0),
        schedule=LessonSchedule(windows=()),
    )
    kwargs.update(overrides)
    return make_config(**kwargs)


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param
