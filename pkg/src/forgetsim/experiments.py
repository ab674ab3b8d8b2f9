"""Reference scenario presets, the lesson-size sweep, and derived measures.

Three bundled scenarios exercise the three busy policies:

    pr1: one element, six presentations at fixed times, clock-jumping effort.
    pr2: one 300-UEV lesson, random selection, the active element is exempt
         from decay while its effort is paid. N defaults to 13; the bundled
         charts use 10 (both appear in the sources this reproduces).
    pr3: three 180-UEV lessons separated by 220-UEV breaks, random selection,
         everything decays during effort intervals.

The sweep replaces pr2's random selection with round-robin (making it
deterministic) and asks: for a fixed lesson length, how many elements is it
worth teaching? Few elements are overlearned (efficiency K = Z/N near 1 but
little total knowledge); too many are each seen too rarely to stick.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .engine import SimulationConfig, metrics_at, run
from .errors import ConfigError
from .laws import EffortLaw, ForgettingLaw
from .scheduling import BusyPolicy, FixedTimes, LessonSchedule, RoundRobin, UniformRandom

__all__ = [
    "SweepRow",
    "preset_pr1",
    "preset_pr2",
    "preset_pr3",
    "preset",
    "PRESET_NAMES",
    "sweep_n",
    "find_optimal_n",
    "information_rate",
]


def preset_pr1() -> SimulationConfig:
    return SimulationConfig(
        n=1,
        dt=0.001,
        t_start=-3.0,
        t_end=25.0,
        forgetting=ForgettingLaw(gamma0=0.002, beta=1.0, dt_ref=0.001),
        effort=EffortLaw(tau_inf=1.0, a=1.5, b=5.0),
        schedule=LessonSchedule(((-3.0, 25.0),)),
        policy=FixedTimes(
            ((3.0, 1), (6.0, 1), (9.0, 1), (12.0, 1), (15.0, 1), (18.0, 1))
        ),
        busy=BusyPolicy.SKIP_TIME,
        sample_every=1,
        seed=1,
    )


def preset_pr2(n: int = 13) -> SimulationConfig:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ConfigError(f"n must be a positive integer, got {n!r}")
    return SimulationConfig(
        n=n,
        dt=0.005,
        t_start=-3.0,
        t_end=700.0,
        forgetting=ForgettingLaw(gamma0=0.002, beta=3.0, dt_ref=0.005),
        effort=EffortLaw(tau_inf=1.0, a=2.0, b=2.0),
        schedule=LessonSchedule(((50.0, 350.0),)),
        policy=UniformRandom(),
        busy=BusyPolicy.FREEZE_ACTIVE,
        sample_every=1,
        seed=1,
    )


def preset_pr3() -> SimulationConfig:
    return SimulationConfig(
        n=30,
        dt=0.003,
        t_start=-20.0,
        t_end=1100.0,
        forgetting=ForgettingLaw(gamma0=0.002, beta=1.5, dt_ref=0.003),
        effort=EffortLaw(tau_inf=1.0, a=2.0, b=2.0),
        schedule=LessonSchedule(((0.0, 180.0), (400.0, 580.0), (800.0, 980.0))),
        policy=UniformRandom(),
        busy=BusyPolicy.DECAY_ALL,
        sample_every=2,  # keeps the trajectory under 200k samples
        seed=1,
    )


PRESET_NAMES = ("pr1", "pr2", "pr3")


def preset(name: str, n: int | None = None) -> SimulationConfig:
    """Look up a preset by name; n applies to pr2 only."""
    if name == "pr1":
        cfg = preset_pr1()
    elif name == "pr2":
        return preset_pr2(13 if n is None else n)
    elif name == "pr3":
        cfg = preset_pr3()
    else:
        raise ConfigError(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")
    if n is not None:
        raise ConfigError(f"preset {name!r} has a fixed element count")
    return cfg


@dataclass(frozen=True)
class SweepRow:
    """One sweep measurement: knowledge, mean forgetting, efficiency at N."""

    n: int
    z_final: float
    mean_gamma_final: float
    k: float


def sweep_n(
    n_values: Iterable[int],
    measure_at: float = 700.0,
    backend: str | None = None,
) -> list[SweepRow]:
    """Run the round-robin lesson for each N; measure at measure_at.

    Deterministic: round-robin selection has no randomness, so repeated calls
    return identical rows.
    """
    values = list(n_values)
    if not values:
        raise ConfigError("n_values must be non-empty")
    rows: list[SweepRow] = []
    for n in sorted(values):
        cfg = replace(preset_pr2(n), policy=RoundRobin(start=1))
        if not cfg.t_start <= measure_at <= cfg.t_end:
            raise ConfigError(
                f"measure_at {measure_at} outside run interval "
                f"[{cfg.t_start}, {cfg.t_end}]"
            )
        result = run(cfg, backend=backend)
        m = metrics_at(result.trajectory, measure_at)
        rows.append(
            SweepRow(
                n=n,
                z_final=m.z_total,
                mean_gamma_final=m.mean_gamma,
                k=m.z_total / n,
            )
        )
    return rows


def find_optimal_n(rows: Sequence[SweepRow]) -> int:
    """N with the largest Z_final; ties go to the smaller N."""
    if not rows:
        raise ConfigError("rows must be non-empty")
    seen = set()
    for row in rows:
        if row.n in seen:
            raise ConfigError(f"duplicate N={row.n} in sweep rows")
        seen.add(row.n)
    best = None
    for row in sorted(rows, key=lambda r: r.n):
        if best is None or row.z_final > best.z_final:
            best = row
    return best.n


def information_rate(config: SimulationConfig) -> float:
    """Elements per UEV of lesson time: N / total window duration."""
    total = config.schedule.total_duration()
    if not total > 0.0:
        raise ConfigError("information rate undefined: schedule has no lesson time")
    return config.n / total
