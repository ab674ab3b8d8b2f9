"""Time-stepping engine.

Advances the clock in steps of dt over [t_start, t_end], fires access events
per the selection policy inside lesson windows, applies decay per the busy
policy, and records trajectory samples on a fixed step stride.

The inner loop lives in a kernel module (see backend.py); this module owns
configuration, state setup, output capacity bookkeeping, and the sample/event
containers. SimState is the resumable form used by the trainer service; run()
is the one-shot form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend as _backend
from .errors import ConfigError
from .laws import DecayMode, EffortLaw, ForgettingLaw
from .prng import seed_state
from .scheduling import (
    BusyPolicy,
    FixedTimes,
    LessonSchedule,
    RoundRobin,
    UniformRandom,
    SelectionPolicy,
)

__all__ = [
    "SimulationConfig",
    "TrajectorySample",
    "Trajectory",
    "AccessEvent",
    "RejectedControl",
    "ProbeResult",
    "AdvanceResult",
    "SimState",
    "RunResult",
    "run",
    "metrics_at",
    "EV_PRESENT",
    "EV_SET_RATE",
    "EV_PAUSE",
    "EV_PROBE",
]

# control-event kinds and rejection codes shared with the kernels
EV_PRESENT = 1
EV_SET_RATE = 2
EV_PAUSE = 3
EV_PROBE = 4

_REJ_CODES = {1: "busy", 2: "outside_lesson"}

_BUSY_CODE = {
    BusyPolicy.SKIP_TIME: 0,
    BusyPolicy.FREEZE_ACTIVE: 1,
    BusyPolicy.DECAY_ALL: 2,
}


@dataclass(frozen=True)
class SimulationConfig:
    """Complete, self-contained description of one run.

    policy=None means no scheduled selection at all; accesses then come only
    from external control events (the trainer) or never (pure decay).
    """

    n: int
    dt: float
    t_start: float
    t_end: float
    forgetting: ForgettingLaw
    effort: EffortLaw
    schedule: LessonSchedule
    policy: SelectionPolicy | None
    busy: BusyPolicy
    sample_every: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or isinstance(self.n, bool):
            raise ConfigError(f"n must be an integer, got {self.n!r}")
        if self.n < 1:
            raise ConfigError(f"n must be at least 1, got {self.n}")
        for name in ("dt", "t_start", "t_end"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise ConfigError(f"{name} must be a number, got {v!r}")
            object.__setattr__(self, name, float(v))
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite, got {v}")
        if not self.dt > 0.0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if not self.t_start < self.t_end:
            raise ConfigError(
                f"t_start must precede t_end, got [{self.t_start}, {self.t_end}]"
            )
        if not isinstance(self.forgetting, ForgettingLaw):
            raise ConfigError("forgetting must be a ForgettingLaw")
        if not isinstance(self.effort, EffortLaw):
            raise ConfigError("effort must be an EffortLaw")
        if not isinstance(self.schedule, LessonSchedule):
            raise ConfigError("schedule must be a LessonSchedule")
        if not isinstance(self.busy, BusyPolicy):
            raise ConfigError("busy must be a BusyPolicy")
        if not isinstance(self.sample_every, int) or isinstance(self.sample_every, bool):
            raise ConfigError(f"sample_every must be an integer, got {self.sample_every!r}")
        if self.sample_every < 1:
            raise ConfigError(f"sample_every must be at least 1, got {self.sample_every}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ConfigError(f"seed must be an integer, got {self.seed!r}")
        p = self.policy
        if p is not None:
            if not isinstance(p, (FixedTimes, UniformRandom, RoundRobin)):
                raise ConfigError(f"unknown selection policy {p!r}")
            if isinstance(p, FixedTimes):
                for _, e in p.pairs:
                    if e > self.n:
                        raise ConfigError(
                            f"fixed schedule names element {e}, but n = {self.n}"
                        )
            if isinstance(p, RoundRobin) and p.start > self.n:
                raise ConfigError(
                    f"round-robin start {p.start} exceeds n = {self.n}"
                )
        law = self.forgetting
        if law.mode is DecayMode.CONTINUOUS_RATE:
            lam_dt = law.gamma0 / law.dt_ref * self.dt
            if lam_dt >= 1.0:
                raise ConfigError(
                    f"unstable continuous-rate step: gamma0/dt_ref*dt = {lam_dt} >= 1"
                )


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    z_total: float
    mean_tau: float
    mean_gamma: float
    active: int | None
    per_element_z: tuple[float, ...] | None = None


class Trajectory:
    """Columnar record of samples; arrays are read-only and share no state."""

    __slots__ = ("t", "z_total", "mean_tau", "mean_gamma", "active", "per_element")

    def __init__(self, t, z_total, mean_tau, mean_gamma, active, per_element=None):
        self.t = t
        self.z_total = z_total
        self.mean_tau = mean_tau
        self.mean_gamma = mean_gamma
        self.active = active
        self.per_element = per_element
        for arr in (t, z_total, mean_tau, mean_gamma, active, per_element):
            if arr is not None:
                arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.t)

    def sample(self, i: int) -> TrajectorySample:
        idx = int(i)
        act = int(self.active[idx])
        return TrajectorySample(
            t=float(self.t[idx]),
            z_total=float(self.z_total[idx]),
            mean_tau=float(self.mean_tau[idx]),
            mean_gamma=float(self.mean_gamma[idx]),
            active=act if act > 0 else None,
            per_element_z=tuple(self.per_element[idx].tolist())
            if self.per_element is not None
            else None,
        )

    __getitem__ = sample


def metrics_at(trajectory: Trajectory, t: float) -> TrajectorySample:
    """Sample at the greatest recorded time <= t (floor semantics)."""
    idx = int(np.searchsorted(trajectory.t, t, side="right")) - 1
    if idx < 0:
        raise ValueError(
            f"t={t} precedes the first recorded sample at t={float(trajectory.t[0])}"
        )
    return trajectory.sample(idx)


@dataclass(frozen=True)
class AccessEvent:
    """One realized access: time, 1-based element, post-increment count."""

    t: float
    element: int
    s_after: int


@dataclass(frozen=True)
class RejectedControl:
    """A control event the engine refused; index into the submitted batch."""

    event_index: int
    code: str


@dataclass(frozen=True)
class ProbeResult:
    event_index: int
    t: float
    element: int
    z: float


@dataclass(frozen=True)
class AdvanceResult:
    accesses: tuple[AccessEvent, ...]
    rejections: tuple[RejectedControl, ...]
    probes: tuple[ProbeResult, ...]


def _seq_sum(arr) -> float:
    # left-to-right accumulation, matching the kernels' sample sums
    total = 0.0
    for v in arr.tolist():
        total += v
    return total


def _window_overlap(windows, t0: float, t1: float) -> float:
    total = 0.0
    for a, b in windows:
        lo = max(a, t0)
        hi = min(b, t1)
        if hi > lo:
            total += hi - lo
    return total


class SimState:
    """Resumable stepping state.

    advance() integrates up to a stop time, optionally applying timestamped
    control events on the way; finalize() closes the trajectory. run() wraps
    the whole thing for the one-shot case.
    """

    def __init__(
        self,
        config: SimulationConfig,
        record_per_element: bool = False,
        backend: str | None = None,
        accept_controls: bool = False,
        initial_z=None,
    ):
        """initial_z warm-starts the knowledge vector (default: all zeros);
        access counts always start at zero."""
        self.config = config
        self._kernel = _backend.get_kernel(backend)
        self.backend_name = self._kernel.BACKEND_NAME
        self._accept_controls = bool(accept_controls)
        self._record_pe = bool(record_per_element)

        n = config.n
        law = config.forgetting
        eff = config.effort
        self._cfac = (
            1.0 if law.mode is DecayMode.PER_STEP else config.dt / law.dt_ref
        )
        g0 = law.gamma0  # gamma at s=0: gamma0 * exp(0) == gamma0
        tau0 = eff.tau_inf + eff.a * 1.0
        if initial_z is None:
            self.z = np.zeros(n, dtype=np.float64)
        else:
            self.z = np.array(initial_z, dtype=np.float64).copy()
            if self.z.shape != (n,):
                raise ConfigError(f"initial_z must have shape ({n},)")
            if np.any(self.z < 0.0) or np.any(self.z > 1.0):
                raise ConfigError("initial_z values must lie in [0, 1]")
        self.s = np.zeros(n, dtype=np.int64)
        self._gamma_cur = np.full(n, g0, dtype=np.float64)
        self._tau_cur = np.full(n, tau0, dtype=np.float64)
        self._factor = np.full(n, 1.0 - g0 * self._cfac, dtype=np.float64)

        windows = config.schedule.windows
        self._win_start = np.array([w[0] for w in windows], dtype=np.float64)
        self._win_end = np.array([w[1] for w in windows], dtype=np.float64)
        wc0 = int(np.searchsorted(self._win_end, config.t_start, side="right"))

        policy = config.policy
        if policy is None:
            self._policy_kind = 0
            self._fixed_times = np.zeros(0, dtype=np.float64)
            self._fixed_elems = np.zeros(0, dtype=np.int64)
            rr0 = 0
        elif isinstance(policy, FixedTimes):
            self._policy_kind = 1
            self._fixed_times = np.array([p[0] for p in policy.pairs], dtype=np.float64)
            self._fixed_elems = np.array([p[1] for p in policy.pairs], dtype=np.int64)
            rr0 = 0
        elif isinstance(policy, UniformRandom):
            self._policy_kind = 2
            self._fixed_times = np.zeros(0, dtype=np.float64)
            self._fixed_elems = np.zeros(0, dtype=np.int64)
            rr0 = 0
        else:
            self._policy_kind = 3
            self._fixed_times = np.zeros(0, dtype=np.float64)
            self._fixed_elems = np.zeros(0, dtype=np.int64)
            rr0 = policy.start

        seed_eff = config.seed
        if isinstance(policy, UniformRandom) and policy.seed is not None:
            seed_eff = policy.seed

        sum_g = _seq_sum(self._gamma_cur)
        sum_t = _seq_sum(self._tau_cur)
        self._fstate = np.array(
            [config.t_start, 0.0, 0.0, math.inf, sum_g, sum_t], dtype=np.float64
        )
        self._istate = np.array([0, 0, rr0, 0, wc0], dtype=np.int64)
        self._rstate = np.array([seed_state(seed_eff)], dtype=np.uint64)

        self._busy_kind = _BUSY_CODE[config.busy]
        self.access_log: list[AccessEvent] = []
        self._chunks: list[tuple] = []
        self._trajectory: Trajectory | None = None
        self._append_current_sample()  # sample at t_start, step 0

    # -- state views ------------------------------------------------------

    @property
    def t(self) -> float:
        return float(self._fstate[0])

    @property
    def step(self) -> int:
        return int(self._istate[0])

    @property
    def busy_remaining(self) -> float:
        return max(0.0, float(self._fstate[1]))

    @property
    def active(self) -> int | None:
        a = int(self._istate[1])
        return a if a > 0 else None

    @property
    def auto_rate(self) -> float:
        return float(self._fstate[2])

    @property
    def sum_gamma(self) -> float:
        return float(self._fstate[4])

    @property
    def sum_tau(self) -> float:
        return float(self._fstate[5])

    @property
    def finalized(self) -> bool:
        return self._trajectory is not None

    def z_total(self) -> float:
        return _seq_sum(self.z)

    # -- stepping ---------------------------------------------------------

    def advance(self, t_stop: float, events=()) -> AdvanceResult:
        """Integrate until the clock reaches t_stop.

        events is a sequence of (time, kind, arg) triples, non-decreasing in
        time, with kind one of EV_PRESENT/EV_SET_RATE/EV_PAUSE/EV_PROBE. An
        event fires at the first step whose clock is >= its time.
        """
        if self._trajectory is not None:
            raise RuntimeError("state is finalized; no further stepping")
        cfg = self.config
        t = self.t
        if not t_stop > t:
            raise ValueError(f"t_stop {t_stop} must exceed current time {t}")
        if t_stop > cfg.t_end:
            raise ValueError(f"t_stop {t_stop} exceeds t_end {cfg.t_end}")
        if events and not self._accept_controls:
            raise ValueError("this state does not accept control events")

        ev_time = np.zeros(len(events), dtype=np.float64)
        ev_kind = np.zeros(len(events), dtype=np.int64)
        ev_arg = np.zeros(len(events), dtype=np.float64)
        prev = -math.inf
        for i, (at, kind, arg) in enumerate(events):
            at = float(at)
            if at < prev:
                raise ValueError("control events must be ordered by time")
            prev = at
            if at > t_stop:
                raise ValueError(
                    f"control at t={at} lies beyond the advance stop time {t_stop}"
                )
            if kind in (EV_PRESENT, EV_PROBE):
                el = int(arg)
                if el != arg or not 1 <= el <= cfg.n:
                    raise ValueError(f"element index must be in 1..{cfg.n}, got {arg}")
            elif kind == EV_SET_RATE:
                if not (isinstance(arg, (int, float)) and math.isfinite(arg) and arg >= 0):
                    raise ValueError(f"rate must be finite and >= 0, got {arg}")
            elif kind != EV_PAUSE:
                raise ValueError(f"unknown control kind {kind}")
            ev_time[i] = at
            ev_kind[i] = kind
            ev_arg[i] = float(arg)

        steps_max = int(math.ceil((t_stop - t) / cfg.dt)) + 2
        cap_s = steps_max // cfg.sample_every + 2
        overlap = _window_overlap(cfg.schedule.windows, t, t_stop)
        n_fixed_rem = len(self._fixed_times) - int(self._istate[3])
        cap_a = (
            int(overlap / cfg.effort.tau_inf)
            + len(cfg.schedule.windows)
            + len(events)
            + n_fixed_rem
            + 8
        )

        n = cfg.n
        out_t = np.zeros(cap_s, dtype=np.float64)
        out_ztot = np.zeros(cap_s, dtype=np.float64)
        out_mtau = np.zeros(cap_s, dtype=np.float64)
        out_mgamma = np.zeros(cap_s, dtype=np.float64)
        out_active = np.zeros(cap_s, dtype=np.int64)
        out_pe = np.zeros((cap_s if self._record_pe else 0, n), dtype=np.float64)
        acc_t = np.zeros(cap_a, dtype=np.float64)
        acc_elem = np.zeros(cap_a, dtype=np.int64)
        acc_s = np.zeros(cap_a, dtype=np.int64)
        rej_idx = np.zeros(len(events), dtype=np.int64)
        rej_code = np.zeros(len(events), dtype=np.int64)
        probe_idx = np.zeros(len(events), dtype=np.int64)
        probe_t = np.zeros(len(events), dtype=np.float64)
        probe_z = np.zeros(len(events), dtype=np.float64)

        ns, na, nr, npr, status = self._kernel.run_interval(
            self.z, self.s, self._gamma_cur, self._tau_cur, self._factor,
            self._fstate, self._istate, self._rstate,
            float(t_stop), cfg.dt,
            self._cfac, cfg.forgetting.gamma0, cfg.forgetting.beta,
            cfg.effort.tau_inf, cfg.effort.a, cfg.effort.b,
            self._win_start, self._win_end,
            self._busy_kind, self._policy_kind,
            1 if self._accept_controls else 0,
            self._fixed_times, self._fixed_elems,
            ev_time, ev_kind, ev_arg,
            cfg.sample_every,
            out_t, out_ztot, out_mtau, out_mgamma, out_active, out_pe,
            acc_t, acc_elem, acc_s,
            rej_idx, rej_code,
            probe_idx, probe_t, probe_z,
        )
        if status != 0:
            raise RuntimeError(
                f"kernel capacity exhausted (status {status}); "
                f"cap_s={cap_s} cap_a={cap_a}"
            )

        self._chunks.append(
            (
                out_t[:ns], out_ztot[:ns], out_mtau[:ns], out_mgamma[:ns],
                out_active[:ns],
                out_pe[:ns] if self._record_pe else None,
            )
        )
        accesses = tuple(
            AccessEvent(float(acc_t[i]), int(acc_elem[i]), int(acc_s[i]))
            for i in range(na)
        )
        self.access_log.extend(accesses)
        rejections = tuple(
            RejectedControl(int(rej_idx[i]), _REJ_CODES[int(rej_code[i])])
            for i in range(nr)
        )
        probes = tuple(
            ProbeResult(
                int(probe_idx[i]),
                float(probe_t[i]),
                int(ev_arg[int(probe_idx[i])]),
                float(probe_z[i]),
            )
            for i in range(npr)
        )
        return AdvanceResult(accesses, rejections, probes)

    def _append_current_sample(self) -> None:
        n = self.config.n
        act = int(self._istate[1])
        self._chunks.append(
            (
                np.array([self.t]),
                np.array([_seq_sum(self.z)]),
                np.array([self.sum_tau / n]),
                np.array([self.sum_gamma / n]),
                np.array([act], dtype=np.int64),
                self.z.reshape(1, n).copy() if self._record_pe else None,
            )
        )

    def trajectory_view(self) -> Trajectory:
        """Samples recorded so far, without closing the state.

        Builds a fresh Trajectory on each call; after finalize() it returns
        the finalized trajectory itself.
        """
        if self._trajectory is not None:
            return self._trajectory
        parts = self._chunks
        return Trajectory(
            t=np.concatenate([p[0] for p in parts]),
            z_total=np.concatenate([p[1] for p in parts]),
            mean_tau=np.concatenate([p[2] for p in parts]),
            mean_gamma=np.concatenate([p[3] for p in parts]),
            active=np.concatenate([p[4] for p in parts]),
            per_element=np.concatenate([p[5] for p in parts])
            if self._record_pe
            else None,
        )

    def finalize(self) -> Trajectory:
        """Close the trajectory; appends a final sample if the last step
        landed off the sampling stride. Idempotent."""
        if self._trajectory is None:
            if self.step % self.config.sample_every != 0:
                self._append_current_sample()
            parts = self._chunks
            self._trajectory = Trajectory(
                t=np.concatenate([p[0] for p in parts]),
                z_total=np.concatenate([p[1] for p in parts]),
                mean_tau=np.concatenate([p[2] for p in parts]),
                mean_gamma=np.concatenate([p[3] for p in parts]),
                active=np.concatenate([p[4] for p in parts]),
                per_element=np.concatenate([p[5] for p in parts])
                if self._record_pe
                else None,
            )
            self._chunks = []
        return self._trajectory


@dataclass(frozen=True)
class RunResult:
    """Trajectory plus final per-element state of one completed run."""

    config: SimulationConfig
    trajectory: Trajectory
    z: np.ndarray
    s: np.ndarray
    accesses: tuple[AccessEvent, ...]
    backend: str

    def z_total_final(self) -> float:
        return float(self.trajectory.z_total[-1])


def run(
    config: SimulationConfig,
    record_per_element: bool = False,
    backend: str | None = None,
) -> RunResult:
    """Execute one complete run; deterministic given the config."""
    state = SimState(config, record_per_element=record_per_element, backend=backend)
    result = state.advance(config.t_end)
    trajectory = state.finalize()
    return RunResult(
        config=config,
        trajectory=trajectory,
        z=state.z,
        s=state.s,
        accesses=result.accesses,
        backend=state.backend_name,
    )
