"""Interactive trainer sessions.

A session wraps the same stepping engine the batch simulator uses, but with
no selection policy: which element is presented, and when, comes from control
inputs submitted by a human (or from an automatic presentation rate they set).
Simulated time advances only on advance() calls, so the client chooses the
pacing. At the deadline the session is scored: total knowledge, efficiency
K = Z_total/N, per-element access counts, and the full trajectory.

Replay equivalence is the core honesty property: the accepted-presentation
log of any finished session, turned into a FixedTimes policy via
replay_config(), reproduces the session's trajectory through engine.run()
bit-for-bit (the acceptance bound is 1e-9; the construction gives exact).
"""
from __future__ import annotations

import math
import secrets
import threading
from dataclasses import dataclass, replace
from enum import Enum
from typing import Union

from .engine import (
    EV_PAUSE,
    EV_PRESENT,
    EV_PROBE,
    EV_SET_RATE,
    SimState,
    SimulationConfig,
    Trajectory,
)
from .errors import ConfigError
from .scheduling import FixedTimes, in_lesson

__all__ = [
    "Visibility",
    "SessionStatus",
    "Present",
    "SetAutoRate",
    "PauseAuto",
    "Probe",
    "Control",
    "ApiError",
    "Session",
    "SessionStore",
    "replay_config",
]


class Visibility(Enum):
    INSTRUCTOR = "instructor"  # true knowledge levels visible
    BLIND = "blind"  # knowledge revealed only through probes


class SessionStatus(Enum):
    RUNNING = "running"
    FINISHED = "finished"


@dataclass(frozen=True)
class Present:
    at: float
    element: int


@dataclass(frozen=True)
class SetAutoRate:
    at: float
    rate: float  # presentations per UEV; element drawn uniformly at random


@dataclass(frozen=True)
class PauseAuto:
    at: float


@dataclass(frozen=True)
class Probe:
    at: float
    element: int


Control = Union[Present, SetAutoRate, PauseAuto, Probe]

_REJECT_REASONS = {
    "busy": "an effort interval is still being paid",
    "outside_lesson": "the clock is outside every lesson window",
    "not_blind": "probes are only available in blind sessions",
}


class ApiError(Exception):
    """Service-level error with a machine-readable code and an HTTP status."""

    def __init__(self, code: str, reason: str, http_status: int):
        super().__init__(f"{code}: {reason}")
        self.code = code
        self.reason = reason
        self.http_status = http_status


def _unknown_session(session_id: str) -> ApiError:
    return ApiError("unknown_session", f"no session with id {session_id!r}", 404)


class Session:
    """One steerable lesson. All operations are serialized per session."""

    def __init__(
        self,
        session_id: str,
        config: SimulationConfig,
        visibility: Visibility,
        backend: str | None = None,
    ):
        if config.policy is not None:
            raise ConfigError(
                "trainer sessions take no selection policy; presentations come "
                "from controls"
            )
        self.id = session_id
        self.config = config
        self.visibility = visibility
        self.status = SessionStatus.RUNNING
        self._state = SimState(config, accept_controls=True, backend=backend)
        self._lock = threading.RLock()
        self.control_log: list[dict] = []  # append-only audit of submissions

    # -- introspection ------------------------------------------------------

    @property
    def clock(self) -> float:
        return self._state.t

    @property
    def busy_until(self) -> float | None:
        remaining = self._state.busy_remaining
        return self._state.t + remaining if remaining > 0.0 else None

    @property
    def accesses(self):
        return tuple(self._state.access_log)

    def snapshot(self) -> dict:
        """JSON-ready state view; blind sessions omit all knowledge values."""
        with self._lock:
            cfg = self.config
            blind = self.visibility is Visibility.BLIND
            s_list = self._state.s.tolist()
            elements = []
            if blind:
                for i, s in enumerate(s_list):
                    elements.append({"index": i + 1, "s": int(s)})
            else:
                z_list = self._state.z.tolist()
                for i, s in enumerate(s_list):
                    elements.append(
                        {"index": i + 1, "s": int(s), "z": float(z_list[i])}
                    )
            snap = {
                "id": self.id,
                "status": self.status.value,
                "visibility": self.visibility.value,
                "clock": self.clock,
                "t_start": cfg.t_start,
                "t_end": cfg.t_end,
                "dt": cfg.dt,
                "n": cfg.n,
                "windows": [[a, b] for a, b in cfg.schedule.windows],
                "in_lesson": in_lesson(self.clock, cfg.schedule),
                "busy_until": self.busy_until,
                "active": self._state.active,
                "auto_rate": self._state.auto_rate,
                "elements": elements,
            }
            if not blind:
                snap["z_total"] = self._state.z_total()
            return snap

    # -- control ------------------------------------------------------------

    def advance(self, duration: float, controls: tuple[Control, ...] = ()) -> dict:
        """Advance the clock by duration, applying timestamped controls.

        Timestamps must lie within [clock, clock + duration]. The clock moves
        in whole integration steps, so it lands on the first step boundary at
        or past the requested stop. Advancing past the deadline clamps at
        t_end and finishes the session; the surplus duration is ignored.
        Returns the post-advance snapshot plus a results block for this batch.
        """
        with self._lock:
            if self.status is not SessionStatus.RUNNING:
                raise ApiError("session_finished", "session already finished", 409)
            if not (
                isinstance(duration, (int, float))
                and math.isfinite(duration)
                and duration > 0.0
            ):
                raise ApiError(
                    "invalid_control", f"duration must be positive, got {duration}", 400
                )
            t0 = self.clock
            t_stop = min(t0 + duration, self.config.t_end)

            pre_rejected: list[dict] = []
            live: list[tuple[int, Control]] = []
            for idx, control in enumerate(controls):
                at = getattr(control, "at", None)
                if not (
                    isinstance(at, (int, float))
                    and math.isfinite(at)
                    and t0 <= at <= t0 + duration
                ):
                    raise ApiError(
                        "invalid_control",
                        f"control {idx}: timestamp {at} outside "
                        f"[{t0}, {t0 + duration}]",
                        400,
                    )
                if at > t_stop:
                    raise ApiError(
                        "invalid_control",
                        f"control {idx}: timestamp {at} beyond the session "
                        f"deadline {self.config.t_end}",
                        400,
                    )
                if isinstance(control, (Present, Probe)):
                    el = control.element
                    if not (
                        isinstance(el, int)
                        and not isinstance(el, bool)
                        and 1 <= el <= self.config.n
                    ):
                        raise ApiError(
                            "invalid_control",
                            f"control {idx}: element must be in 1..{self.config.n}, "
                            f"got {el!r}",
                            400,
                        )
                if isinstance(control, SetAutoRate):
                    r = control.rate
                    if not (
                        isinstance(r, (int, float)) and math.isfinite(r) and r >= 0.0
                    ):
                        raise ApiError(
                            "invalid_control",
                            f"control {idx}: rate must be finite and >= 0, got {r!r}",
                            400,
                        )
                if (
                    isinstance(control, Probe)
                    and self.visibility is not Visibility.BLIND
                ):
                    pre_rejected.append(self._describe(control, idx, "not_blind"))
                    continue
                live.append((idx, control))

            live.sort(key=lambda pair: pair[1].at)  # stable: ties keep order
            events = []
            for _, control in live:
                if isinstance(control, Present):
                    events.append((control.at, EV_PRESENT, float(control.element)))
                elif isinstance(control, SetAutoRate):
                    events.append((control.at, EV_SET_RATE, float(control.rate)))
                elif isinstance(control, PauseAuto):
                    events.append((control.at, EV_PAUSE, 0.0))
                elif isinstance(control, Probe):
                    events.append((control.at, EV_PROBE, float(control.element)))
                else:
                    raise ApiError(
                        "invalid_control", f"unknown control {control!r}", 400
                    )

            outcome = self._state.advance(t_stop, events)

            rejected = list(pre_rejected)
            for rej in outcome.rejections:
                idx, control = live[rej.event_index]
                rejected.append(self._describe(control, idx, rej.code))
            rejected.sort(key=lambda entry: entry["index"])
            probes = []
            for probe in outcome.probes:
                idx, control = live[probe.event_index]
                probes.append(
                    {
                        "index": idx,
                        "at": control.at,
                        "t": probe.t,
                        "element": probe.element,
                        "z": probe.z,
                    }
                )
            presented = [
                {"t": a.t, "element": a.element, "s": a.s_after}
                for a in outcome.accesses
            ]
            for idx, control in live:
                entry = self._describe(control, idx, None)
                entry["accepted"] = not any(r["index"] == idx for r in rejected)
                self.control_log.append(entry)
            for entry in pre_rejected:
                logged = dict(entry)
                logged["accepted"] = False
                self.control_log.append(logged)

            if self.clock >= self.config.t_end:
                self._finish_locked()

            snap = self.snapshot()
            snap["results"] = {
                "presented": presented,
                "rejected": rejected,
                "probes": probes,
            }
            return snap

    @staticmethod
    def _describe(control: Control, idx: int, code: str | None) -> dict:
        entry: dict = {"index": idx, "at": control.at}
        if isinstance(control, Present):
            entry["type"] = "present"
            entry["element"] = control.element
        elif isinstance(control, SetAutoRate):
            entry["type"] = "set_auto_rate"
            entry["rate"] = control.rate
        elif isinstance(control, PauseAuto):
            entry["type"] = "pause_auto"
        else:
            entry["type"] = "probe"
            entry["element"] = control.element
        if code is not None:
            entry["code"] = code
            entry["reason"] = _REJECT_REASONS[code]
        return entry

    def _finish_locked(self) -> None:
        if self.clock < self.config.t_end:
            self._state.advance(self.config.t_end)
        self._state.finalize()
        self.status = SessionStatus.FINISHED

    def finish(self) -> dict:
        """Run out the clock to the deadline with no controls. Idempotent."""
        with self._lock:
            if self.status is SessionStatus.RUNNING:
                self._finish_locked()
            return self.snapshot()

    # -- reporting ------------------------------------------------------------

    def trajectory(self) -> Trajectory:
        """Recorded samples. Blind sessions expose this only once finished
        (samples carry Z_total)."""
        with self._lock:
            if (
                self.visibility is Visibility.BLIND
                and self.status is SessionStatus.RUNNING
            ):
                raise ApiError(
                    "blind_trajectory",
                    "trajectory of a blind session is available after finish",
                    403,
                )
            return self._state.trajectory_view()

    def score(self) -> dict:
        """Final report; requires the session to be finished."""
        with self._lock:
            if self.status is not SessionStatus.FINISHED:
                raise ApiError(
                    "session_not_finished",
                    "score is available once the session is finished",
                    409,
                )
            trajectory = self._state.finalize()
            z_total = float(trajectory.z_total[-1])
            return {
                "z_total": z_total,
                "k": z_total / self.config.n,
                "s": [int(v) for v in self._state.s.tolist()],
                "n_presentations": len(self._state.access_log),
                "trajectory": trajectory_payload(trajectory),
            }


def trajectory_payload(trajectory: Trajectory) -> list[dict]:
    """samples[] JSON shape shared by the trajectory and score endpoints."""
    t = trajectory.t.tolist()
    zt = trajectory.z_total.tolist()
    mt = trajectory.mean_tau.tolist()
    mg = trajectory.mean_gamma.tolist()
    act = trajectory.active.tolist()
    return [
        {
            "t": t[i],
            "z_total": zt[i],
            "mean_tau": mt[i],
            "mean_gamma": mg[i],
            "active": act[i] if act[i] > 0 else None,
        }
        for i in range(len(t))
    ]


def replay_config(session: Session) -> SimulationConfig:
    """FixedTimes config reproducing a session's realized presentations."""
    pairs = tuple((a.t, a.element) for a in session.accesses)
    return replace(session.config, policy=FixedTimes(pairs))


class SessionStore:
    """In-memory session registry; contents do not survive the process."""

    def __init__(self, backend: str | None = None):
        self._backend = backend
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, config: SimulationConfig, visibility: Visibility) -> Session:
        session_id = secrets.token_hex(8)
        session = Session(session_id, config, visibility, backend=self._backend)
        with self._lock:
            self._sessions[session_id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise _unknown_session(session_id)
        return session

    def __len__(self) -> int:
        with self._lock:
            return len(self._sessions)
