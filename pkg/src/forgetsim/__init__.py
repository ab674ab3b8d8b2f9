"""forgetsim: deterministic simulator of practice-driven learning.

Each element of study material carries a knowledge level Z in [0, 1] that
jumps to 1 when the element is accessed and decays geometrically between
accesses; both the forgetting coefficient and the access effort shrink
exponentially with the element's access count. The package provides the
stepping engine, reference scenario presets, a lesson-size sweep, a CLI, and
an interactive trainer service with an HTTP API.
"""
from .backend import available_backends, default_backend
from .engine import (
    EV_PAUSE,
    EV_PRESENT,
    EV_PROBE,
    EV_SET_RATE,
    AccessEvent,
    AdvanceResult,
    ProbeResult,
    RejectedControl,
    RunResult,
    SimState,
    SimulationConfig,
    Trajectory,
    TrajectorySample,
    metrics_at,
    run,
)
from .errors import ConfigError, ScheduleComplete
from .laws import (
    DecayMode,
    EffortLaw,
    ElementState,
    ForgettingLaw,
    access,
    closed_form_decay,
    decay_step,
    gamma_of,
    tau_of,
)
from .scheduling import (
    BusyBehavior,
    BusyPolicy,
    FixedTimes,
    LessonSchedule,
    RoundRobin,
    SelectionPolicy,
    UniformRandom,
    busy_elapse,
    in_lesson,
    initial_policy_state,
    next_element,
)

__version__ = "0.1.0"

__all__ = [
    "EV_PAUSE",
    "EV_PRESENT",
    "EV_PROBE",
    "EV_SET_RATE",
    "AccessEvent",
    "AdvanceResult",
    "BusyBehavior",
    "BusyPolicy",
    "ConfigError",
    "DecayMode",
    "EffortLaw",
    "ElementState",
    "FixedTimes",
    "ForgettingLaw",
    "LessonSchedule",
    "ProbeResult",
    "RejectedControl",
    "RoundRobin",
    "RunResult",
    "ScheduleComplete",
    "SelectionPolicy",
    "SimState",
    "SimulationConfig",
    "Trajectory",
    "TrajectorySample",
    "UniformRandom",
    "access",
    "available_backends",
    "busy_elapse",
    "closed_form_decay",
    "decay_step",
    "default_backend",
    "gamma_of",
    "in_lesson",
    "initial_policy_state",
    "metrics_at",
    "next_element",
    "run",
    "tau_of",
    "__version__",
]
