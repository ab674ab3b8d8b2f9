"""Config files, CSV export, and run manifests.

The config file is JSON mirroring SimulationConfig field-for-field; floats
survive a round-trip bit-exactly (shortest-repr encoding both ways). CSV
numbers are written with 17 significant digits for the same reason. All
writes are atomic: temp file in the target directory, then rename.
"""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass

from .engine import SimulationConfig, Trajectory
from .errors import ConfigError
from .experiments import SweepRow
from .laws import DecayMode, EffortLaw, ForgettingLaw
from .scheduling import (
    BusyPolicy,
    FixedTimes,
    LessonSchedule,
    RoundRobin,
    UniformRandom,
)

__all__ = [
    "config_to_dict",
    "config_from_dict",
    "load_config",
    "dump_config",
    "atomic_write_text",
    "write_trajectory_csv",
    "write_per_element_csv",
    "write_sweep_csv",
    "RunManifest",
    "write_run_manifest",
    "write_sweep_manifest",
    "FORMAT_VERSION",
]

FORMAT_VERSION = 1

TRAJECTORY_HEADER = "t,Z_total,mean_tau,mean_gamma,active"
SWEEP_HEADER = "N,Z_final,mean_gamma_final,K"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


# -- config round-trip ------------------------------------------------------


def config_to_dict(config: SimulationConfig) -> dict:
    p = config.policy
    if p is None:
        policy = None
    elif isinstance(p, FixedTimes):
        policy = {"kind": "fixed_times", "pairs": [[t, e] for t, e in p.pairs]}
    elif isinstance(p, UniformRandom):
        policy = {"kind": "uniform_random", "seed": p.seed}
    elif isinstance(p, RoundRobin):
        policy = {"kind": "round_robin", "start": p.start}
    else:
        raise ConfigError(f"unknown selection policy {p!r}")
    return {
        "n": config.n,
        "dt": config.dt,
        "t_start": config.t_start,
        "t_end": config.t_end,
        "forgetting": {
            "gamma0": config.forgetting.gamma0,
            "beta": config.forgetting.beta,
            "mode": config.forgetting.mode.value,
            "dt_ref": config.forgetting.dt_ref,
        },
        "effort": {
            "tau_inf": config.effort.tau_inf,
            "a": config.effort.a,
            "b": config.effort.b,
        },
        "windows": [[a, b] for a, b in config.schedule.windows],
        "policy": policy,
        "busy": config.busy.value,
        "sample_every": config.sample_every,
        "seed": config.seed,
    }


def _require(d: dict, key: str, context: str):
    if key not in d:
        raise ConfigError(f"config is missing {context}{key!r}")
    return d[key]


def _check_unknown(d: dict, allowed: set[str], context: str) -> None:
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown config key(s) {sorted(unknown)} in {context}")


def config_from_dict(data: dict) -> SimulationConfig:
    if not isinstance(data, dict):
        raise ConfigError(f"config must be an object, got {type(data).__name__}")
    _check_unknown(
        data,
        {
            "n", "dt", "t_start", "t_end", "forgetting", "effort",
            "windows", "policy", "busy", "sample_every", "seed",
        },
        "top level",
    )
    fdict = _require(data, "forgetting", "")
    if not isinstance(fdict, dict):
        raise ConfigError("forgetting must be an object")
    _check_unknown(fdict, {"gamma0", "beta", "mode", "dt_ref"}, "forgetting")
    mode_name = fdict.get("mode", DecayMode.PER_STEP.value)
    try:
        mode = DecayMode(mode_name)
    except ValueError:
        raise ConfigError(
            f"forgetting.mode must be 'perstep' or 'continuous', got {mode_name!r}"
        ) from None
    forgetting = ForgettingLaw(
        gamma0=_require(fdict, "gamma0", "forgetting."),
        beta=_require(fdict, "beta", "forgetting."),
        mode=mode,
        dt_ref=fdict.get("dt_ref", 1.0),
    )
    edict = _require(data, "effort", "")
    if not isinstance(edict, dict):
        raise ConfigError("effort must be an object")
    _check_unknown(edict, {"tau_inf", "a", "b"}, "effort")
    effort = EffortLaw(
        tau_inf=_require(edict, "tau_inf", "effort."),
        a=_require(edict, "a", "effort."),
        b=_require(edict, "b", "effort."),
    )
    windows = _require(data, "windows", "")
    if not isinstance(windows, list) or not all(
        isinstance(w, (list, tuple)) and len(w) == 2 for w in windows
    ):
        raise ConfigError("windows must be a list of [start, end] pairs")
    schedule = LessonSchedule(tuple((w[0], w[1]) for w in windows))
    pdict = data.get("policy")
    if pdict is None:
        policy = None
    else:
        if not isinstance(pdict, dict):
            raise ConfigError("policy must be an object or null")
        kind = _require(pdict, "kind", "policy.")
        if kind == "fixed_times":
            _check_unknown(pdict, {"kind", "pairs"}, "policy")
            pairs = _require(pdict, "pairs", "policy.")
            if not isinstance(pairs, list) or not all(
                isinstance(p, (list, tuple)) and len(p) == 2 for p in pairs
            ):
                raise ConfigError("policy.pairs must be a list of [time, element] pairs")
            policy = FixedTimes(tuple((p[0], p[1]) for p in pairs))
        elif kind == "uniform_random":
            _check_unknown(pdict, {"kind", "seed"}, "policy")
            policy = UniformRandom(seed=pdict.get("seed"))
        elif kind == "round_robin":
            _check_unknown(pdict, {"kind", "start"}, "policy")
            policy = RoundRobin(start=pdict.get("start", 1))
        else:
            raise ConfigError(
                f"policy.kind must be fixed_times, uniform_random, or round_robin; "
                f"got {kind!r}"
            )
    busy_name = _require(data, "busy", "")
    try:
        busy = BusyPolicy(busy_name)
    except ValueError:
        raise ConfigError(
            f"busy must be one of {[b.value for b in BusyPolicy]}, got {busy_name!r}"
        ) from None
    return SimulationConfig(
        n=_require(data, "n", ""),
        dt=_require(data, "dt", ""),
        t_start=_require(data, "t_start", ""),
        t_end=_require(data, "t_end", ""),
        forgetting=forgetting,
        effort=effort,
        schedule=schedule,
        policy=policy,
        busy=busy,
        sample_every=data.get("sample_every", 1),
        seed=data.get("seed", 0),
    )


def load_config(path: str) -> SimulationConfig:
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return config_from_dict(data)


def dump_config(config: SimulationConfig, path: str) -> None:
    atomic_write_text(path, json.dumps(config_to_dict(config), indent=2) + "\n")


# -- atomic writes ----------------------------------------------------------


def atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


# -- CSV export -------------------------------------------------------------


def write_trajectory_csv(path: str, trajectory: Trajectory) -> None:
    lines = [TRAJECTORY_HEADER]
    t = trajectory.t.tolist()
    zt = trajectory.z_total.tolist()
    mt = trajectory.mean_tau.tolist()
    mg = trajectory.mean_gamma.tolist()
    act = trajectory.active.tolist()
    for i in range(len(t)):
        a = act[i]
        lines.append(
            f"{_fmt(t[i])},{_fmt(zt[i])},{_fmt(mt[i])},{_fmt(mg[i])},"
            f"{a if a > 0 else ''}"
        )
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_per_element_csv(path: str, trajectory: Trajectory) -> None:
    if trajectory.per_element is None:
        raise ValueError("trajectory was recorded without per-element values")
    n = trajectory.per_element.shape[1]
    header = "t," + ",".join(f"Z_{i + 1}" for i in range(n))
    lines = [header]
    t = trajectory.t.tolist()
    pe = trajectory.per_element.tolist()
    for i in range(len(t)):
        lines.append(_fmt(t[i]) + "," + ",".join(_fmt(v) for v in pe[i]))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_sweep_csv(path: str, rows: list[SweepRow]) -> None:
    lines = [SWEEP_HEADER]
    for row in rows:
        lines.append(
            f"{row.n},{_fmt(row.z_final)},{_fmt(row.mean_gamma_final)},{_fmt(row.k)}"
        )
    atomic_write_text(path, "\n".join(lines) + "\n")


# -- manifests ---------------------------------------------------------------


@dataclass(frozen=True)
class RunManifest:
    """Record of one run: the fully resolved config and the files written."""

    config: SimulationConfig
    outputs: tuple[str, ...]
    format_version: int = FORMAT_VERSION


def write_run_manifest(path: str, manifest: RunManifest) -> None:
    payload = {
        "format_version": manifest.format_version,
        "config": config_to_dict(manifest.config),
        "outputs": list(manifest.outputs),
    }
    atomic_write_text(path, json.dumps(payload, indent=2) + "\n")


def write_sweep_manifest(
    path: str, n_values: list[int], measure_at: float, outputs: list[str]
) -> None:
    payload = {
        "format_version": FORMAT_VERSION,
        "sweep": {"n_values": list(n_values), "measure_at": measure_at},
        "outputs": list(outputs),
    }
    atomic_write_text(path, json.dumps(payload, indent=2) + "\n")
