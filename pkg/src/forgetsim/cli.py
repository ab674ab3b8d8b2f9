"""Command-line interface.

    forgetsim run --preset pr2 --n 10 --seed 42 --out results/
    forgetsim run --config lesson.json --plot
    forgetsim sweep --n 3..21 --out sweep/
    forgetsim presets --json
    forgetsim serve --port 8000

Exit codes: 0 success, 2 bad arguments, 3 config error, 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import replace as dc_replace

from . import io
from .engine import run
from .errors import ConfigError
from .experiments import (
    PRESET_NAMES,
    find_optimal_n,
    information_rate,
    preset,
    sweep_n,
)
from .laws import DecayMode
from .svgplot import LineChart

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_IO = 4

_PRESET_BLURBS = {
    "pr1": "one element, six presentations at fixed times, clock-jumping effort",
    "pr2": "one 300-UEV lesson, uniform-random selection, active element exempt "
    "from decay (N defaults to 13; --n overrides)",
    "pr3": "three 180-UEV lessons with 220-UEV breaks, uniform-random selection, "
    "everything decays during effort",
}


def _n_range(text: str) -> list[int]:
    m = re.fullmatch(r"(\d+)(?:\.\.(\d+))?", text)
    if not m:
        raise argparse.ArgumentTypeError(
            f"expected N or LO..HI (e.g. 12 or 3..21), got {text!r}"
        )
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"need 1 <= LO <= HI, got {text!r}")
    return list(range(lo, hi + 1))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forgetsim",
        description="Deterministic simulator of practice-driven learning "
        "with exponential forgetting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one preset or config file")
    src = p_run.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=PRESET_NAMES, help="bundled scenario")
    src.add_argument("--config", metavar="PATH", help="JSON config file")
    p_run.add_argument("--n", type=int, help="element count (pr2 preset only)")
    p_run.add_argument("--seed", type=int, help="override the config seed")
    p_run.add_argument("--dt", type=float, help="override the integration step")
    p_run.add_argument(
        "--mode",
        choices=("perstep", "continuous"),
        help="decay mode: per-step coefficient or rate per dt_ref",
    )
    p_run.add_argument("--out", metavar="DIR", default=".", help="output directory")
    p_run.add_argument("--plot", action="store_true", help="also write an SVG chart")
    p_run.add_argument(
        "--per-element",
        action="store_true",
        help="also write per-element knowledge levels",
    )
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="lesson-size sweep (round-robin)")
    p_sweep.add_argument(
        "--n",
        type=_n_range,
        default=list(range(3, 22)),
        metavar="LO..HI",
        help="element-count range (default 3..21)",
    )
    p_sweep.add_argument(
        "--measure-at",
        type=float,
        default=700.0,
        help="measurement time in UEV (default 700)",
    )
    p_sweep.add_argument("--out", metavar="DIR", default=".", help="output directory")
    p_sweep.add_argument("--plot", action="store_true", help="also write an SVG chart")
    p_sweep.set_defaults(func=cmd_sweep)

    p_presets = sub.add_parser("presets", help="list bundled scenarios")
    p_presets.add_argument(
        "--json", action="store_true", help="dump resolved configs as JSON"
    )
    p_presets.set_defaults(func=cmd_presets)

    p_serve = sub.add_parser("serve", help="start the trainer service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument(
        "--ui",
        metavar="DIR",
        default=None,
        help="UI bundle directory (default: ./frontend/dist if present)",
    )
    p_serve.set_defaults(func=cmd_serve)
    return parser


def cmd_run(args) -> int:
    if args.n is not None and args.preset != "pr2":
        print("--n applies only to --preset pr2", file=sys.stderr)
        return EXIT_USAGE
    if args.preset:
        config = preset(args.preset, args.n)
    else:
        config = io.load_config(args.config)
    if args.seed is not None:
        config = dc_replace(config, seed=args.seed)
    if args.dt is not None:
        config = dc_replace(config, dt=args.dt)
    if args.mode is not None:
        mode = DecayMode.PER_STEP if args.mode == "perstep" else DecayMode.CONTINUOUS_RATE
        config = dc_replace(config, forgetting=dc_replace(config.forgetting, mode=mode))

    result = run(config, record_per_element=args.per_element)

    os.makedirs(args.out, exist_ok=True)
    outputs = ["trajectory.csv"]
    io.write_trajectory_csv(os.path.join(args.out, "trajectory.csv"), result.trajectory)
    if args.per_element:
        io.write_per_element_csv(
            os.path.join(args.out, "per_element.csv"), result.trajectory
        )
        outputs.append("per_element.csv")
    if args.plot:
        chart = LineChart(
            title="total knowledge over time",
            x_label="t (UEV)",
            y_label="Z_total (knowledge units)",
        )
        chart.add_series(
            result.trajectory.t.tolist(),
            result.trajectory.z_total.tolist(),
            label="Z_total",
        )
        for a, b in config.schedule.windows:
            chart.add_vspan(a, b)
        io.atomic_write_text(os.path.join(args.out, "trajectory.svg"), chart.render())
        outputs.append("trajectory.svg")
    manifest = io.RunManifest(config=config, outputs=tuple(outputs + ["run_manifest.json"]))
    io.write_run_manifest(os.path.join(args.out, "run_manifest.json"), manifest)
    outputs.append("run_manifest.json")

    for name in outputs:
        print(f"wrote {os.path.join(args.out, name)}")
    print(
        f"final Z_total = {result.z_total_final():.6f} "
        f"({len(result.accesses)} presentations, backend: {result.backend})"
    )
    return EXIT_OK


def cmd_sweep(args) -> int:
    rows = sweep_n(args.n, measure_at=args.measure_at)
    os.makedirs(args.out, exist_ok=True)
    outputs = ["sweep.csv"]
    io.write_sweep_csv(os.path.join(args.out, "sweep.csv"), rows)
    if args.plot:
        chart = LineChart(
            title="knowledge at measurement time vs lesson size",
            x_label="N (elements)",
            y_label="knowledge units",
        )
        chart.add_series([r.n for r in rows], [r.z_final for r in rows], label="Z_final")
        chart.add_series([r.n for r in rows], [r.k for r in rows], label="K = Z/N")
        io.atomic_write_text(os.path.join(args.out, "sweep.svg"), chart.render())
        outputs.append("sweep.svg")
    io.write_sweep_manifest(
        os.path.join(args.out, "sweep_manifest.json"),
        n_values=args.n,
        measure_at=args.measure_at,
        outputs=outputs + ["sweep_manifest.json"],
    )
    outputs.append("sweep_manifest.json")

    for name in outputs:
        print(f"wrote {os.path.join(args.out, name)}")
    print(f"{'N':>3} {'Z_final':>10} {'mean_gamma':>12} {'K':>8}")
    for row in rows:
        print(
            f"{row.n:>3} {row.z_final:>10.4f} {row.mean_gamma_final:>12.3e} "
            f"{row.k:>8.4f}"
        )
    print(f"optimal N: {find_optimal_n(rows)}")
    return EXIT_OK


def cmd_presets(args) -> int:
    if args.json:
        payload = {name: io.config_to_dict(preset(name)) for name in PRESET_NAMES}
        print(json.dumps(payload, indent=2))
        return EXIT_OK
    for name in PRESET_NAMES:
        config = preset(name)
        rate = information_rate(config)
        print(f"{name}: {_PRESET_BLURBS[name]}")
        print(
            f"     N={config.n} dt={config.dt} run=[{config.t_start}, {config.t_end}] "
            f"lesson time={config.schedule.total_duration():g} UEV "
            f"(information rate {rate:.4g} elements/UEV)"
        )
    return EXIT_OK


def cmd_serve(args) -> int:
    from .server import serve

    ui_dir = args.ui
    if ui_dir is None:
        for candidate in (os.path.join("frontend", "dist"), "frontend"):
            if os.path.isdir(candidate):
                ui_dir = candidate
                break
    serve(host=args.host, port=args.port, ui_dir=ui_dir)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
