"""Time the compiled stepping kernel against the pure-Python fallback.

Runs the same deterministic workloads through every available backend and
reports wall time, steps per second, and speedup relative to the Python
kernel. Both kernels produce bit-identical trajectories (the test suite
asserts this); the only thing compared here is speed.

Usage:
    python3 benchmarks/bench_backends.py [--repeats 5] [--quick]
"""
import argparse
import dataclasses
import statistics
import time

from forgetsim import RoundRobin, run
from forgetsim.backend import available_backends
from forgetsim.experiments import preset_pr1, preset_pr2, preset_pr3


def workloads(quick: bool):
    pr2 = preset_pr2(13)
    yield "pr1 (1 element, 90 UEV)", preset_pr1()
    yield "pr2 (13 elements, 700 UEV, random)", pr2
    yield "pr2 round-robin", dataclasses.replace(pr2, policy=RoundRobin())
    if not quick:
        yield "pr3 (30 elements, 3 lessons)", preset_pr3()
        yield "pr2 fine grid (dt/4)", dataclasses.replace(pr2, dt=pr2.dt / 4)


def steps_of(config) -> int:
    return round((config.t_end - config.t_start) / config.dt)


def time_backend(config, backend: str, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        run(config, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5, help="best-of count")
    parser.add_argument(
        "--quick", action="store_true", help="skip the two slowest workloads"
    )
    args = parser.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    if len(backends) < 2:
        print("only one backend is built; timings shown without speedup")
    print()

    header = f"{'workload':<36} {'steps':>9}"
    for name in backends:
        header += f" {name + ' (s)':>14}"
    if "compiled" in backends and "python" in backends:
        header += f" {'speedup':>9}"
    print(header)
    print("-" * len(header))

    speedups = []
    for label, config in workloads(args.quick):
        row = f"{label:<36} {steps_of(config):>9}"
        times = {}
        for name in backends:
            times[name] = time_backend(config, name, args.repeats)
            row += f" {times[name]:>14.4f}"
        if "compiled" in times and "python" in times:
            speedup = times["python"] / times["compiled"]
            speedups.append(speedup)
            row += f" {speedup:>8.1f}x"
        print(row)

    if speedups:
        print()
        print(f"median speedup: {statistics.median(speedups):.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
