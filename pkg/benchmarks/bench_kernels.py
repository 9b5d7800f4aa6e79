#!/usr/bin/env python3
"""Benchmark the C kernels against the pure-Python fallback.

Two views: raw per-call kernel throughput (RNG draws and governor steps),
and a whole-scenario run through the engine under each backend (forced
via TMSCA_PURE in a subprocess so import-time selection applies).

Usage: python3 benchmarks/bench_kernels.py [--steps N]
"""

import argparse
import json
import subprocess
import sys
import time

from tmsca import kernels


def bench_rng(impl, n: int) -> float:
    state = 0x9E3779B97F4A7C15
    rng_uniform = impl.rng_uniform
    started = time.perf_counter()
    for _ in range(n):
        state, _ = rng_uniform(state, -5.0, 5.0)
    return time.perf_counter() - started


def bench_governor(impl, n: int) -> float:
    step = impl.governor_step_core
    gov, deadline, speed, pos = 0, 0.0, 18.0, 0.0
    started = time.perf_counter()
    for k in range(n):
        gov, deadline, speed, pos, _ = step(
            gov, deadline, speed, pos, 6.0, 1.0, 20.0, 0.05, 3.0, 2.0, 4.0,
            k * 0.05, 0.05)
    return time.perf_counter() - started


def bench_scenario(pure: bool) -> tuple[float, int]:
    scenario = {
        "road_length_m": 5000.0, "dt_s": 0.05, "duration_s": 120.0,
        "seed": 11, "jitter_ms": 2.0,
        "signboards": [
            {"id": f"b{i}", "position_m": 200.0 + 450.0 * i,
             "mode": ["speed_limit", "humps", "school_zone", "freeway"][i % 4],
             "range_m": 80.0}
            for i in range(10)
        ],
        "vehicles": [
            {"id": f"v{i:02d}", "position_m": 15.0 * i, "v_max_mps": 20.0,
             "initial_throttle": 1.0}
            for i in range(20)
        ],
    }
    program = (
        "import json, sys, time\n"
        "from tmsca.engine import load_scenario, run\n"
        "from tmsca import kernels\n"
        "scenario = load_scenario(sys.stdin.read())\n"
        "t0 = time.perf_counter()\n"
        "events, _ = run(scenario)\n"
        "print(json.dumps({'backend': kernels.BACKEND,"
        " 'seconds': time.perf_counter() - t0, 'events': len(events)}))\n"
    )
    result = subprocess.run(
        [sys.executable, "-c", program], input=json.dumps(scenario),
        capture_output=True, text=True, env={"TMSCA_PURE": "1" if pure else "0"})
    if result.returncode != 0:
        raise RuntimeError(result.stderr)
    payload = json.loads(result.stdout)
    expected = "python" if pure else "c"
    if payload["backend"] != expected:
        raise RuntimeError(f"wanted backend {expected}, got {payload['backend']}")
    return payload["seconds"], payload["events"]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=1_000_000,
                        help="kernel calls per micro-benchmark")
    args = parser.parse_args()

    backends = kernels.available_backends()
    if "c" not in backends:
        print("C kernels not built; nothing to compare against.")
        return

    n = args.steps
    print(f"kernel micro-benchmarks ({n:,} calls each)")
    print(f"{'kernel':<20}{'python':>12}{'c':>12}{'speedup':>10}")
    for name, fn in (("rng_uniform", bench_rng), ("governor_step", bench_governor)):
        t_py = fn(backends["python"], n)
        t_c = fn(backends["c"], n)
        print(f"{name:<20}{n / t_py:>11,.0f}/s{n / t_c:>11,.0f}/s"
              f"{t_py / t_c:>9.2f}x")

    print("\nwhole scenario (20 vehicles, 10 boards, 2400 ticks)")
    t_py, events_py = bench_scenario(pure=True)
    t_c, events_c = bench_scenario(pure=False)
    if events_py != events_c:
        raise RuntimeError(f"event counts diverge: {events_py} vs {events_c}")
    print(f"{'engine run':<20}{t_py:>10.3f} s{t_c:>10.3f} s"
          f"{t_py / t_c:>9.2f}x   ({events_py:,} events)")


if __name__ == "__main__":
    main()
