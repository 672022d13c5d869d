"""Compare the compiled sweep kernels against the pure-Python fallback.

Times the stabbing kernels on synthetic interval families at several sizes,
then a full solve with each kernel wired in.  Run as

    python3 benchmarks/bench_sweep.py
"""

from __future__ import annotations

import argparse
import random
import time

from ucactus import _segsweep_py, plf
from ucactus.io import random_instance
from ucactus.optimizer import solve

try:
    from ucactus import _segsweep
except ImportError:
    _segsweep = None


def _families(rng: random.Random, n_sets: int, max_ivals: int):
    sets = []
    for _ in range(n_sets):
        raw = []
        for _ in range(rng.randint(1, max_ivals)):
            a = rng.uniform(0.0, 100.0)
            raw.append((a, a + rng.uniform(0.0, 10.0)))
        merged: list[tuple[float, float]] = []
        for a, b in sorted(raw):
            if merged and a <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        sets.append(merged)
    return sets


def _best_of(repeats: int, fn) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(repeats: int) -> None:
    rng = random.Random(20240901)
    print(f"{'events':>8} {'pure (us)':>10} {'compiled (us)':>14} {'speedup':>8}")
    # the fallback re-sweeps once per candidate endpoint, so big tiers get
    # few cases to keep its quadratic cost in check
    for n_sets, max_ivals, n_cases in ((8, 4, 200), (32, 8, 50), (128, 8, 10)):
        cases = [
            plf._event_arrays(_families(rng, n_sets, max_ivals))
            for _ in range(n_cases)
        ]
        n_events = sum(len(c[0]) for c in cases) // len(cases)

        def run(mod):
            for pos, side, owner in cases:
                mod.stab_one_events(pos, side, owner, n_sets)
                mod.stab_two_events(pos, side, owner, n_sets)

        t_py = _best_of(repeats, lambda: run(_segsweep_py)) / len(cases) * 1e6
        if _segsweep is None:
            print(f"{n_events:>8} {t_py:>10.1f} {'not built':>14} {'':>8}")
            continue
        t_c = _best_of(repeats, lambda: run(_segsweep)) / len(cases) * 1e6
        print(f"{n_events:>8} {t_py:>10.1f} {t_c:>14.1f} {t_py / t_c:>7.1f}x")


def bench_solve(repeats: int) -> None:
    inst = random_instance(
        777, n_vertices=200, n_cycles=12, n_points=40, n_locations=8,
        prob_denominator=16,
    )
    saved = plf._kernel
    try:
        plf._kernel = _segsweep_py
        t_py = _best_of(repeats, lambda: solve(inst))
        if _segsweep is None:
            print(f"solve n=40 |V|=200: pure {t_py * 1e3:.1f} ms (compiled not built)")
            return
        plf._kernel = _segsweep
        t_c = _best_of(repeats, lambda: solve(inst))
    finally:
        plf._kernel = saved
    print(
        f"solve n=40 |V|=200: pure {t_py * 1e3:.1f} ms, "
        f"compiled {t_c * 1e3:.1f} ms, {t_py / t_c:.2f}x"
    )


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=3, help="best-of runs per timing")
    args = ap.parse_args()
    bench_kernels(args.repeats)
    bench_solve(args.repeats)


if __name__ == "__main__":
    main()
