"""Compiled kernel against the pure-Python fallback.

Each workload checks a whole theory in a freshly enumerated universe, so
table construction is part of the measured time.  Usage::

    python benchmarks/bench_kernel.py [--repeat N] [--quick]
"""

from __future__ import annotations

import argparse
import statistics
import time

from setmatrix.kernel import available_backends
from setmatrix.logic import check_suite, enum_universe

SHAPES = ("1x2", "2x1", "2x2")

# (label, rank, depth, model, theory, shape bound)
WORKLOADS = [
    ("native r1d1 smt 2x2", 1, 1, "native", "smt", "2x2"),
    ("zfm r0d1 smt 2x2", 0, 1, "zfm", "smt", "2x2"),
    ("zfm r1d1 smt-minus 1x2", 1, 1, "zfm", "smt-minus", "1x2"),
    ("zfm r1d1 smt-minus 2x1", 1, 1, "zfm", "smt-minus", "2x1"),
]


def time_once(backend, rank, depth, model, theory, bound):
    u = enum_universe(rank, SHAPES, depth)
    start = time.perf_counter()
    verdicts = check_suite(theory, u, model, bound, backend=backend)
    return time.perf_counter() - start, sum(v.holds for v in verdicts), len(verdicts)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=1)
    ap.add_argument("--quick", action="store_true", help="first two workloads only")
    args = ap.parse_args()

    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernel not built; only the Python fallback is timed")
    work = WORKLOADS[:2] if args.quick else WORKLOADS
    print(f"{'workload':28}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}  verdicts")
    for label, *params in work:
        medians = {}
        outcome = None
        for b in backends:
            runs = [time_once(b, *params) for _ in range(args.repeat)]
            medians[b] = statistics.median(r[0] for r in runs)
            got = {(r[1], r[2]) for r in runs}
            if outcome is None:
                outcome = got
            elif got != outcome:
                raise SystemExit(f"{label}: backends disagree ({got} vs {outcome})")
        held, total = next(iter(outcome))
        speed = medians["python"] / medians["cython"] if "cython" in medians else float("nan")
        cells = "".join(f"{medians[b]:>11.3f}s" for b in backends)
        print(f"{label:28}{cells}{speed:>9.1f}x  {held}/{total} hold")


if __name__ == "__main__":
    main()
