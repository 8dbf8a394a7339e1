#!/usr/bin/env python3
"""Compare the pure-Python and compiled mining kernels on synthetic
sequence databases.

Usage: python benchmarks/bench_kernels.py [--records N] [--length N]
"""

from __future__ import annotations

import argparse
import random
import time

from esdp.kernels import _pure

try:
    from esdp.kernels import _fast
except ImportError:
    _fast = None


def make_db(rng: random.Random, n_records: int, length: int, alphabet: int):
    return [
        [rng.randint(0, alphabet - 1) for _ in range(rng.randint(length // 2, length))]
        for _ in range(n_records)
    ]


def timeit(fn, repeat: int = 3) -> float:
    best = float("inf")
    for _ in range(repeat):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--records", type=int, default=400)
    parser.add_argument("--length", type=int, default=30)
    parser.add_argument("--alphabet", type=int, default=40)
    parser.add_argument("--min-support", type=int, default=40)
    args = parser.parse_args()

    rng = random.Random(1)
    db = make_db(rng, args.records, args.length, args.alphabet)
    alpha = [rng.randint(0, args.alphabet - 1) for _ in range(4)]

    rows = []
    for label, task in [
        ("support_count x1000", lambda impl: [impl.support_count(db, alpha)
                                              for _ in range(1000)]),
        (f"prefixspan m={args.min_support}", lambda impl: impl.prefixspan(
            db, args.min_support)),
    ]:
        pure_t = timeit(lambda: task(_pure))
        if _fast is not None:
            fast_t = timeit(lambda: task(_fast))
            rows.append((label, pure_t, fast_t, pure_t / fast_t))
        else:
            rows.append((label, pure_t, None, None))

    print(f"database: {args.records} records x ~{args.length} items, "
          f"alphabet {args.alphabet}")
    header = f"{'task':<24} {'pure (s)':>10} {'compiled (s)':>13} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, pure_t, fast_t, speedup in rows:
        if fast_t is None:
            print(f"{label:<24} {pure_t:>10.4f} {'(not built)':>13} {'-':>8}")
        else:
            print(f"{label:<24} {pure_t:>10.4f} {fast_t:>13.4f} {speedup:>7.1f}x")

    if _fast is not None:
        same = sorted(_pure.prefixspan(db, args.min_support)[0]) == \
            sorted(_fast.prefixspan(db, args.min_support)[0])
        print(f"backends agree: {same}")
        return 0 if same else 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
