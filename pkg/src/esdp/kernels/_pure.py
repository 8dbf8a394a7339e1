"""Pure-Python mining kernels over integer-encoded sequence databases.

The compiled twin in ``_fast.pyx`` implements the same three functions with
identical semantics; either backend may be selected at import time.
Records are sequences of non-negative int item ids.
"""

from __future__ import annotations


def contains(record, alpha) -> bool:
    """True when alpha is a (not necessarily contiguous) subsequence of record."""
    if not alpha:
        return True
    k = len(alpha)
    j = 0
    for x in record:
        if x == alpha[j]:
            j += 1
            if j == k:
                return True
    return False


def support_count(records, alpha) -> int:
    """Number of records containing alpha; each record counts at most once."""
    return sum(1 for rec in records if contains(rec, alpha))


def prefixspan(records, min_support: int, cap: int = -1):
    """Complete frequent-subsequence mining by prefix projection.

    Returns ``(results, exceeded)`` where results is a list of
    ``(pattern_tuple, support_count)``. When ``cap >= 0`` mining aborts as
    soon as more than ``cap`` patterns exist and ``exceeded`` is True (the
    partial results are then meaningless beyond the overflow signal).
    """
    results: list[tuple[tuple[int, ...], int]] = []
    exceeded = False

    def grow(prefix: tuple[int, ...], projections: list[tuple[int, int]]) -> None:
        nonlocal exceeded
        if exceeded:
            return
        counts: dict[int, int] = {}
        for rid, pos in projections:
            rec = records[rid]
            seen: set[int] = set()
            for p in range(pos, len(rec)):
                x = rec[p]
                if x not in seen:
                    seen.add(x)
                    counts[x] = counts.get(x, 0) + 1
        for x in sorted(counts):
            if counts[x] < min_support:
                continue
            grown = prefix + (x,)
            results.append((grown, counts[x]))
            if 0 <= cap < len(results):
                exceeded = True
                return
            next_proj: list[tuple[int, int]] = []
            for rid, pos in projections:
                rec = records[rid]
                for p in range(pos, len(rec)):
                    if rec[p] == x:
                        next_proj.append((rid, p + 1))
                        break
            grow(grown, next_proj)
            if exceeded:
                return

    grow((), [(rid, 0) for rid in range(len(records))])
    return results, exceeded
