# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled mining kernels: same contract as ``_pure``, with the inner
containment and projection scans running as C loops over int arrays.

Records arrive as arbitrary int sequences and are flattened once into a
single contiguous buffer with per-record offsets.
"""

from cpython.mem cimport PyMem_Free, PyMem_Malloc


cdef struct FlatDb:
    int *data
    int *starts   # len n_records + 1
    int n_records


cdef FlatDb _flatten(records) except *:
    cdef FlatDb db
    cdef int total = 0
    cdef int i, j
    for rec in records:
        total += len(rec)
    db.n_records = len(records)
    db.data = <int *> PyMem_Malloc(sizeof(int) * (total if total else 1))
    db.starts = <int *> PyMem_Malloc(sizeof(int) * (db.n_records + 1))
    if db.data == NULL or db.starts == NULL:
        raise MemoryError()
    i = 0
    j = 0
    for rec in records:
        db.starts[i] = j
        for x in rec:
            db.data[j] = x
            j += 1
        i += 1
    db.starts[i] = j
    return db


cdef void _free(FlatDb db) noexcept:
    PyMem_Free(db.data)
    PyMem_Free(db.starts)


cdef bint _contains(int *data, int lo, int hi, int *alpha, int k) noexcept nogil:
    cdef int j = 0
    cdef int p
    for p in range(lo, hi):
        if data[p] == alpha[j]:
            j += 1
            if j == k:
                return True
    return False


def contains(record, alpha):
    """True when alpha is a (not necessarily contiguous) subsequence of record."""
    if not len(alpha):
        return True
    cdef int k = len(alpha)
    cdef int j = 0
    for x in record:
        if x == alpha[j]:
            j += 1
            if j == k:
                return True
    return False


def support_count(records, alpha):
    """Number of records containing alpha; each record counts at most once."""
    cdef int k = len(alpha)
    if k == 0:
        return len(records)
    cdef FlatDb db = _flatten(records)
    cdef int *a = <int *> PyMem_Malloc(sizeof(int) * k)
    cdef int i, count = 0
    if a == NULL:
        _free(db)
        raise MemoryError()
    try:
        for i in range(k):
            a[i] = alpha[i]
        for i in range(db.n_records):
            if _contains(db.data, db.starts[i], db.starts[i + 1], a, k):
                count += 1
    finally:
        PyMem_Free(a)
        _free(db)
    return count


def prefixspan(records, int min_support, int cap=-1):
    """Complete frequent-subsequence mining by prefix projection.

    Returns ``(results, exceeded)``; see the pure twin for the contract.
    """
    cdef FlatDb db = _flatten(records)
    results = []
    try:
        _grow(db, (), [(i, db.starts[i]) for i in range(db.n_records)],
              min_support, cap, results)
    finally:
        _free(db)
    if 0 <= cap < len(results):
        return results, True
    return results, False


cdef int _grow(FlatDb db, tuple prefix, list projections, int min_support,
               int cap, list results) except -1:
    # count distinct items per projected suffix
    cdef dict counts = {}
    cdef int rid, pos, p, x, hi
    cdef set seen
    for rid, pos in projections:
        hi = db.starts[rid + 1]
        seen = set()
        for p in range(pos, hi):
            x = db.data[p]
            if x not in seen:
                seen.add(x)
                counts[x] = counts.get(x, 0) + 1
    cdef list next_proj
    cdef tuple grown
    for x in sorted(counts):
        if counts[x] < min_support:
            continue
        grown = prefix + (x,)
        results.append((grown, counts[x]))
        if 0 <= cap < len(results):
            return 1
        next_proj = []
        for rid, pos in projections:
            hi = db.starts[rid + 1]
            for p in range(pos, hi):
                if db.data[p] == x:
                    next_proj.append((rid, p + 1))
                    break
        if _grow(db, grown, next_proj, min_support, cap, results):
            return 1
    return 0
