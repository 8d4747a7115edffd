"""Pure-Python table kernels; the fallback when the compiled module is absent."""

import numpy as np


def compose(outer, inner):
    """Table of ``x -> outer[inner[x]]``."""
    o = list(outer)
    return np.array([o[i] for i in inner.tolist()], dtype=np.int64)


def first_mismatch(a, b):
    """Smallest index where the tables differ, or -1."""
    if len(a) != len(b):
        raise ValueError("tables of different length")
    for i, (x, y) in enumerate(zip(a.tolist(), b.tolist())):
        if x != y:
            return i
    return -1


def pullback_check(f, g, h, k, n_b, n_c, n_d):
    """Same contract as the compiled ``pullback_check``."""
    f, g, h, k = f.tolist(), g.tolist(), h.tolist(), k.tolist()
    for p, (b, c) in enumerate(zip(f, g)):
        if h[b] != k[c]:
            return (1, p, -1)

    first_seen = {}
    for p, pair in enumerate(zip(f, g)):
        if pair in first_seen:
            return (2, first_seen[pair], p)
        first_seen[pair] = p

    by_d = [[] for _ in range(n_d)]
    for c in range(n_c):
        by_d[k[c]].append(c)
    fiber = sum(len(by_d[h[b]]) for b in range(n_b))
    if fiber == len(f):
        return (0, -1, -1)
    for b in range(n_b):
        for c in by_d[h[b]]:
            if (b, c) not in first_seen:
                return (3, b, c)
    raise AssertionError("fiber count mismatch without a missing pair")


def fiber_offsets(table, n_target):
    """CSR grouping of a table by target: ``(starts, members)``."""
    buckets = [[] for _ in range(n_target)]
    for x, y in enumerate(table.tolist()):
        buckets[y].append(x)
    starts = [0]
    for b in buckets:
        starts.append(starts[-1] + len(b))
    members = [x for b in buckets for x in b]
    return np.array(starts, dtype=np.int64), np.array(members, dtype=np.int64)
