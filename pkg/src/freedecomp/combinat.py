"""Normalizations and enumerators for words, parking functions, Dyck paths and partitions."""

from __future__ import annotations

from itertools import combinations, permutations, product
from typing import Iterator, Sequence

Word = tuple[int, ...]


def pack(w: Sequence[int]) -> Word:
    """Relabel the distinct symbols of ``w`` onto ``1..k`` preserving order."""
    rank = {s: i + 1 for i, s in enumerate(sorted(set(w)))}
    return tuple(rank[s] for s in w)


def standardize(w: Sequence[int]) -> Word:
    """The permutation with the same inversions as ``w``; ties are broken left to right."""
    order = sorted(range(len(w)), key=lambda i: (w[i], i))
    out = [0] * len(w)
    for r, i in enumerate(order):
        out[i] = r + 1
    return tuple(out)


def is_packed(w: Sequence[int]) -> bool:
    return set(w) == set(range(1, len(set(w)) + 1))


def is_parking(w: Sequence[int]) -> bool:
    return all(m <= i + 1 for i, m in enumerate(sorted(w))) and all(m >= 1 for m in w)


def parkify(w: Sequence[int]) -> Word:
    """Shift bigger symbols down until ``w`` is a parking function.

    Each round takes the least ``v`` with fewer than ``v`` letters ``<= v``
    and decrements every letter above ``v``.
    """
    w = list(w)
    while not is_parking(w):
        v = next(i for i in range(1, len(w) + 1) if sum(1 for x in w if x <= i) < i)
        w = [x - 1 if x > v else x for x in w]
    return tuple(w)


def parking_functions(n: int) -> list[Word]:
    """Parking functions of length ``n``, lexicographic."""
    return [w for w in product(range(1, n + 1), repeat=n) if is_parking(w)]


def breakpoints(w: Sequence[int]) -> list[int]:
    """``i`` in ``0..len(w)`` such that exactly ``i`` letters are ``<= i``."""
    return [i for i in range(len(w) + 1) if sum(1 for x in w if x <= i) == i]


def packed_words(n: int) -> list[Word]:
    return [w for w in product(range(1, n + 1), repeat=n) if is_packed(w)]


def packed_words_on(k: int, max_length: int) -> list[Word]:
    """Packed words using exactly ``k`` symbols, of length at most ``max_length``."""
    out = []
    for length in range(k, max_length + 1):
        out += [w for w in product(range(1, k + 1), repeat=length) if len(set(w)) == k]
    return out if k else [()]


def compositions_bounded(length: int, max_weight: int) -> list[Word]:
    """Words of positive integers of the given length with sum ``<= max_weight``."""
    out = []

    def rec(prefix, room):
        if len(prefix) == length:
            out.append(tuple(prefix))
            return
        for p in range(1, room - (length - len(prefix) - 1) + 1):
            rec(prefix + [p], room - p)

    rec([], max_weight)
    return sorted(out)


def monomial_expand(w: Sequence[int], num_vars: int) -> list[tuple[tuple[int, ...], int]]:
    """``M_w`` in ``num_vars`` variables as ``(exponent vector, coefficient)`` pairs."""
    terms = []
    for idx in combinations(range(num_vars), len(w)):
        exps = [0] * num_vars
        for i, e in zip(idx, w):
            exps[i] = e
        terms.append((tuple(exps), 1))
    return sorted(terms, reverse=True)


def format_polynomial(terms) -> str:
    if not terms:
        return "0"
    parts = []
    for exps, c in terms:
        mono = "*".join(f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e)
        parts.append(mono if c == 1 and mono else f"{c}*{mono}" if mono else str(c))
    return " + ".join(parts)


# Dyck paths as strings over U and D


def is_dyck(p: str) -> bool:
    h = 0
    for s in p:
        if s not in "UD":
            return False
        h += 1 if s == "U" else -1
        if h < 0:
            return False
    return h == 0


def height(p: str) -> int:
    h = best = 0
    for s in p:
        h += 1 if s == "U" else -1
        best = max(best, h)
    return best


def dyck_paths(semilength: int) -> list[str]:
    out = []

    def rec(prefix, ups, h):
        if len(prefix) == 2 * semilength:
            out.append(prefix)
            return
        if ups < semilength:
            rec(prefix + "U", ups + 1, h + 1)
        if h > 0:
            rec(prefix + "D", ups, h - 1)

    rec("", 0, 0)
    return out


def _step_levels(p: str) -> list[int]:
    """Lower height of the band each step crosses."""
    out, h = [], 0
    for s in p:
        out.append(h if s == "U" else h - 1)
        h += 1 if s == "U" else -1
    return out


def clip_top(p: str) -> str:
    """Delete the steps crossing the top band and join the remaining pieces."""
    top = height(p) - 1
    return "".join(s for s, lv in zip(p, _step_levels(p)) if lv < top)


def clip_bottom(p: str) -> str:
    """Delete the steps crossing the band between heights 0 and 1; the rest shifts down."""
    return "".join(s for s, lv in zip(p, _step_levels(p)) if lv >= 1)


def irreducible_factors(p: str) -> list[str]:
    """Split a Dyck path at its interior returns to height 0."""
    out, h, start = [], 0, 0
    for i, s in enumerate(p):
        h += 1 if s == "U" else -1
        if h == 0:
            out.append(p[start : i + 1])
            start = i + 1
    return out


# noncrossing partitions as tuples of sorted blocks, blocks sorted by minimum

Partition = tuple[tuple[int, ...], ...]


def canonical_partition(blocks) -> Partition:
    return tuple(sorted((tuple(sorted(b)) for b in blocks if b), key=lambda b: b[0]))


def is_noncrossing(blocks) -> bool:
    """No ``a < c < b < d`` with ``a, b`` in one block and ``c, d`` in another."""
    owner = {x: i for i, b in enumerate(blocks) for x in b}
    elems = sorted(owner)
    for a, c, b, d in combinations(elems, 4):
        if owner[a] == owner[b] and owner[c] == owner[d] and owner[a] != owner[c]:
            return False
    return True


def set_partitions(n: int) -> Iterator[Partition]:
    def rec(i, blocks):
        if i > n:
            yield canonical_partition(blocks)
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(1, [])


def noncrossing_partitions(n: int) -> list[Partition]:
    return sorted(p for p in set_partitions(n) if is_noncrossing(p))


def restrict_partition(p: Partition, lo: int, hi: int) -> Partition:
    """Restriction to ``lo..hi``, renumbered from 1."""
    return canonical_partition([x - lo + 1 for x in b if lo <= x <= hi] for b in p)


def partition_size(p: Partition) -> int:
    return sum(len(b) for b in p)


def encode_partition(p: Partition) -> str:
    wide = any(x >= 10 for b in p for x in b)
    sep = "," if wide else ""
    return "|".join(sep.join(str(x) for x in b) for b in p)


def parse_partition(s: str) -> Partition:
    s = s.strip()
    if s in ("", "()", "e"):
        return ()
    blocks = []
    for part in s.replace("{", "").replace("}", "").split("|"):
        part = part.strip()
        items = part.split(",") if "," in part else list(part)
        blocks.append([int(x) for x in items if x.strip()])
    return canonical_partition(blocks)


def all_permutations(n: int) -> list[Word]:
    return sorted(permutations(range(1, n + 1)))
