"""Presheaf constructors for the worked examples: words, paths, parking functions, Dyck paths, partitions."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Hashable, Sequence

import numpy as np

from . import combinat as cb
from .free import BudgetError, InertPresheaf, free, from_restriction_L_species, shift_down
from .simplicial import TruncatedSimplicialSet


def encode_word(w: Sequence) -> str:
    return ",".join(str(x) for x in w)


@dataclass(frozen=True)
class Quiver:
    """Vertices and named edges ``name -> (source, target)``."""

    vertices: tuple
    edges: tuple[tuple[Hashable, Hashable, Hashable], ...]  # (name, source, target)

    def __post_init__(self):
        vs = set(self.vertices)
        for name, s, t in self.edges:
            if s not in vs or t not in vs:
                raise ValueError(f"edge {name} has an endpoint outside the vertex set")

    def src(self, e):
        return self._ends[e][0]

    def tgt(self, e):
        return self._ends[e][1]

    @property
    def _ends(self):
        return {name: (s, t) for name, s, t in self.edges}


def quiver_paths(G: Quiver, budget: int) -> InertPresheaf:
    """``A_0`` vertices, ``A_n`` composable edge paths of length ``n``.

    On edges ``d_bot`` is the target and ``d_top`` the source; above, they
    drop the first and the last edge.
    """
    ends = G._ends
    levels = [[("v", v) for v in G.vertices], [("p", (name,)) for name, _, _ in G.edges]]
    for _ in range(2, budget + 1):
        levels.append([("p", p + (name,)) for _, p in levels[-1] for name, s, _ in G.edges if ends[p[-1]][1] == s])
    levels = levels[: budget + 1]

    def bot(x):
        p = x[1]
        return ("v", ends[p[0]][1]) if len(p) == 1 else ("p", p[1:])

    def top(x):
        p = x[1]
        return ("v", ends[p[0]][0]) if len(p) == 1 else ("p", p[:-1])

    def encode(x):
        return str(x[1]) if x[0] == "v" else encode_word(x[1])

    return InertPresheaf.from_functions(levels, bot, top, encode, "paths")


def truncate_paths(A: InertPresheaf, r: int) -> InertPresheaf:
    """Empty every level above ``r``."""
    return A.truncated(r)


def window(A: InertPresheaf, lo: int, hi: int | None = None) -> InertPresheaf:
    """Original levels ``lo..hi`` re-graded to ``0..hi-lo``."""
    hi = A.budget if hi is None else hi
    if hi > A.budget:
        raise BudgetError(f"window needs level {hi}, have {A.budget}")
    out = shift_down(A, lo).restricted(hi - lo)
    out.name = f"window{lo}-{hi}({A.name})"
    return out


def words(S: Sequence, maxlen: int) -> InertPresheaf:
    """Words over ``S``; ``d_bot`` deletes the first letter and ``d_top`` the last."""
    S = tuple(S)
    levels = [list(product(S, repeat=n)) for n in range(maxlen + 1)]
    return InertPresheaf.from_functions(levels, lambda w: w[1:], lambda w: w[:-1], encode_word, f"words({''.join(map(str, S))})")


def nonempty_words(S: Sequence, maxlen: int) -> InertPresheaf:
    """Words of length ``n+1`` in degree ``n``."""
    out = window(words(S, maxlen), 1)
    out.name = "nonempty-words"
    return out


def qsym(weight_bound: int) -> InertPresheaf:
    """Words over positive integers with letter sum at most ``weight_bound``, graded by length."""
    levels = [cb.compositions_bounded(n, weight_bound) for n in range(weight_bound + 1)]
    return InertPresheaf.from_functions(levels, lambda w: w[1:], lambda w: w[:-1], encode_word, "qsym")


def packed_words(maxlen: int) -> InertPresheaf:
    """Packed words by length; faces drop an end letter and pack."""
    levels = [cb.packed_words(n) for n in range(maxlen + 1)]
    return InertPresheaf.from_functions(
        levels, lambda w: cb.pack(w[1:]), lambda w: cb.pack(w[:-1]), encode_word, "packed"
    )


def packed_words_by_symbols(max_symbols: int, max_length: int) -> InertPresheaf:
    """Packed words on exactly ``n`` symbols.

    ``d_top`` deletes every occurrence of the largest symbol, ``d_bot`` every
    occurrence of the smallest and then decrements.
    """
    levels = [cb.packed_words_on(k, max_length) for k in range(max_symbols + 1)]

    def top(w):
        return tuple(x for x in w if x != max(w))

    def bot(w):
        return tuple(x - 1 for x in w if x != 1)

    return InertPresheaf.from_functions(levels, bot, top, encode_word, "packed-symbols")


def permutations_fqsym(maxlen: int) -> InertPresheaf:
    levels = [cb.all_permutations(n) for n in range(maxlen + 1)]
    return InertPresheaf.from_functions(
        levels, lambda w: cb.standardize(w[1:]), lambda w: cb.standardize(w[:-1]), encode_word, "fqsym"
    )


def parking_f_basis(maxlen: int) -> InertPresheaf:
    levels = [cb.parking_functions(n) for n in range(maxlen + 1)]
    return InertPresheaf.from_functions(
        levels, lambda w: cb.parkify(w[1:]), lambda w: cb.parkify(w[:-1]), encode_word, "parking-F"
    )


def parking_g_basis(max_length: int) -> InertPresheaf:
    """Parking functions of length ``<= max_length`` graded by breakpoints minus one.

    Level 0 holds only the empty parking function.
    """
    pfs = [w for n in range(max_length + 1) for w in cb.parking_functions(n)]
    levels = [[] for _ in range(max_length + 1)]
    for w in pfs:
        levels[len(cb.breakpoints(w)) - 1].append(w)

    def top(w):
        b = cb.breakpoints(w)
        return cb.parkify(tuple(x for x in w if x <= b[-2]))

    def bot(w):
        b = cb.breakpoints(w)
        return cb.parkify(tuple(x for x in w if x > b[1]))

    return InertPresheaf.from_functions(levels, bot, top, encode_word, "parking-G")


def noncrossing_partitions(max_n: int) -> InertPresheaf:
    """``d_top`` deletes ``n``; ``d_bot`` deletes 1 and shifts down."""
    levels = [cb.noncrossing_partitions(n) for n in range(max_n + 1)]

    def top(p):
        return cb.restrict_partition(p, 1, cb.partition_size(p) - 1)

    def bot(p):
        return cb.restrict_partition(p, 2, cb.partition_size(p))

    return InertPresheaf.from_functions(levels, bot, top, cb.encode_partition, "noncrossing")


def dyck_by_height(max_height: int, max_len: int) -> InertPresheaf:
    """Dyck paths of exactly height ``n`` with at most ``max_len`` steps."""
    paths = [p for s in range(max_len // 2 + 1) for p in cb.dyck_paths(s)]
    levels = [[p for p in paths if cb.height(p) == n] for n in range(max_height + 1)]
    return InertPresheaf.from_functions(levels, cb.clip_bottom, cb.clip_top, str, "dyck-height")


def dyck_by_baseline(max_semilength: int) -> InertPresheaf:
    """Dyck paths with ``n`` irreducible factors, as words over irreducible paths."""
    paths = [p for s in range(max_semilength + 1) for p in cb.dyck_paths(s)]
    levels = [[] for _ in range(max_semilength + 1)]
    for p in paths:
        levels[len(cb.irreducible_factors(p))].append(p)

    def bot(p):
        return "".join(cb.irreducible_factors(p)[1:])

    def top(p):
        return "".join(cb.irreducible_factors(p)[:-1])

    return InertPresheaf.from_functions(levels, bot, top, str, "dyck-baseline")


def layered_linear(weight_bound: int) -> InertPresheaf:
    """Monotone surjections ``m -> n`` stored as value tuples over ``1..n``.

    ``d_top`` deletes the top layer, ``d_bot`` the bottom layer and renumbers.
    """
    levels = []
    for n in range(weight_bound + 1):
        levels.append([surjection_of(c) for c in cb.compositions_bounded(n, weight_bound)])

    def top(s):
        return tuple(x for x in s if x != max(s))

    def bot(s):
        return tuple(x - 1 for x in s if x != 1)

    return InertPresheaf.from_functions(levels, bot, top, encode_word, "layered")


def surjection_of(parts: Sequence[int]) -> tuple[int, ...]:
    return tuple(i + 1 for i, p in enumerate(parts) for _ in range(p))


def layer_sizes(s: Sequence[int]) -> tuple[int, ...]:
    n = max(s) if s else 0
    return tuple(sum(1 for x in s if x == i) for i in range(1, n + 1))


class OuterFaceError(ValueError):
    """An outer face of a nondegenerate simplex is degenerate."""


def nondeg_J(X: TruncatedSimplicialSet) -> InertPresheaf:
    """Nondegenerate simplices with ``d_bot = d_0`` and ``d_top = d_n``."""
    keep = [np.flatnonzero(X.nondegenerate(k)) for k in range(X.N + 1)]
    pos = [{int(j): i for i, j in enumerate(kp)} for kp in keep]
    bot, top = [[]], [[]]
    for n in range(1, X.N + 1):
        row_b, row_t = [], []
        for j in keep[n].tolist():
            for face, row in ((0, row_b), (n, row_t)):
                y = int(X.faces[n][face][j])
                if y not in pos[n - 1]:
                    raise OuterFaceError(
                        f"d_{face} of nondegenerate {X.encodings(n)[j]} is degenerate {X.encodings(n - 1)[y]}"
                    )
                row.append(pos[n - 1][y])
        bot.append(row_b)
        top.append(row_t)
    levels = [[X.levels[k][j] for j in kp.tolist()] for k, kp in enumerate(keep)]
    return InertPresheaf(levels, bot, top, X.encode, f"J({X.name})")


def J(X: TruncatedSimplicialSet, N: int | None = None) -> TruncatedSimplicialSet:
    return free(nondeg_J(X), X.N if N is None else N)


def restriction_species_words(S: Sequence, maxlen: int) -> InertPresheaf:
    """Words through the restriction-species adapter (one face into ``A_0``)."""
    S = tuple(S)
    levels = [list(product(S, repeat=n)) for n in range(maxlen + 1)]
    return from_restriction_L_species(levels, lambda w: (), lambda w: w[1:], lambda w: w[:-1], encode_word, "words")

