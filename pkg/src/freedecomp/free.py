"""Inert presheaves and the free decomposition space on them.

A presheaf on the inert subcategory is a graded family of finite sets
``A_0..A_{N_A}`` with two face maps ``d_bot, d_top : A_n -> A_{n-1}`` that
commute.  The free space has ``k``-simplices ``(comp, elem)`` with ``comp`` a
length-``k`` composition and ``elem`` in ``A_{|comp|}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from . import kernels
from .simplicial import (
    CheckReport,
    SimplicialMap,
    Square,
    TruncatedSimplicialSet,
    TruncationError,
    _pullback_or_witness,
    _table,
    _weight_compositions,
    b_nat,
    check_simplicial_map,
    composition_degeneracy,
    composition_face,
    encode_composition,
)


class BudgetError(ValueError):
    """A construction needs presheaf levels beyond the available budget."""


class IntegrityError(RuntimeError):
    """A lift that must exist uniquely is missing or repeated."""


class PresheafError(ValueError):
    """The face maps violate the commutation relation."""


class InertPresheaf:
    """Levels ``A_0..A_budget`` with ``d_bot`` and ``d_top`` tables (index 0 unused)."""

    def __init__(
        self,
        levels: Sequence[Sequence[Any]],
        d_bot: Sequence[np.ndarray],
        d_top: Sequence[np.ndarray],
        encode: Callable[[Any], str] = str,
        name: str = "",
    ):
        self.levels = [tuple(lv) for lv in levels]
        self.budget = len(self.levels) - 1
        self.d_bot = [_table([])] + [_table(t) for t in list(d_bot)[1:]]
        self.d_top = [_table([])] + [_table(t) for t in list(d_top)[1:]]
        self.encode = encode
        self.name = name
        self._powers: dict = {}
        self._index: list[dict] | None = None
        for n in range(1, self.budget + 1):
            for t in (self.d_bot[n], self.d_top[n]):
                if len(t) != len(self.levels[n]):
                    raise ValueError(f"face table at level {n} has wrong length")
                if len(t) and (t.min() < 0 or t.max() >= len(self.levels[n - 1])):
                    raise ValueError(f"face table at level {n} leaves level {n - 1}")

    @classmethod
    def from_functions(
        cls,
        levels: Sequence[Sequence[Any]],
        d_bot: Callable[[Any], Any],
        d_top: Callable[[Any], Any],
        encode: Callable[[Any], str] = str,
        name: str = "",
    ) -> "InertPresheaf":
        levels = [tuple(lv) for lv in levels]
        index = [{x: j for j, x in enumerate(lv)} for lv in levels]

        def tab(n, fn, label):
            out = []
            for x in levels[n]:
                y = fn(x)
                if y not in index[n - 1]:
                    raise ValueError(f"{label}({x!r}) = {y!r} is not in level {n - 1}")
                out.append(index[n - 1][y])
            return out

        bot = [[]] + [tab(n, d_bot, "d_bot") for n in range(1, len(levels))]
        top = [[]] + [tab(n, d_top, "d_top") for n in range(1, len(levels))]
        return cls(levels, bot, top, encode, name)

    def index(self, n: int, x: Any) -> int:
        if self._index is None:
            self._index = [{x: j for j, x in enumerate(lv)} for lv in self.levels]
        return self._index[n][x]

    def sizes(self) -> list[int]:
        return [len(lv) for lv in self.levels]

    def bot_power(self, n: int, p: int) -> np.ndarray:
        """``d_bot^p : A_n -> A_{n-p}``."""
        return self._power(self.d_bot, "bot", n, p)

    def top_power(self, n: int, p: int) -> np.ndarray:
        return self._power(self.d_top, "top", n, p)

    def _power(self, faces, tag, n, p):
        key = (tag, n, p)
        if key not in self._powers:
            if p == 0:
                t = np.arange(len(self.levels[n]), dtype=np.int64)
            else:
                t = kernels.compose(faces[n - p + 1], self._power(faces, tag, n, p - 1))
            self._powers[key] = t
        return self._powers[key]

    def truncated(self, r: int) -> "InertPresheaf":
        """Same presheaf with levels above ``r`` emptied; the budget is unchanged."""
        levels = [lv if n <= r else () for n, lv in enumerate(self.levels)]
        bot = [t if n <= r else [] for n, t in enumerate(self.d_bot)]
        top = [t if n <= r else [] for n, t in enumerate(self.d_top)]
        return InertPresheaf(levels, bot, top, self.encode, f"{self.name}<={r}")

    def restricted(self, budget: int) -> "InertPresheaf":
        """Keep only levels ``0..budget``."""
        if budget > self.budget:
            raise BudgetError(f"need level {budget}, have {self.budget}")
        return InertPresheaf(
            self.levels[: budget + 1], self.d_bot[: budget + 1], self.d_top[: budget + 1], self.encode, self.name
        )

    def copy(self) -> "InertPresheaf":
        return InertPresheaf(
            self.levels, [t.copy() for t in self.d_bot], [t.copy() for t in self.d_top], self.encode, self.name
        )

    def to_json(self) -> dict:
        enc = [[self.encode(x) for x in lv] for lv in self.levels]
        return {
            "budget": self.budget,
            "levels": enc,
            "d_bot": {str(n): [enc[n - 1][j] for j in self.d_bot[n].tolist()] for n in range(1, self.budget + 1)},
            "d_top": {str(n): [enc[n - 1][j] for j in self.d_top[n].tolist()] for n in range(1, self.budget + 1)},
        }

    @classmethod
    def from_json(cls, doc: dict | str) -> "InertPresheaf":
        if isinstance(doc, str):
            doc = json.loads(doc)
        levels = doc["levels"]
        idx = [{e: j for j, e in enumerate(lv)} for lv in levels]
        bot = [[]] + [[idx[n - 1][e] for e in doc["d_bot"][str(n)]] for n in range(1, doc["budget"] + 1)]
        top = [[]] + [[idx[n - 1][e] for e in doc["d_top"][str(n)]] for n in range(1, doc["budget"] + 1)]
        return cls(levels, bot, top, str)

    def __repr__(self):
        return f"InertPresheaf({self.name or 'A'}, sizes={self.sizes()})"


@dataclass
class PresheafMap:
    source: InertPresheaf
    target: InertPresheaf
    components: list[np.ndarray]

    def __post_init__(self):
        self.components = [_table(c) for c in self.components]

    @classmethod
    def from_function(cls, source: InertPresheaf, target: InertPresheaf, fn: Callable[[Any], Any]) -> "PresheafMap":
        comps = [[target.index(n, fn(x)) for x in lv] for n, lv in enumerate(source.levels)]
        return cls(source, target, comps)

    @classmethod
    def identity(cls, A: InertPresheaf) -> "PresheafMap":
        return cls(A, A, [np.arange(len(lv), dtype=np.int64) for lv in A.levels])

    def then(self, other: "PresheafMap") -> "PresheafMap":
        return PresheafMap(
            self.source, other.target, [kernels.compose(g, f) for f, g in zip(self.components, other.components)]
        )


def terminal_presheaf(budget: int) -> InertPresheaf:
    return InertPresheaf.from_functions([("*",)] * (budget + 1), lambda x: "*", lambda x: "*", name="terminal")


def to_terminal(A: InertPresheaf) -> PresheafMap:
    return PresheafMap(A, terminal_presheaf(A.budget), [np.zeros(len(lv), dtype=np.int64) for lv in A.levels])


def validate_presheaf(A: InertPresheaf) -> CheckReport:
    """``d_top d_bot = d_bot d_top`` on every element of every level ``n >= 2``."""
    witnesses = []
    for n in range(2, A.budget + 1):
        lhs = kernels.compose(A.d_top[n - 1], A.d_bot[n])
        rhs = kernels.compose(A.d_bot[n - 1], A.d_top[n])
        j = kernels.first_mismatch(lhs, rhs)
        if j >= 0:
            witnesses.append(
                {
                    "level": n,
                    "element": A.encode(A.levels[n][j]),
                    "top_bot": A.encode(A.levels[n - 2][lhs[j]]),
                    "bot_top": A.encode(A.levels[n - 2][rhs[j]]),
                }
            )
    return CheckReport("presheaf", not witnesses, witnesses)


def check_presheaf_map(phi: PresheafMap) -> CheckReport:
    A, B = phi.source, phi.target
    witnesses = []
    for n in range(1, A.budget + 1):
        for name, fa, fb in (("d_bot", A.d_bot, B.d_bot), ("d_top", A.d_top, B.d_top)):
            j = kernels.first_mismatch(kernels.compose(phi.components[n - 1], fa[n]), kernels.compose(fb[n], phi.components[n]))
            if j >= 0:
                witnesses.append({"face": name, "level": n, "element": A.encode(A.levels[n][j])})
    return CheckReport("presheaf_map", not witnesses, witnesses)


def check_presheaf_isomorphism(A: InertPresheaf, B: InertPresheaf, components: Sequence[np.ndarray]) -> CheckReport:
    if A.budget != B.budget:
        return CheckReport("presheaf_isomorphism", False, [{"kind": "budget", "budgets": [A.budget, B.budget]}])
    witnesses = []
    for n in range(A.budget + 1):
        c = np.asarray(components[n])
        if len(c) != len(A.levels[n]) or len(A.levels[n]) != len(B.levels[n]) or len(np.unique(c)) != len(c):
            witnesses.append({"kind": "not-bijective", "level": n, "sizes": [len(A.levels[n]), len(B.levels[n])]})
    if witnesses:
        return CheckReport("presheaf_isomorphism", False, witnesses)
    r = check_presheaf_map(PresheafMap(A, B, list(components)))
    return CheckReport("presheaf_isomorphism", r.passed, r.witnesses)


# the free construction


@dataclass(frozen=True)
class FreeSimplex:
    comp: tuple[int, ...]
    elem: Any


def _free_encoder(A: InertPresheaf):
    def encode(s: FreeSimplex) -> str:
        return f"{encode_composition(s.comp)}|{A.encode(s.elem)}"

    return encode


def _blocks(A: InertPresheaf, k: int):
    comps = [c for c in _weight_compositions(k, A.budget) if A.levels[sum(c)]]
    offsets = {}
    total = 0
    for c in comps:
        offsets[c] = total
        total += len(A.levels[sum(c)])
    return comps, offsets, total


def free(A: InertPresheaf, N: int, W: int | None = None) -> TruncatedSimplicialSet:
    """The free decomposition space on ``A`` at truncation ``N``.

    ``W`` is the weight budget and must not exceed the presheaf budget.
    """
    W = A.budget if W is None else W
    if W > A.budget:
        raise BudgetError(f"weight budget {W} needs presheaf level {W}, which is beyond budget {A.budget}")
    if W < A.budget:
        A = A.restricted(W)
    key = ("free", N)
    cache = A.__dict__.setdefault("_free_cache", {})
    if key in cache:
        return cache[key]

    blocks = [_blocks(A, k) for k in range(N + 1)]
    levels = [[FreeSimplex(c, x) for c in comps for x in A.levels[sum(c)]] for comps, _, _ in blocks]

    def table(k, tgt_k, move):
        comps, _, total = blocks[k]
        _, tgt_offsets, _ = blocks[tgt_k]
        out = np.empty(total, dtype=np.int64)
        pos = 0
        for c in comps:
            size = len(A.levels[sum(c)])
            c2, elem_table = move(c)
            out[pos : pos + size] = tgt_offsets[c2] + elem_table
            pos += size
        return out

    def ident(c):
        return np.arange(len(A.levels[sum(c)]), dtype=np.int64)

    faces = [[] for _ in range(N + 1)]
    degs = [[] for _ in range(N + 1)]
    for k in range(1, N + 1):
        row = [table(k, k - 1, lambda c: (c[1:], A.bot_power(sum(c), c[0])))]
        row += [table(k, k - 1, lambda c, i=i: (composition_face(c, i), ident(c))) for i in range(1, k)]
        row.append(table(k, k - 1, lambda c: (c[:-1], A.top_power(sum(c), c[-1]))))
        faces[k] = row
    for k in range(N):
        degs[k] = [table(k, k + 1, lambda c, i=i: (composition_degeneracy(c, i), ident(c))) for i in range(k + 1)]

    X = TruncatedSimplicialSet(levels, faces, degs, encode=_free_encoder(A), budget=A.budget, name=f"free({A.name})")
    X.grading = _table([sum(s.comp) for s in levels[1]]) if N >= 1 else None
    X.presheaf = A
    cache[key] = X
    return X


def culf_projection(A: InertPresheaf, N: int, W: int | None = None) -> SimplicialMap:
    """``free(A) -> b_nat(N, W)`` sending ``(comp, elem)`` to ``comp``."""
    W = A.budget if W is None else W
    if W < A.budget:
        raise BudgetError(f"projection target budget {W} is below the presheaf budget {A.budget}")
    X = free(A, N)
    B = b_nat(N, W)
    comps = [_table([B.index(k, s.comp) for s in X.levels[k]]) for k in range(N + 1)]
    return SimplicialMap(X, B, comps)


def map_free(phi: PresheafMap, N: int) -> SimplicialMap:
    """``(comp, elem) -> (comp, phi(elem))``."""
    A, B = phi.source, phi.target
    if A.budget != B.budget:
        raise BudgetError(f"free spaces on budgets {A.budget} and {B.budget} are not comparable")
    X, Y = free(A, N), free(B, N)
    comps = []
    for k in range(N + 1):
        comps_x, _, total = _blocks(A, k)
        _, offsets_y, _ = _blocks(B, k)
        out = np.empty(total, dtype=np.int64)
        pos = 0
        for c in comps_x:
            size = len(A.levels[sum(c)])
            out[pos : pos + size] = offsets_y[c] + phi.components[sum(c)]
            pos += size
        comps.append(out)
    return SimplicialMap(X, Y, comps)


def _fiber_lookup(X: TruncatedSimplicialSet, phi: SimplicialMap, k: int) -> dict:
    """``(long edge, phi_k(sigma)) -> [sigma, ...]`` over ``X_k``."""
    out: dict[tuple[int, int], list[int]] = {}
    for j, (e, b) in enumerate(zip(X.long_edge(k).tolist(), phi.components[k].tolist())):
        out.setdefault((e, b), []).append(j)
    return out


def recover_presheaf(X: TruncatedSimplicialSet, phi: SimplicialMap) -> InertPresheaf:
    """Fibers of ``phi_1`` over ``(n)`` with faces read off unique 2-simplices.

    ``d_top(x) = d_2(sigma)`` for the 2-simplex over ``(n-1, 1)`` with long
    edge ``x``; ``d_bot(x) = d_0(sigma')`` for the one over ``(1, n-1)``.
    """
    B = phi.target
    if X.N < 2:
        raise TruncationError("recovery needs truncation >= 2")
    W = B.budget
    deg = [B.levels[1][j][0] for j in phi.components[1].tolist()]
    fibers = [[x for x in range(len(X.levels[1])) if deg[x] == n] for n in range(W + 1)]
    pos = {x: j for fib in fibers for j, x in enumerate(fib)}
    lifts = _fiber_lookup(X, phi, 2)
    enc1 = X.encodings(1)

    def lift(x, parts):
        hits = lifts.get((x, B.index(2, parts)), [])
        if len(hits) != 1:
            raise IntegrityError(f"{len(hits)} lifts of {enc1[x]} over {parts}; expected exactly one")
        return hits[0]

    bot, top = [[]], [[]]
    for n in range(1, W + 1):
        top.append([pos[X.faces[2][2][lift(x, (n - 1, 1))]] for x in fibers[n]])
        bot.append([pos[X.faces[2][0][lift(x, (1, n - 1))]] for x in fibers[n]])
    levels = [[enc1[x] for x in fib] for fib in fibers]
    A = InertPresheaf(levels, bot, top, str, f"recovered({X.name})")
    A.carrier = fibers
    return A


def roundtrip_presheaf(A: InertPresheaf, N: int = 2) -> CheckReport:
    """``recover(free(A), projection) ~ A`` via ``((n), a) -> a``."""
    X = free(A, N)
    R = recover_presheaf(X, culf_projection(A, N))
    comps = []
    for n, fib in enumerate(R.carrier):
        comps.append([A.index(n, X.levels[1][x].elem) for x in fib])
    rep = check_presheaf_isomorphism(R, A, comps)
    return CheckReport("recover(free(A)) = A", rep.passed, rep.witnesses, {"sizes": R.sizes()})


def roundtrip_space(X: TruncatedSimplicialSet, phi: SimplicialMap) -> CheckReport:
    """``free(recover(X, phi)) ~ X`` over the naturals' nerve.

    The comparison sends ``(comp, x)`` to the unique simplex over ``comp``
    with long edge ``x``; it must be a bijection commuting with all operators
    and with the two projections.
    """
    R = recover_presheaf(X, phi)
    Y = free(R, X.N)
    proj = culf_projection(R, X.N, phi.target.budget)
    B = phi.target
    witnesses = []
    comps = []
    for k in range(X.N + 1):
        lookup = _fiber_lookup(X, phi, k)
        comp = []
        for s in Y.levels[k]:
            n = sum(s.comp)
            x = R.carrier[n][R.index(n, s.elem)]
            hits = lookup.get((x, B.index(k, s.comp)), [])
            if len(hits) != 1:
                witnesses.append({"kind": "lift", "level": k, "element": Y.encode(s), "lifts": len(hits)})
                comp.append(0)
            else:
                comp.append(hits[0])
        comps.append(comp)
    if witnesses:
        return CheckReport("free(recover(X)) = X", False, witnesses[:20])
    comps = [_table(c) for c in comps]
    for k in range(X.N + 1):
        if len(np.unique(comps[k])) != len(comps[k]) or len(comps[k]) != len(X.levels[k]):
            witnesses.append({"kind": "not-bijective", "level": k, "sizes": [len(Y.levels[k]), len(X.levels[k])]})
    if witnesses:
        return CheckReport("free(recover(X)) = X", False, witnesses)
    F = SimplicialMap(Y, X, comps)
    rep = check_simplicial_map(F)
    witnesses += rep.witnesses
    for k in range(X.N + 1):
        j = kernels.first_mismatch(kernels.compose(phi.components[k], comps[k]), proj.components[k])
        if j >= 0:
            witnesses.append({"kind": "over-BN", "level": k, "element": Y.encodings(k)[j]})
    return CheckReport("free(recover(X)) = X", not witnesses, witnesses, {"sizes": Y.sizes()})


def check_sheaf(A: InertPresheaf, kary: bool = False) -> CheckReport:
    """``A_{m+n} -> A_m x_{A_0} A_n`` via ``(d_top^n, d_bot^m)`` is bijective for ``m + n <= budget``.

    With ``kary=True`` every split into three or more positive parts is also
    checked, by counting compatible tuples.
    """
    witnesses = []
    enc = lambda n: (lambda j: A.encode(A.levels[n][j]))  # noqa: E731
    for total in range(2, A.budget + 1):
        for m in range(1, total):
            n = total - m
            sq = Square(
                A.top_power(total, n),
                A.bot_power(total, m),
                A.bot_power(m, m),
                A.top_power(n, n),
                len(A.levels[m]),
                len(A.levels[n]),
                len(A.levels[0]),
                f"A_{total} -> A_{m} x A_{n}",
                (enc(total), enc(m), enc(n)),
            )
            witnesses += _pullback_or_witness(sq).witnesses
    if kary and not witnesses:
        for total in range(3, A.budget + 1):
            for parts in _compositions_exact(total):
                if len(parts) >= 3:
                    witnesses += _kary_sheaf(A, parts)
    return CheckReport("sheaf", not witnesses, witnesses)


def _compositions_exact(total: int):
    out = []

    def rec(rest, acc):
        if rest == 0:
            out.append(tuple(acc))
            return
        for p in range(1, rest + 1):
            rec(rest - p, acc + [p])

    rec(total, [])
    return out


def _kary_sheaf(A: InertPresheaf, parts) -> list[dict]:
    total = sum(parts)
    rows = []
    before = 0
    for p in parts:
        after = total - before - p
        rows.append(kernels.compose(A.bot_power(total - after, before), A.top_power(total, after)))
        before += p
    image = set(zip(*[r.tolist() for r in rows]))
    if len(image) != len(A.levels[total]):
        return [{"kind": "doubly-hit", "level": total, "parts": list(parts)}]
    # count compatible tuples: end of piece i equals start of piece i+1
    counts = {j: 1 for j in range(len(A.levels[parts[0]]))}
    for p_prev, p in zip(parts, parts[1:]):
        end = A.bot_power(p_prev, p_prev).tolist()
        start = A.top_power(p, p).tolist()
        by_vertex: dict[int, int] = {}
        for j, c in counts.items():
            by_vertex[end[j]] = by_vertex.get(end[j], 0) + c
        counts = {j: by_vertex.get(start[j], 0) for j in range(len(A.levels[p]))}
    if sum(counts.values()) != len(image):
        return [{"kind": "not-hit", "level": total, "parts": list(parts)}]
    return []


def is_restriction_species(A: InertPresheaf) -> bool:
    """Do the two faces ``A_1 -> A_0`` coincide?"""
    return A.budget < 1 or bool(np.array_equal(A.d_bot[1], A.d_top[1]))


def from_restriction_L_species(
    levels: Sequence[Sequence[Any]],
    bottom_face: Callable[[Any], Any],
    d_bot: Callable[[Any], Any],
    d_top: Callable[[Any], Any],
    encode: Callable[[Any], str] = str,
    name: str = "",
) -> InertPresheaf:
    """Presheaf from a restriction species: one face ``A_1 -> A_0``, two faces above."""
    levels = [tuple(lv) for lv in levels]

    def bot(x):
        return bottom_face(x) if x in set1 else d_bot(x)

    def top(x):
        return bottom_face(x) if x in set1 else d_top(x)

    set1 = set(levels[1]) if len(levels) > 1 else set()
    A = InertPresheaf.from_functions(levels, bot, top, encode, name)
    rep = validate_presheaf(A)
    if not rep.passed:
        raise PresheafError(f"relation fails: {rep.witnesses[0]}")
    return A


SHIFT_POINT = "*"


def shift_up(A: InertPresheaf) -> InertPresheaf:
    """``A'_0 = *`` and ``A'_n = A_{n-1}``; both faces ``A'_1 -> A'_0`` are the unique map."""
    levels = [(SHIFT_POINT,)] + list(A.levels)
    bot = [[], np.zeros(len(A.levels[0]), dtype=np.int64)] + list(A.d_bot[1:])
    top = [[], np.zeros(len(A.levels[0]), dtype=np.int64)] + list(A.d_top[1:])

    def encode(x):
        return SHIFT_POINT if x is SHIFT_POINT else A.encode(x)

    return InertPresheaf(levels, bot, top, encode, f"up({A.name})")


def shift_down(A: InertPresheaf, d: int) -> InertPresheaf:
    """``A'_n = A_{n+d}`` with inherited faces."""
    if d > A.budget:
        raise BudgetError(f"cannot shift down by {d} with budget {A.budget}")
    if d == 0:
        return A
    return InertPresheaf(
        A.levels[d:], [[]] + list(A.d_bot[d + 1 :]), [[]] + list(A.d_top[d + 1 :]), A.encode, f"down{d}({A.name})"
    )
