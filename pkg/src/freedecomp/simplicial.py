"""Truncated, levelwise-finite simplicial sets and their checkers.

A :class:`TruncatedSimplicialSet` keeps, for each level ``0..N``, a tuple of
hashable elements and int64 operator tables indexed by element position.
Infinite simplicial sets (the nerve of the monoid of naturals, word spaces)
enter through a weight budget: every face and degeneracy preserves or lowers
weight, so the budgeted levels are closed under all operators.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from . import kernels
from .simplex import (
    Arrow,
    FiniteCategory,
    OrdinalMap,
    active_arrow_category,
    active_to_composition,
    coface,
    codegeneracy,
    compose,
    factorize,
    generating_squares,
    inert_homset,
    monotone_maps,
    rho,
    unique_active,
)


class ClosureError(ValueError):
    """An operator left the enumerated levels."""


class TruncationError(ValueError):
    """The truncation is too small for the requested construction."""


class NonCommutingSquare(ValueError):
    """Precondition failure of :func:`is_pullback`."""

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


def _table(values) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(values, dtype=np.int64))


@dataclass
class CheckReport:
    """Verdict of a checker; a failing report always carries a witness."""

    name: str
    passed: bool
    witnesses: list[dict] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.passed and not self.witnesses:
            raise ValueError(f"failing report {self.name!r} without witness")

    def __bool__(self):
        return self.passed

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        doc = {"check": self.name, "verdict": self.verdict, "witnesses": self.witnesses}
        if self.details:
            doc["details"] = self.details
        return doc

    @classmethod
    def combine(cls, name: str, reports: Iterable["CheckReport"], **details) -> "CheckReport":
        reports = list(reports)
        witnesses = [w for r in reports for w in r.witnesses]
        return cls(name, all(r.passed for r in reports), witnesses, details)


class TruncatedSimplicialSet:
    """Levels ``X_0..X_N`` with face and degeneracy tables.

    ``faces[k][i]`` maps ``X_k -> X_{k-1}`` (``k >= 1``), ``degeneracies[k][i]``
    maps ``X_k -> X_{k+1}`` (``k < N``).  ``grading`` optionally assigns a
    degree to each 1-simplex and ``budget`` bounds the total degree of
    simplices that exist; the Segal checker uses both.
    """

    def __init__(
        self,
        levels: Sequence[Sequence[Any]],
        faces: Sequence[Sequence[np.ndarray]],
        degeneracies: Sequence[Sequence[np.ndarray]],
        encode: Callable[[Any], str] = str,
        grading: np.ndarray | None = None,
        budget: int | None = None,
        name: str = "",
    ):
        self.levels = [tuple(lv) for lv in levels]
        self.N = len(self.levels) - 1
        self.faces = [[_table(t) for t in lv] for lv in faces]
        self.degeneracies = [[_table(t) for t in lv] for lv in degeneracies]
        self.encode = encode
        self.grading = None if grading is None else _table(grading)
        self.budget = budget
        self.name = name
        self._index: list[dict] | None = None
        self._op_cache: dict[tuple, np.ndarray] = {}
        self.cache: dict = {}
        if len(self.faces) != self.N + 1 or len(self.degeneracies) != self.N + 1:
            raise ValueError("need face and degeneracy lists for every level")
        for k in range(self.N + 1):
            if len(self.faces[k]) != (k + 1 if k >= 1 else 0):
                raise ValueError(f"level {k} needs {k + 1} face tables")
            if len(self.degeneracies[k]) != (k + 1 if k < self.N else 0):
                raise ValueError(f"level {k} needs {k + 1} degeneracy tables")
            for t in self.faces[k]:
                self._check_table(t, k, k - 1)
            for t in self.degeneracies[k]:
                self._check_table(t, k, k + 1)

    def _check_table(self, t, src, tgt):
        if len(t) != len(self.levels[src]):
            raise ValueError(f"table on level {src} has wrong length")
        if len(t) and (t.min() < 0 or t.max() >= len(self.levels[tgt])):
            raise ValueError(f"table {src}->{tgt} leaves level {tgt}")

    @classmethod
    def from_functions(
        cls,
        levels: Sequence[Sequence[Any]],
        face: Callable[[int, int, Any], Any],
        degeneracy: Callable[[int, int, Any], Any],
        **kwargs,
    ) -> "TruncatedSimplicialSet":
        """Tabulate ``face(k, i, x)`` and ``degeneracy(k, i, x)`` over the levels."""
        levels = [tuple(lv) for lv in levels]
        index = [{x: j for j, x in enumerate(lv)} for lv in levels]
        N = len(levels) - 1

        def tab(k, tgt, fn, i):
            out = []
            for x in levels[k]:
                y = fn(k, i, x)
                try:
                    out.append(index[tgt][y])
                except KeyError:
                    raise ClosureError(f"operator {i} on level {k} sends {x!r} to {y!r}, not in level {tgt}") from None
            return out

        faces = [[tab(k, k - 1, face, i) for i in range(k + 1)] if k else [] for k in range(N + 1)]
        degs = [[tab(k, k + 1, degeneracy, i) for i in range(k + 1)] if k < N else [] for k in range(N + 1)]
        return cls(levels, faces, degs, **kwargs)

    # element access

    def index(self, k: int, x: Any) -> int:
        if self._index is None:
            self._index = [{x: j for j, x in enumerate(lv)} for lv in self.levels]
        try:
            return self._index[k][x]
        except KeyError:
            raise KeyError(f"{x!r} is not in level {k}") from None

    def encodings(self, k: int) -> list[str]:
        key = ("enc", k)
        if key not in self.cache:
            self.cache[key] = [self.encode(x) for x in self.levels[k]]
        return self.cache[key]

    def lookup(self, k: int, encoding: str) -> int:
        key = ("dec", k)
        if key not in self.cache:
            self.cache[key] = {e: j for j, e in enumerate(self.encodings(k))}
        try:
            return self.cache[key][encoding]
        except KeyError:
            raise KeyError(f"no element {encoding!r} in level {k}") from None

    def sizes(self) -> list[int]:
        return [len(lv) for lv in self.levels]

    def copy(self) -> "TruncatedSimplicialSet":
        return TruncatedSimplicialSet(
            self.levels,
            [[t.copy() for t in lv] for lv in self.faces],
            [[t.copy() for t in lv] for lv in self.degeneracies],
            self.encode,
            self.grading,
            self.budget,
            self.name,
        )

    # operators

    def operator(self, g: OrdinalMap) -> np.ndarray:
        """Table of ``X(g) : X_n -> X_m`` for ``g : [m] -> [n]``."""
        if max(g.source, g.target) > self.N:
            raise TruncationError(f"{g} leaves truncation {self.N}")
        key = g.values + (g.target,)
        if key not in self._op_cache:
            self._op_cache[key] = self._operator(g)
        return self._op_cache[key]

    def _operator(self, g: OrdinalMap) -> np.ndarray:
        missing = [i for i in range(g.target + 1) if i not in set(g.values)]
        if missing:
            i = missing[-1]
            rest = OrdinalMap(g.source, g.target - 1, tuple(v if v < i else v - 1 for v in g.values))
            return kernels.compose(self.operator(rest), self.faces[g.target][i])
        for j in range(g.source):
            if g.values[j] == g.values[j + 1]:
                rest = OrdinalMap(g.source - 1, g.target, g.values[: j + 1] + g.values[j + 2 :])
                return kernels.compose(self.degeneracies[g.source - 1][j], self.operator(rest))
        return np.arange(len(self.levels[g.target]), dtype=np.int64)

    def long_edge(self, k: int) -> np.ndarray:
        """``X_k -> X_1`` along the unique active ``[1] -> [k]``."""
        return self.operator(unique_active(k))

    def nondegenerate(self, k: int) -> np.ndarray:
        """Boolean mask of the simplices of ``X_k`` outside every degeneracy image."""
        key = ("nondeg", k)
        if key not in self.cache:
            mask = np.ones(len(self.levels[k]), dtype=bool)
            if k >= 1:
                for t in self.degeneracies[k - 1]:
                    mask[t] = False
            self.cache[key] = mask
        return self.cache[key]

    def degree(self, x1: int) -> int | None:
        return None if self.grading is None else int(self.grading[x1])

    # serialization

    def to_json(self) -> dict:
        enc = [self.encodings(k) for k in range(self.N + 1)]
        return {
            "truncation": self.N,
            "levels": enc,
            "faces": {
                str(k): [[enc[k - 1][j] for j in t.tolist()] for t in self.faces[k]] for k in range(1, self.N + 1)
            },
            "degeneracies": {
                str(k): [[enc[k + 1][j] for j in t.tolist()] for t in self.degeneracies[k]] for k in range(self.N)
            },
        }

    @classmethod
    def from_json(cls, doc: dict | str) -> "TruncatedSimplicialSet":
        """Rebuild from :meth:`to_json`; elements become their encodings."""
        if isinstance(doc, str):
            doc = json.loads(doc)
        levels = doc["levels"]
        N = doc["truncation"]
        idx = [{e: j for j, e in enumerate(lv)} for lv in levels]
        faces = [[] for _ in range(N + 1)]
        degs = [[] for _ in range(N + 1)]
        for k in range(1, N + 1):
            faces[k] = [[idx[k - 1][e] for e in t] for t in doc["faces"][str(k)]]
        for k in range(N):
            degs[k] = [[idx[k + 1][e] for e in t] for t in doc["degeneracies"][str(k)]]
        return cls(levels, faces, degs, encode=str)

    def __repr__(self):
        return f"TruncatedSimplicialSet({self.name or 'X'}, N={self.N}, sizes={self.sizes()})"


@dataclass
class SimplicialMap:
    """Levelwise maps ``F_k : X_k -> Y_k`` as index tables."""

    source: TruncatedSimplicialSet
    target: TruncatedSimplicialSet
    components: list[np.ndarray]

    def __post_init__(self):
        if self.source.N != self.target.N:
            raise TruncationError("simplicial maps need equal truncations")
        self.components = [_table(c) for c in self.components]

    def then(self, other: "SimplicialMap") -> "SimplicialMap":
        return SimplicialMap(
            self.source, other.target, [kernels.compose(g, f) for f, g in zip(self.components, other.components)]
        )


def check_simplicial_map(F: SimplicialMap) -> CheckReport:
    X, Y = F.source, F.target
    witnesses = []
    for k in range(X.N + 1):
        for kind, tables_x, tables_y, tgt in (
            ("d", X.faces[k], Y.faces[k], k - 1),
            ("s", X.degeneracies[k], Y.degeneracies[k], k + 1),
        ):
            for i, (tx, ty) in enumerate(zip(tables_x, tables_y)):
                lhs = kernels.compose(F.components[tgt], tx)
                rhs = kernels.compose(ty, F.components[k])
                j = kernels.first_mismatch(lhs, rhs)
                if j >= 0:
                    witnesses.append({"operator": f"{kind}_{i}", "level": k, "element": X.encodings(k)[j]})
    return CheckReport("simplicial_map", not witnesses, witnesses)


def check_simplicial_identities(X: TruncatedSimplicialSet) -> CheckReport:
    """Every instance of the simplicial identities inside the truncation."""
    d, s = X.faces, X.degeneracies
    witnesses = []

    def compare(label, k, lhs, rhs):
        j = kernels.first_mismatch(lhs, rhs)
        if j >= 0:
            witnesses.append({"identity": label, "level": k, "element": X.encodings(k)[j]})

    for k in range(2, X.N + 1):
        for j in range(k + 1):
            for i in range(j):
                compare(
                    f"d_{i} d_{j} = d_{j - 1} d_{i}",
                    k,
                    kernels.compose(d[k - 1][i], d[k][j]),
                    kernels.compose(d[k - 1][j - 1], d[k][i]),
                )
    for k in range(X.N):
        ident = np.arange(len(X.levels[k]), dtype=np.int64)
        for j in range(k + 1):
            for i in range(k + 2):
                lhs = kernels.compose(d[k + 1][i], s[k][j])
                if i < j:
                    compare(f"d_{i} s_{j} = s_{j - 1} d_{i}", k, lhs, kernels.compose(s[k - 1][j - 1], d[k][i]))
                elif i in (j, j + 1):
                    compare(f"d_{i} s_{j} = id", k, lhs, ident)
                else:
                    compare(f"d_{i} s_{j} = s_{j} d_{i - 1}", k, lhs, kernels.compose(s[k - 1][j], d[k][i - 1]))
    for k in range(X.N - 1):
        for j in range(k + 1):
            for i in range(j + 1):
                compare(
                    f"s_{i} s_{j} = s_{j + 1} s_{i}",
                    k,
                    kernels.compose(s[k + 1][i], s[k][j]),
                    kernels.compose(s[k + 1][j + 1], s[k][i]),
                )
    return CheckReport("simplicial_identities", not witnesses, witnesses)


@dataclass
class Square:
    """Commutative square of finite sets, as index tables.

    ``top : P -> B``, ``left : P -> C``, ``right : B -> D``, ``bottom : C -> D``.
    """

    top: np.ndarray
    left: np.ndarray
    right: np.ndarray
    bottom: np.ndarray
    n_b: int
    n_c: int
    n_d: int
    label: str = ""
    names: tuple | None = None  # encoders for P, B, C

    @classmethod
    def from_functions(cls, P, B, C, D, top, left, right, bottom, label="", encode=str) -> "Square":
        ib = {x: j for j, x in enumerate(B)}
        ic = {x: j for j, x in enumerate(C)}
        id_ = {x: j for j, x in enumerate(D)}
        P, B, C = list(P), list(B), list(C)
        return cls(
            _table([ib[top(p)] for p in P]),
            _table([ic[left(p)] for p in P]),
            _table([id_[right(b)] for b in B]),
            _table([id_[bottom(c)] for c in C]),
            len(B),
            len(C),
            len(D),
            label,
            (lambda j: encode(P[j]), lambda j: encode(B[j]), lambda j: encode(C[j])),
        )

    def transpose(self) -> "Square":
        names = None if self.names is None else (self.names[0], self.names[2], self.names[1])
        return Square(self.left, self.top, self.bottom, self.right, self.n_c, self.n_b, self.n_d, self.label, names)


def is_pullback(sq: Square) -> CheckReport:
    """Is ``P`` the fiber product ``B x_D C`` via ``(top, left)``?

    Raises :class:`NonCommutingSquare` when the square does not commute.
    """
    code, u, v = kernels.pullback_check(sq.top, sq.left, sq.right, sq.bottom, sq.n_b, sq.n_c, sq.n_d)
    nm = sq.names or (str, str, str)
    if code == 0:
        return CheckReport("pullback", True, details={"square": sq.label})
    if code == 1:
        raise NonCommutingSquare(f"square {sq.label} does not commute", {"square": sq.label, "element": nm[0](u)})
    if code == 2:
        w = {"square": sq.label, "kind": "doubly-hit", "elements": [nm[0](u), nm[0](v)]}
    else:
        w = {"square": sq.label, "kind": "not-hit", "pair": [nm[1](u), nm[2](v)]}
    return CheckReport("pullback", False, [w])


def _level_namer(X, k):
    enc = X.encodings(k)
    return lambda j: enc[j]


def square_of(X: TruncatedSimplicialSet, gs) -> Square:
    """Image under ``X`` of a generating pushout square."""
    m = gs.active.source
    n, m1, p = gs.active.target, gs.inert.target, gs.pushout_active.target
    return Square(
        X.operator(gs.pushout_inert),
        X.operator(gs.pushout_active),
        X.operator(gs.active),
        X.operator(gs.inert),
        len(X.levels[n]),
        len(X.levels[m1]),
        len(X.levels[m]),
        gs.label,
        (_level_namer(X, p), _level_namer(X, n), _level_namer(X, m1)),
    )


def _pullback_or_witness(sq: Square) -> CheckReport:
    try:
        return is_pullback(sq)
    except NonCommutingSquare as exc:
        return CheckReport("pullback", False, [dict(exc.witness, kind="non-commuting")])


def check_decomposition(X: TruncatedSimplicialSet) -> CheckReport:
    """Every generating active-inert pushout inside the truncation goes to a pullback."""
    reports = []
    for gs in generating_squares(X.N):
        if max(gs.dimensions) <= X.N:
            reports.append(_pullback_or_witness(square_of(X, gs)))
    return CheckReport.combine("decomposition", reports, squares=len(reports))


def _segal_level(X: TruncatedSimplicialSet, k: int) -> list[dict]:
    edges = np.stack([X.operator(rho(i, k)) for i in range(1, k + 1)], axis=1)
    src, tgt = X.faces[1][1], X.faces[1][0]
    enc1 = X.encodings(1)
    rows = [tuple(r) for r in edges.tolist()]
    seen: dict[tuple, int] = {}
    for j, r in enumerate(rows):
        if r in seen:
            enck = X.encodings(k)
            return [{"level": k, "kind": "doubly-hit", "elements": [enck[seen[r]], enck[j]]}]
        seen[r] = j

    W = X.budget if X.grading is not None else None
    deg = X.grading.tolist() if W is not None else None
    n0, n1 = len(X.levels[0]), len(X.levels[1])
    out_edges = [[] for _ in range(n0)]
    for e in range(n1):
        if deg is None or deg[e] <= W:
            out_edges[int(src[e])].append(e)

    # count chains of k composable edges (with total degree <= W) by dynamic programming
    if deg is None:
        count = np.zeros(n0, dtype=object)
        count[:] = 1
        for _ in range(k):
            nxt = np.zeros(n0, dtype=object)
            for v in range(n0):
                if count[v]:
                    for e in out_edges[v]:
                        nxt[int(tgt[e])] += count[v]
            count = nxt
        total = int(sum(count))
    else:
        count = [{0: 1} for _ in range(n0)]
        for _ in range(k):
            nxt = [dict() for _ in range(n0)]
            for v in range(n0):
                for w0, c in count[v].items():
                    for e in out_edges[v]:
                        w1 = w0 + deg[e]
                        if w1 <= W:
                            t = int(tgt[e])
                            nxt[t][w1] = nxt[t].get(w1, 0) + c
            count = nxt
        total = sum(sum(c.values()) for c in count)
    if total == len(rows):
        return []

    def chains(v, depth, weight):
        if depth == k:
            yield ()
            return
        for e in out_edges[v]:
            w1 = weight + (deg[e] if deg is not None else 0)
            if deg is None or w1 <= W:
                for rest in chains(int(tgt[e]), depth + 1, w1):
                    yield (e,) + rest

    for v in range(n0):
        for ch in chains(v, 0, 0):
            if ch not in seen:
                return [{"level": k, "kind": "not-hit", "edges": [enc1[e] for e in ch]}]
    raise AssertionError("Segal count mismatch without a missing chain")


def check_segal(X: TruncatedSimplicialSet) -> CheckReport:
    """Segal maps ``X_k -> X_1 x_{X_0} ... x_{X_0} X_1`` are bijections for ``2 <= k <= N``.

    With a grading, the fiber product is restricted to chains of total
    degree within the budget.
    """
    witnesses = []
    for k in range(2, X.N + 1):
        witnesses += _segal_level(X, k)
    return CheckReport("segal", not witnesses, witnesses)


def check_culf(F: SimplicialMap, full: bool = False) -> CheckReport:
    """Naturality squares of ``F`` on active maps are pullbacks.

    By default only the unique active ``[1] -> [k]`` for ``1 <= k <= N`` is
    checked; ``full=True`` checks every active generator instead.
    """
    X, Y = F.source, F.target
    actives = []
    if full:
        for k in range(X.N + 1):
            actives += [coface(i, k) for i in range(1, k)]
            actives += [codegeneracy(j, k - 1) for j in range(k)] if k >= 1 else []
    else:
        actives = [unique_active(k) for k in range(1, X.N + 1)]
    reports = []
    for a in actives:
        m, n = a.source, a.target
        sq = Square(
            X.operator(a),
            F.components[n],
            F.components[m],
            Y.operator(a),
            len(X.levels[m]),
            len(Y.levels[n]),
            len(Y.levels[m]),
            f"active {a.values}:[{m}]->[{n}]",
            (_level_namer(X, n), _level_namer(X, m), _level_namer(Y, n)),
        )
        r = _pullback_or_witness(sq)
        for w in r.witnesses:
            w["level"] = n
        reports.append(r)
    return CheckReport.combine("culf", reports)


def check_isomorphism(X: TruncatedSimplicialSet, Y: TruncatedSimplicialSet, components: Sequence[np.ndarray]) -> CheckReport:
    """Components are bijections commuting with every face and degeneracy."""
    witnesses = []
    if X.N != Y.N:
        return CheckReport("isomorphism", False, [{"kind": "truncation", "sizes": [X.N, Y.N]}])
    for k in range(X.N + 1):
        c = np.asarray(components[k])
        if len(c) != len(Y.levels[k]) or len(np.unique(c)) != len(c) or len(c) != len(X.levels[k]):
            witnesses.append({"level": k, "kind": "not-bijective", "sizes": [len(X.levels[k]), len(Y.levels[k])]})
    if witnesses:
        return CheckReport("isomorphism", False, witnesses)
    F = SimplicialMap(X, Y, list(components))
    r = check_simplicial_map(F)
    return CheckReport("isomorphism", r.passed, r.witnesses)


# constructors


def _weight_compositions(k: int, W: int) -> list[tuple[int, ...]]:
    """Compositions of length ``k`` (zero parts allowed) with weight ``<= W``, by weight then lexicographically."""
    out = []
    for w in range(W + 1):
        out += [c for c in product(range(w + 1), repeat=k) if sum(c) == w] if k else ([()] if w == 0 else [])
    return out


def compositions_of(n: int, k: int) -> list[tuple[int, ...]]:
    """Compositions of ``n`` into ``k`` parts, zeros allowed, lexicographic."""
    if k == 0:
        return [()] if n == 0 else []
    return [(a,) + rest for a in range(n + 1) for rest in compositions_of(n - a, k - 1)]


def encode_composition(c) -> str:
    return ",".join(str(p) for p in c)


def composition_face(c: tuple, i: int) -> tuple:
    k = len(c)
    if i == 0:
        return c[1:]
    if i == k:
        return c[:-1]
    return c[: i - 1] + (c[i - 1] + c[i],) + c[i + 1 :]


def composition_degeneracy(c: tuple, i: int) -> tuple:
    return c[:i] + (0,) + c[i:]


def b_nat(N: int, W: int) -> TruncatedSimplicialSet:
    """Nerve of the monoid of naturals: level ``k`` is compositions of length ``k`` and weight ``<= W``."""
    levels = [[c for w in range(W + 1) for c in compositions_of(w, k)] for k in range(N + 1)]
    X = TruncatedSimplicialSet.from_functions(
        levels,
        lambda k, i, c: composition_face(c, i),
        lambda k, i, c: composition_degeneracy(c, i),
        encode=encode_composition,
        budget=W,
        name=f"BN(N={N},W={W})",
    )
    if N >= 1:
        X.grading = _table([sum(c) for c in X.levels[1]])
    return X


def point(N: int) -> TruncatedSimplicialSet:
    """The terminal simplicial set."""
    return TruncatedSimplicialSet.from_functions(
        [("*",)] * (N + 1), lambda k, i, x: "*", lambda k, i, x: "*", encode=str, name="point"
    )


def terminal_map(X: TruncatedSimplicialSet) -> SimplicialMap:
    P = point(X.N)
    return SimplicialMap(X, P, [np.zeros(len(lv), dtype=np.int64) for lv in X.levels])


def edgewise_map(g: OrdinalMap) -> OrdinalMap:
    """``Q(g) : [2m+1] -> [2n+1]`` for ``g : [m] -> [n]``, where ``Q([n]) = [n]^op * [n]``."""
    m, n = g.source, g.target
    vals = [n - g.values[m - i] for i in range(m + 1)] + [n + 1 + g.values[i] for i in range(m + 1)]
    return OrdinalMap(2 * m + 1, 2 * n + 1, tuple(vals))


def edgewise(X: TruncatedSimplicialSet) -> TruncatedSimplicialSet:
    """Edgewise subdivision: level ``k`` is ``X_{2k+1}``, operators evaluated on ``Q``-images."""
    if X.N < 1:
        raise TruncationError("edgewise subdivision needs truncation >= 1")
    M = (X.N - 1) // 2
    levels = [X.levels[2 * k + 1] for k in range(M + 1)]
    faces = [[X.operator(edgewise_map(coface(i, k))) for i in range(k + 1)] if k else [] for k in range(M + 1)]
    degs = [[X.operator(edgewise_map(codegeneracy(i, k))) for i in range(k + 1)] if k < M else [] for k in range(M + 1)]
    return TruncatedSimplicialSet(levels, faces, degs, encode=X.encode, name=f"sd({X.name})")


def compare_tw_bn_with_delta_inert(N: int, W: int) -> CheckReport:
    """Edgewise subdivision of the naturals' nerve against the inert subcategory.

    Arrows ``(a, m, b)`` of the subdivision (3-simplices of the nerve) go to
    the inert map ``[m] -> [a+m+b]`` with image starting at ``a``.  Checks
    objects, hom-set bijections and composition for objects ``0..W``.
    """
    if N < 5:
        raise TruncationError("composition in the subdivision needs truncation >= 5")
    sd = edgewise(b_nat(N, W))
    witnesses = []
    objects = [c[0] for c in sd.levels[0]]
    if sorted(objects) != list(range(W + 1)):
        witnesses.append({"kind": "objects", "found": objects})
    source_of = {x: sd.levels[0][j][0] for x, j in zip(sd.levels[1], sd.faces[1][1].tolist())}
    target_of = {x: sd.levels[0][j][0] for x, j in zip(sd.levels[1], sd.faces[1][0].tolist())}

    def to_inert(arrow):
        a, m, b = arrow
        return OrdinalMap(m, a + m + b, tuple(range(a, a + m + 1)))

    hom_counts = {}
    for m in range(W + 1):
        for n in range(m, W + 1):
            tw = sorted(to_inert(x).values for x in sd.levels[1] if source_of[x] == m and target_of[x] == n)
            di = sorted(f.values for f in inert_homset(m, n))
            hom_counts[f"{m}->{n}"] = len(tw)
            if tw != di or len(tw) != n - m + 1:
                witnesses.append({"kind": "hom", "source": m, "target": n, "tw": len(tw), "inert": len(di)})
    for m in range(W + 1):
        ident = [x for x in sd.levels[1] if source_of[x] == m and target_of[x] == m]
        deg = sd.levels[1][sd.degeneracies[0][0][sd.index(0, (m,))]]
        if ident != [(0, m, 0)] or deg != (0, m, 0) or to_inert(deg).values != tuple(range(m + 1)):
            witnesses.append({"kind": "identity", "object": m})

    # composition: the unique 2-simplex over a composable pair, then its d_1
    d0, d1, d2 = (sd.faces[2][i].tolist() for i in range(3))
    composite = {}
    for j in range(len(sd.levels[2])):
        pair = (sd.levels[1][d2[j]], sd.levels[1][d0[j]])
        if pair in composite:
            witnesses.append({"kind": "composition-not-unique", "pair": [encode_composition(p) for p in pair]})
        composite[pair] = sd.levels[1][d1[j]]
    checked = 0
    for f in sd.levels[1]:
        for g in sd.levels[1]:
            if target_of[f] != source_of[g] or target_of[g] > W:
                continue
            if (f, g) not in composite:
                witnesses.append({"kind": "composition-missing", "pair": [encode_composition(f), encode_composition(g)]})
                continue
            checked += 1
            if to_inert(composite[(f, g)]) != compose(to_inert(f), to_inert(g)):
                witnesses.append({"kind": "composition", "pair": [encode_composition(f), encode_composition(g)]})
    return CheckReport("tw(BN) = Delta_inert", not witnesses, witnesses[:20], {"homs": hom_counts, "composites": checked})


def elements_category(X: TruncatedSimplicialSet) -> FiniteCategory:
    """Category of elements at truncation: objects ``(k, x)``, arrows ``(g, x)`` from ``(h, X(g)x)`` to ``(k, x)``."""
    objects = tuple((k, x) for k in range(X.N + 1) for x in X.levels[k])
    arrows = []
    for k in range(X.N + 1):
        for h in range(X.N + 1):
            for g in monotone_maps(h, k):
                t = X.operator(g).tolist()
                for j, x in enumerate(X.levels[k]):
                    arrows.append(Arrow((h, X.levels[h][t[j]]), (k, x), g))
    return FiniteCategory(objects, tuple(arrows), lambda f1, f2: compose(f1.label, f2.label))


def compare_active_arrows_with_el_bn(k_max: int, n_max: int) -> CheckReport:
    """Active arrows with cartesian squares against elements of the naturals' nerve.

    Over ``[k]`` an active map corresponds to its composition.  For every
    object and every ``phi : [h] -> [k]`` the cartesian lift computed by
    factorization must match the nerve's action ``X(phi)``, and lifts must
    compose.
    """
    X = b_nat(k_max, n_max)
    arr = active_arrow_category(k_max, n_max)
    witnesses = []
    objects_by_k = {}
    for alpha in arr.objects:
        objects_by_k.setdefault(alpha.source, []).append(active_to_composition(alpha).parts)
    for k in range(k_max + 1):
        if sorted(objects_by_k.get(k, [])) != sorted(X.levels[k]):
            witnesses.append({"kind": "objects", "level": k})

    lifts = {}
    for f in arr.arrows:
        phi, iota = f.label
        sigma = active_to_composition(f.target).parts
        expected = X.levels[phi.source][X.operator(phi)[X.index(phi.target, sigma)]]
        got = active_to_composition(f.source).parts
        if got != expected:
            witnesses.append({"kind": "lift", "phi": list(phi.values), "object": list(sigma), "arr": list(got), "el": list(expected)})
        lifts[(phi, f.target)] = f

    # lifts compose: lift(phi2 . phi1) = lift(phi1 at lift(phi2)) then lift(phi2)
    composed = 0
    for (phi2, alpha), f2 in lifts.items():
        for h in range(k_max + 1):
            for phi1 in monotone_maps(h, phi2.source):
                f1 = lifts[(phi1, f2.source)]
                f12 = lifts[(compose(phi1, phi2), alpha)]
                composed += 1
                if f12.source != f1.source or arr.compose_labels(f1, f2) != f12.label:
                    witnesses.append({"kind": "functoriality", "phi1": list(phi1.values), "phi2": list(phi2.values)})
    return CheckReport(
        "Arr_act(Delta)^cart = el(BN)",
        not witnesses,
        witnesses[:20],
        {"objects": len(arr.objects), "arrows": len(arr.arrows), "composites": composed},
    )


def nerve_of_poset(elements: Sequence[Any], leq: Callable[[Any, Any], bool], N: int, encode=None) -> TruncatedSimplicialSet:
    """Nerve of a finite poset: ``k``-simplices are chains ``x_0 <= ... <= x_k``."""
    elements = list(elements)
    levels = [[(x,) for x in elements]]
    for _ in range(N):
        levels.append([c + (y,) for c in levels[-1] for y in elements if leq(c[-1], y)])
    enc = encode or (lambda c: "<".join(str(x) for x in c))
    return TruncatedSimplicialSet.from_functions(
        levels,
        lambda k, i, c: c[:i] + c[i + 1 :],
        lambda k, i, c: c[: i + 1] + c[i:],
        encode=enc,
        name="nerve",
    )
