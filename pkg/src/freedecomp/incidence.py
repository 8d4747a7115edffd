"""Incidence coalgebra of a truncated decomposition space, over exact rationals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

from . import kernels
from .simplicial import CheckReport, TruncatedSimplicialSet, TruncationError

Key = Union[str, tuple]


def format_fraction(q: Fraction) -> str:
    """Reduced ``p/q`` with an explicit sign (zero is ``0/1``)."""
    q = Fraction(q)
    if q == 0:
        return "0/1"
    sign = "-" if q < 0 else "+"
    return f"{sign}{abs(q.numerator)}/{q.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)


class TensorComb:
    """Sparse linear combination of basis keys with rational coefficients.

    Keys are element encodings (strings) or tuples of them for tensors.
    Zero coefficients are never stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict | Iterable = ()):
        self.terms: dict[Key, Fraction] = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for k, c in items:
            self.add(k, c)

    def add(self, key: Key, coeff=1) -> None:
        c = self.terms.get(key, Fraction(0)) + Fraction(coeff)
        if c:
            self.terms[key] = c
        else:
            self.terms.pop(key, None)

    def __add__(self, other: "TensorComb") -> "TensorComb":
        out = TensorComb(self.terms)
        for k, c in other.terms.items():
            out.add(k, c)
        return out

    def __sub__(self, other: "TensorComb") -> "TensorComb":
        return self + other.scale(-1)

    def scale(self, s) -> "TensorComb":
        return TensorComb({k: c * s for k, c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, TensorComb) and self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda kv: (kv[0],) if isinstance(kv[0], str) else kv[0]))

    def __repr__(self):
        body = " + ".join(f"{format_fraction(c)} {k}" for k, c in self)
        return f"TensorComb({body or '0'})"

    def to_json(self) -> dict:
        out = []
        for k, c in self:
            if isinstance(k, tuple) and len(k) == 2:
                out.append({"left": k[0], "right": k[1], "coeff": format_fraction(c)})
            elif isinstance(k, tuple):
                out.append({"factors": list(k), "coeff": format_fraction(c)})
            else:
                out.append({"key": k, "coeff": format_fraction(c)})
        return {"terms": out}

    @classmethod
    def from_json(cls, doc: dict) -> "TensorComb":
        out = cls()
        for t in doc["terms"]:
            if "left" in t:
                key = (t["left"], t["right"])
            elif "factors" in t:
                key = tuple(t["factors"])
            else:
                key = t["key"]
            out.add(key, parse_fraction(t["coeff"]))
        return out


@dataclass
class ConvolutionFunction:
    """Rational values on every 1-simplex of ``space``."""

    space: TruncatedSimplicialSet
    values: list[Fraction]

    def __post_init__(self):
        if len(self.values) != len(self.space.levels[1]):
            raise ValueError("a convolution function must be total on level 1")
        self.values = [Fraction(v) for v in self.values]

    def __call__(self, f) -> Fraction:
        return self.values[_resolve(self.space, f)]

    def __eq__(self, other):
        return isinstance(other, ConvolutionFunction) and other.space is self.space and other.values == self.values

    def to_json(self) -> dict:
        enc = self.space.encodings(1)
        return {"values": {enc[j]: format_fraction(v) for j, v in enumerate(self.values)}}


def _resolve(X: TruncatedSimplicialSet, f) -> int:
    if isinstance(f, (int, np.integer)):
        if not 0 <= f < len(X.levels[1]):
            raise KeyError(f"no 1-simplex with index {f}")
        return int(f)
    if isinstance(f, str):
        return X.lookup(1, f)
    return X.index(1, f)


def _splittings(X: TruncatedSimplicialSet):
    """``(offsets, order)`` grouping the 2-simplices by long edge ``d_1``."""
    if X.N < 2:
        raise TruncationError("comultiplication needs truncation >= 2")
    key = ("splittings",)
    if key not in X.cache:
        X.cache[key] = kernels.fiber_offsets(X.faces[2][1], len(X.levels[1]))
    return X.cache[key]


def splittings_of(X: TruncatedSimplicialSet, f) -> list[tuple[int, int]]:
    """``(d_2 sigma, d_0 sigma)`` for each 2-simplex ``sigma`` with ``d_1 sigma = f``."""
    j = _resolve(X, f)
    offsets, order = _splittings(X)
    sig = order[offsets[j] : offsets[j + 1]]
    return list(zip(X.faces[2][2][sig].tolist(), X.faces[2][0][sig].tolist()))


def comult(X: TruncatedSimplicialSet, f, iterate: int = 1) -> TensorComb:
    """``sum d_2 sigma (x) d_0 sigma`` over 2-simplices with long edge ``f``.

    ``iterate = r`` applies the comultiplication ``r`` times, always to the
    first tensor factor, giving ``(r+1)``-fold tensors.
    """
    if iterate < 0:
        raise ValueError("iterate must be >= 0")
    enc = X.encodings(1)
    j = _resolve(X, f)
    if iterate == 0:
        return TensorComb({enc[j]: 1})
    current = {(j,): Fraction(1)}
    for _ in range(iterate):
        nxt: dict[tuple, Fraction] = {}
        for key, c in current.items():
            for left, right in splittings_of(X, key[0]):
                k2 = (left, right) + key[1:]
                nxt[k2] = nxt.get(k2, Fraction(0)) + c
        current = nxt
    return TensorComb({tuple(enc[i] for i in key): c for key, c in current.items()})


def degenerate_edges(X: TruncatedSimplicialSet) -> np.ndarray:
    mask = np.zeros(len(X.levels[1]), dtype=bool)
    if X.N >= 1:
        mask[X.degeneracies[0][0]] = True
    return mask


def counit(X: TruncatedSimplicialSet, f) -> Fraction:
    """1 on the image of ``s_0 : X_0 -> X_1``, else 0."""
    return Fraction(int(degenerate_edges(X)[_resolve(X, f)]))


def _counit_laws(X, j) -> list[dict]:
    eps = degenerate_edges(X)
    enc = X.encodings(1)
    left = TensorComb()
    right = TensorComb()
    for a, b in splittings_of(X, j):
        if eps[a]:
            left.add(enc[b])
        if eps[b]:
            right.add(enc[a])
    target = TensorComb({enc[j]: 1})
    out = []
    if left != target:
        out.append({"law": "(eps x id) comult = id", "element": enc[j], "got": left.to_json()})
    if right != target:
        out.append({"law": "(id x eps) comult = id", "element": enc[j], "got": right.to_json()})
    return out


def check_coassoc(X: TruncatedSimplicialSet, sample: Iterable | None = None) -> CheckReport:
    """Coassociativity and both counit laws on each sampled 1-simplex."""
    if X.N < 3:
        raise TruncationError("coassociativity checks need truncation >= 3")
    enc = X.encodings(1)
    sample = range(len(X.levels[1])) if sample is None else [_resolve(X, f) for f in sample]
    witnesses = []
    checked = 0
    for j in sample:
        checked += 1
        lhs: dict[tuple, int] = {}
        rhs: dict[tuple, int] = {}
        for a, b in splittings_of(X, j):
            for a1, a2 in splittings_of(X, a):
                lhs[(a1, a2, b)] = lhs.get((a1, a2, b), 0) + 1
            for b1, b2 in splittings_of(X, b):
                rhs[(a, b1, b2)] = rhs.get((a, b1, b2), 0) + 1
        if lhs != rhs:
            diff = sorted(set(lhs.items()) ^ set(rhs.items()))[0]
            witnesses.append(
                {"law": "coassociativity", "element": enc[j], "term": [enc[i] for i in diff[0]]}
            )
        witnesses += _counit_laws(X, j)
    return CheckReport("coalgebra", not witnesses, witnesses, {"checked": checked})


def zeta(X: TruncatedSimplicialSet) -> ConvolutionFunction:
    return ConvolutionFunction(X, [1] * len(X.levels[1]))


def epsilon(X: TruncatedSimplicialSet) -> ConvolutionFunction:
    return ConvolutionFunction(X, [int(b) for b in degenerate_edges(X)])


def convolve(X: TruncatedSimplicialSet, phi: ConvolutionFunction, psi: ConvolutionFunction) -> ConvolutionFunction:
    """``(phi * psi)(f) = sum phi(d_2 sigma) psi(d_0 sigma)`` over ``d_1 sigma = f``."""
    d0 = X.faces[2][0].tolist()
    d1 = X.faces[2][1].tolist()
    d2 = X.faces[2][2].tolist()
    out = [Fraction(0)] * len(X.levels[1])
    pv, qv = phi.values, psi.values
    for s in range(len(d1)):
        out[d1[s]] += pv[d2[s]] * qv[d0[s]]
    return ConvolutionFunction(X, out)


@dataclass(frozen=True)
class AtLeast:
    """Length that reached the truncation and so is only bounded below."""

    bound: int

    def __str__(self):
        return f">={self.bound}"


def lengths(X: TruncatedSimplicialSet) -> list:
    """Length of every 1-simplex; ``AtLeast(N)`` when a nondegenerate ``N``-simplex reaches it."""
    key = ("lengths",)
    if key not in X.cache:
        best = np.zeros(len(X.levels[1]), dtype=np.int64)
        for k in range(1, X.N + 1):
            edges = X.long_edge(k)[X.nondegenerate(k)]
            best[edges] = np.maximum(best[edges], k)
        X.cache[key] = [AtLeast(X.N) if b == X.N else int(b) for b in best.tolist()]
    return X.cache[key]


def length(X: TruncatedSimplicialSet, f):
    """Largest ``k`` with a nondegenerate ``k``-simplex whose long edge is ``f``."""
    return lengths(X)[_resolve(X, f)]


def nondegenerate_counts(X: TruncatedSimplicialSet, k: int) -> np.ndarray:
    """``Phi_k``: number of nondegenerate ``k``-simplices over each long edge."""
    if k == 0:
        return degenerate_edges(X).astype(np.int64)
    edges = X.long_edge(k)[X.nondegenerate(k)]
    return np.bincount(edges, minlength=len(X.levels[1])).astype(np.int64)


@dataclass
class MobiusResult:
    """Möbius values on 1-simplices of certified length ``<= up_to_length``; ``None`` elsewhere."""

    space: TruncatedSimplicialSet
    up_to_length: int
    values: list

    def defined(self) -> list[int]:
        return [j for j, v in enumerate(self.values) if v is not None]

    def __call__(self, f):
        v = self.values[_resolve(self.space, f)]
        if v is None:
            raise TruncationError(f"Möbius value of {f!r} is not certified at this truncation")
        return v

    def to_json(self) -> dict:
        enc = self.space.encodings(1)
        return {
            "up_to_length": self.up_to_length,
            "values": {enc[j]: format_fraction(v) for j, v in enumerate(self.values) if v is not None},
        }


def mobius(X: TruncatedSimplicialSet, up_to_length: int | None = None) -> MobiusResult:
    """Convolution inverse of zeta, by recursion on length.

    ``mu(f) = eps(f) - sum mu(d_2 sigma)`` over 2-simplices with long edge
    ``f`` and nondegenerate ``d_0 sigma``.
    """
    if up_to_length is None:
        up_to_length = X.N - 1
    if up_to_length > X.N - 1:
        raise TruncationError(f"lengths up to {up_to_length} need truncation >= {up_to_length + 1}, have {X.N}")
    ln = lengths(X)
    eps = degenerate_edges(X)
    values: list = [None] * len(X.levels[1])
    todo = sorted((l, j) for j, l in enumerate(ln) if isinstance(l, int) and l <= up_to_length)
    for l, j in todo:
        total = Fraction(int(eps[j]))
        for a, b in splittings_of(X, j):
            if eps[b]:
                continue
            if values[a] is None:
                raise TruncationError(f"recursion for {X.encodings(1)[j]} reaches an uncertified element")
            total -= values[a]
        values[j] = total
    return MobiusResult(X, up_to_length, values)


def mobius_alternating(X: TruncatedSimplicialSet, up_to_length: int | None = None) -> MobiusResult:
    """``mu(f) = sum_k (-1)^k Phi_k(f)``, on elements of certified length."""
    if up_to_length is None:
        up_to_length = X.N - 1
    if up_to_length > X.N - 1:
        raise TruncationError(f"lengths up to {up_to_length} need truncation >= {up_to_length + 1}, have {X.N}")
    ln = lengths(X)
    total = np.zeros(len(X.levels[1]), dtype=np.int64)
    for k in range(X.N + 1):
        total += (-1) ** k * nondegenerate_counts(X, k)
    values = [Fraction(int(t)) if isinstance(l, int) and l <= up_to_length else None for t, l in zip(total.tolist(), ln)]
    return MobiusResult(X, up_to_length, values)


def check_mobius(X: TruncatedSimplicialSet, up_to_length: int | None = None) -> CheckReport:
    """Recursion against alternating sum, and ``zeta * mu = eps = mu * zeta`` where defined."""
    mu = mobius(X, up_to_length)
    alt = mobius_alternating(X, up_to_length)
    enc = X.encodings(1)
    witnesses = []
    for j in mu.defined():
        if mu.values[j] != alt.values[j]:
            witnesses.append({"kind": "alternating-sum", "element": enc[j], "values": [str(mu.values[j]), str(alt.values[j])]})
    eps = degenerate_edges(X)
    for j in mu.defined():
        left = sum((mu.values[a] for a, b in splittings_of(X, j)), Fraction(0))
        right = sum((mu.values[b] for a, b in splittings_of(X, j)), Fraction(0))
        if left != eps[j] or right != eps[j]:
            witnesses.append({"kind": "inverse", "element": enc[j], "mu*zeta": str(left), "zeta*mu": str(right)})
    return CheckReport("mobius", not witnesses, witnesses[:20], {"defined": len(mu.defined())})


def mobius_of_length(n: int) -> Fraction:
    """The naturals' Möbius function: 1, -1, 0, 0, ..."""
    return Fraction({0: 1, 1: -1}.get(n, 0))

