"""Arithmetic in the simplex category.

Maps ``[m] -> [n]`` are stored as their value vectors.  Generator words
(cofaces ``d^i``, codegeneracies ``s^j``) are only constructors; equality is
always equality of value vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Any, Callable, Iterator, Sequence


class DimensionMismatch(ValueError):
    """Composable-endpoint violation."""


@dataclass(frozen=True)
class OrdinalMap:
    """Monotone map ``[source] -> [target]`` given by ``values[i]`` for ``i = 0..source``."""

    source: int
    target: int
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if self.source < 0 or self.target < 0:
            raise ValueError("ordinals are [n] with n >= 0")
        if len(vals) != self.source + 1:
            raise ValueError(f"need {self.source + 1} values, got {len(vals)}")
        if any(v < 0 or v > self.target for v in vals):
            raise ValueError(f"values {vals} leave [0, {self.target}]")
        if any(a > b for a, b in zip(vals, vals[1:])):
            raise ValueError(f"values {vals} are not weakly increasing")

    def __call__(self, i: int) -> int:
        return self.values[i]

    @property
    def is_active(self) -> bool:
        return self.values[0] == 0 and self.values[-1] == self.target

    @property
    def is_inert(self) -> bool:
        return all(b == a + 1 for a, b in zip(self.values, self.values[1:]))

    @property
    def is_injective(self) -> bool:
        return all(a < b for a, b in zip(self.values, self.values[1:]))

    @property
    def is_surjective(self) -> bool:
        return set(self.values) == set(range(self.target + 1))

    def to_json(self) -> dict:
        return {"source": self.source, "target": self.target, "values": list(self.values)}

    @classmethod
    def from_json(cls, doc: dict) -> "OrdinalMap":
        return cls(doc["source"], doc["target"], tuple(doc["values"]))

    def __repr__(self):
        return f"OrdinalMap([{self.source}]->[{self.target}], {self.values})"


def ordinal_map(values: Sequence[int], target: int) -> OrdinalMap:
    return OrdinalMap(len(values) - 1, target, tuple(values))


def identity(n: int) -> OrdinalMap:
    return OrdinalMap(n, n, tuple(range(n + 1)))


def coface(i: int, n: int) -> OrdinalMap:
    """``d^i : [n-1] -> [n]``, the injection skipping ``i``."""
    if not 0 <= i <= n or n < 1:
        raise ValueError(f"no coface d^{i} into [{n}]")
    return OrdinalMap(n - 1, n, tuple(j if j < i else j + 1 for j in range(n)))


def codegeneracy(j: int, n: int) -> OrdinalMap:
    """``s^j : [n+1] -> [n]``, the surjection hitting ``j`` twice."""
    if not 0 <= j <= n:
        raise ValueError(f"no codegeneracy s^{j} onto [{n}]")
    return OrdinalMap(n + 1, n, tuple(i if i <= j else i - 1 for i in range(n + 2)))


def d_bot(m: int) -> OrdinalMap:
    """Bottom outer coface ``[m] -> [m+1]``."""
    return coface(0, m + 1)


def d_top(m: int) -> OrdinalMap:
    """Top outer coface ``[m] -> [m+1]``."""
    return coface(m + 1, m + 1)


def compose(f: OrdinalMap, g: OrdinalMap) -> OrdinalMap:
    """``f`` followed by ``g``; requires ``f.target == g.source``."""
    if f.target != g.source:
        raise DimensionMismatch(f"cannot compose [{f.source}]->[{f.target}] with [{g.source}]->[{g.target}]")
    return OrdinalMap(f.source, g.target, tuple(g.values[v] for v in f.values))


def active(values: Sequence[int]) -> OrdinalMap:
    f = ordinal_map(values, values[-1])
    if not f.is_active:
        raise ValueError(f"{tuple(values)} is not active")
    return f


def inert(source: int, target: int, offset: int) -> OrdinalMap:
    """Inert ``[source] -> [target]`` with image starting at ``offset``."""
    return OrdinalMap(source, target, tuple(range(offset, offset + source + 1)))


def unique_active(n: int) -> OrdinalMap:
    """The unique active map ``[1] -> [n]`` (for ``n = 0`` it is ``s^0``)."""
    return OrdinalMap(1, n, (0, n))


def factorize(f: OrdinalMap) -> tuple[OrdinalMap, OrdinalMap]:
    """Active-inert factorization: ``compose(a, i) == f``."""
    lo, hi = f.values[0], f.values[-1]
    a = OrdinalMap(f.source, hi - lo, tuple(v - lo for v in f.values))
    i = inert(hi - lo, f.target, lo)
    return a, i


@dataclass(frozen=True)
class Composition:
    """A tuple of natural numbers; the codec image of an active map."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 0 for p in parts):
            raise ValueError(f"negative part in {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def to_json(self) -> list[int]:
        return list(self.parts)


def active_to_composition(alpha: OrdinalMap) -> Composition:
    if not alpha.is_active:
        raise ValueError(f"{alpha} is not active")
    v = alpha.values
    return Composition(tuple(v[i] - v[i - 1] for i in range(1, len(v))))


def composition_to_active(c: Composition | Sequence[int]) -> OrdinalMap:
    parts = c.parts if isinstance(c, Composition) else tuple(c)
    sums = [0]
    for p in parts:
        sums.append(sums[-1] + p)
    return OrdinalMap(len(parts), sums[-1], tuple(sums))


def rho(i: int, k: int) -> OrdinalMap:
    """Inert ``[1] -> [k]`` with image ``{i-1, i}``."""
    if not 1 <= i <= k:
        raise IndexError(f"rho_{i} needs 1 <= i <= {k}")
    return inert(1, k, i - 1)


def gamma(alpha: OrdinalMap, i: int) -> OrdinalMap:
    """Inert factor of ``alpha . rho_i``; its source is ``[n_i]``."""
    return factorize(compose(rho(i, alpha.source), alpha))[1]


def monotone_maps(m: int, n: int) -> Iterator[OrdinalMap]:
    """All maps ``[m] -> [n]`` in lexicographic order."""
    for vals in combinations_with_replacement(range(n + 1), m + 1):
        yield OrdinalMap(m, n, vals)


def active_maps(k: int, n: int) -> Iterator[OrdinalMap]:
    for f in monotone_maps(k, n):
        if f.is_active:
            yield f


def inert_homset(m: int, n: int) -> list[OrdinalMap]:
    if m > n:
        return []
    return [inert(m, n, a) for a in range(n - m + 1)]


@dataclass(frozen=True)
class GeneratingSquare:
    """Pushout of an active generator against an outer coface.

    ``active : [m] -> [n]`` and ``inert : [m] -> [m']`` with pushout ``[p]``;
    ``pushout_inert : [n] -> [p]`` and ``pushout_active : [m'] -> [p]``.
    """

    active: OrdinalMap
    inert: OrdinalMap
    pushout_inert: OrdinalMap
    pushout_active: OrdinalMap
    label: str

    @property
    def dimensions(self) -> tuple[int, int, int, int]:
        return (self.active.source, self.active.target, self.inert.target, self.pushout_active.target)

    def commutes(self) -> bool:
        return compose(self.active, self.pushout_inert) == compose(self.inert, self.pushout_active)


def _pushout(alpha: OrdinalMap, iota: OrdinalMap) -> tuple[OrdinalMap, OrdinalMap]:
    m, n = alpha.source, alpha.target
    a = iota.values[0]
    b = iota.target - m - a
    p = a + n + b
    leg_inert = inert(n, p, a)
    vals = []
    for i in range(iota.target + 1):
        if i < a:
            vals.append(i)
        elif i <= a + m:
            vals.append(alpha.values[i - a] + a)
        else:
            vals.append(i - m + n)
    return leg_inert, OrdinalMap(iota.target, p, tuple(vals))


def verify_pushout(sq: GeneratingSquare, max_dim: int) -> bool:
    """Brute-force universal property against all cocones into ``[t]``, ``t <= max_dim``."""
    if not sq.commutes():
        return False
    n, m1, p = sq.active.target, sq.inert.target, sq.pushout_active.target
    for t in range(max_dim + 1):
        # cocones (u, v) with active.u == inert.v, counted by matching restrictions
        by_u: dict[tuple, int] = {}
        for u in monotone_maps(n, t):
            key = compose(sq.active, u).values
            by_u[key] = by_u.get(key, 0) + 1
        cocones = 0
        for v in monotone_maps(m1, t):
            cocones += by_u.get(compose(sq.inert, v).values, 0)
        seen = set()
        for w in monotone_maps(p, t):
            pair = (compose(sq.pushout_inert, w).values, compose(sq.pushout_active, w).values)
            if pair in seen:
                return False
            seen.add(pair)
        if len(seen) != cocones:
            return False
    return True


@lru_cache(maxsize=None)
def generating_squares(N: int) -> tuple[GeneratingSquare, ...]:
    """All generating active-inert pushouts with apex ``[m]``, ``m <= N``.

    Active legs are inner cofaces and codegeneracies, inert legs ``d_bot``
    and ``d_top``.  Each square is checked to commute and to be a pushout
    against cocones of dimension at most ``N + 2``.
    """
    squares = []
    for m in range(N + 1):
        actives = [(f"d^{i}", coface(i, m + 1)) for i in range(1, m + 1)]
        actives += [(f"s^{j}", codegeneracy(j, m - 1)) for j in range(m)] if m >= 1 else []
        inerts = [("d_bot", d_bot(m)), ("d_top", d_top(m))]
        for aname, a in actives:
            for iname, i in inerts:
                leg_i, leg_a = _pushout(a, i)
                sq = GeneratingSquare(a, i, leg_i, leg_a, f"{aname}:[{m}]->[{a.target}] vs {iname}")
                if not verify_pushout(sq, N + 2):
                    raise AssertionError(f"square {sq.label} is not a pushout")
                squares.append(sq)
    return tuple(squares)


@dataclass(frozen=True)
class Arrow:
    source: Any
    target: Any
    label: Any


@dataclass
class FiniteCategory:
    """Objects, arrows and a composition rule, enumerated up to some bound."""

    objects: tuple
    arrows: tuple[Arrow, ...]
    compose_labels: Callable[[Arrow, Arrow], Any] | None = None

    def hom(self, a, b) -> list[Arrow]:
        return [f for f in self.arrows if f.source == a and f.target == b]

    def out_of(self, a) -> list[Arrow]:
        return [f for f in self.arrows if f.source == a]

    def into(self, b) -> list[Arrow]:
        return [f for f in self.arrows if f.target == b]


def active_arrow_category(k_max: int, n_max: int) -> FiniteCategory:
    """Active maps ``[k] -> [n]`` and the squares between them with inert bottom leg.

    An arrow ``alpha' -> alpha`` is labelled by ``(phi, iota)`` where
    ``phi : [k'] -> [k]`` is the top leg and ``iota : [n'] -> [n]`` the inert
    bottom leg, with ``iota . alpha' == alpha . phi``.  Every such square is
    obtained by factorizing ``alpha . phi``.
    """
    objects = tuple(a for k in range(k_max + 1) for n in range(n_max + 1) for a in active_maps(k, n))
    arrows = []
    for alpha in objects:
        for k1 in range(k_max + 1):
            for phi in monotone_maps(k1, alpha.source):
                a1, iota = factorize(compose(phi, alpha))
                arrows.append(Arrow(a1, alpha, (phi, iota)))

    def compose_labels(first: Arrow, second: Arrow):
        (phi1, iota1), (phi2, iota2) = first.label, second.label
        return compose(phi1, phi2), compose(iota1, iota2)

    return FiniteCategory(objects, tuple(arrows), compose_labels)
