"""Named examples: constructor, default budgets and element parser for each."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import combinat as cb
from . import zoo
from .free import FreeSimplex, InertPresheaf, culf_projection, free, terminal_presheaf
from .simplicial import SimplicialMap, TruncatedSimplicialSet, b_nat, nerve_of_poset

EMPTY = ("", "e", "()", "ε", "eps")


class UnknownExample(KeyError):
    pass


class ParseError(ValueError):
    pass


def parse_letters(text: str) -> tuple:
    text = text.strip()
    if text in EMPTY:
        return ()
    return tuple(x.strip() for x in text.split(",")) if "," in text else tuple(text)


def parse_numbers(text: str) -> tuple[int, ...]:
    text = text.strip().strip("()")
    if text in EMPTY:
        return ()
    try:
        return tuple(int(x) for x in (text.split(",") if "," in text else text))
    except ValueError:
        raise ParseError(f"cannot read {text!r} as a word of positive integers") from None


def parse_dyck(text: str) -> str:
    text = text.strip().upper()
    if text in ("", "E", "()", "Ε", "EPS"):
        return ""
    if not cb.is_dyck(text):
        raise ParseError(f"{text!r} is not a Dyck path")
    return text


@dataclass
class Example:
    name: str
    description: str
    build: Callable[..., InertPresheaf]
    bound: int
    truncation: int = 3
    parse: Callable[[str], Any] = parse_letters
    options: dict = field(default_factory=dict)
    fit: Callable[[Any], int] | None = None  # smallest budget containing an element

    def presheaf(self, bound: int | None = None, **opts) -> InertPresheaf:
        kw = dict(self.options)
        kw.update({k: v for k, v in opts.items() if v is not None and k in self.options})
        return self.build(self.bound if bound is None else bound, **kw)

    def space(self, N: int, bound: int | None = None, **opts) -> tuple[TruncatedSimplicialSet, SimplicialMap]:
        """Free space and its projection to the naturals' nerve."""
        A = self.presheaf(bound, **opts)
        return free(A, N), culf_projection(A, N)

    def budget_for(self, text: str) -> int | None:
        """Budget large enough to contain the element written ``text``, if known."""
        if self.fit is None:
            return None
        try:
            return max(self.bound, self.fit(self.parse(text)))
        except Exception:
            return None

    def simplex(self, X: TruncatedSimplicialSet, A: InertPresheaf, text: str) -> int:
        """Index in ``X_1`` of the element written ``text``."""
        try:
            return X.lookup(1, text)
        except KeyError:
            pass
        try:
            elem = self.parse(text)
        except ParseError:
            raise
        except Exception as exc:
            raise ParseError(f"cannot parse {text!r}: {exc}") from None
        for n, lv in enumerate(A.levels):
            if elem in set(lv):
                return X.index(1, FreeSimplex((n,), elem))
        raise ParseError(f"{text!r} is not an element of {self.name} within budget {A.budget}")


class NaturalsExample(Example):
    """The nerve of the naturals itself, with the identity as projection."""

    def space(self, N, bound=None, **opts):
        B = b_nat(N, self.bound if bound is None else bound)
        ident = [np.arange(len(lv), dtype=np.int64) for lv in B.levels]
        return B, SimplicialMap(B, B, ident)

    def simplex(self, X, A, text):
        try:
            return X.lookup(1, text.strip().strip("()").rstrip(","))
        except KeyError:
            raise ParseError(f"{text!r} is not a 1-simplex of the naturals' nerve within budget") from None


def _quiver(budget: int) -> InertPresheaf:
    G = zoo.Quiver(("x", "y"), (("f", "x", "y"), ("g", "y", "x"), ("h", "y", "y")))
    return zoo.quiver_paths(G, budget)


def _parse_quiver(text: str):
    text = text.strip()
    if text in ("x", "y"):
        return ("v", text)
    return ("p", tuple(x.strip() for x in text.split(",")) if "," in text else tuple(text))


def _truncated_paths(budget: int) -> InertPresheaf:
    G = zoo.Quiver(("x", "y"), (("f", "x", "y"), ("g", "y", "x"), ("h", "y", "y")))
    return zoo.truncate_paths(zoo.quiver_paths(G, budget), 1)


def _poset_J(budget: int) -> InertPresheaf:
    return zoo.nondeg_J(nerve_of_poset(range(budget + 1), lambda a, b: a <= b, budget, encode=lambda c: "<".join(map(str, c))))


REGISTRY: dict[str, Example] = {}


def register(ex: Example) -> Example:
    REGISTRY[ex.name] = ex
    return ex


register(NaturalsExample("bn", "nerve of the monoid of naturals (free space on the terminal presheaf)", terminal_presheaf, 6, 4, parse_numbers))
register(Example("terminal", "terminal presheaf, all levels singletons", terminal_presheaf, 4, 3, parse_letters))
register(Example("words", "words over an alphabet, faces delete the first or last letter", lambda b, alphabet="ab": zoo.words(alphabet, b), 4, 3, parse_letters, {"alphabet": "ab"}, len))
register(Example("nonempty-words", "words of length n+1 in degree n", lambda b, alphabet="ab": zoo.nonempty_words(alphabet, b + 1), 4, 3, parse_letters, {"alphabet": "ab"}))
register(Example("qsym", "words of positive integers by length, letter sum bounded", zoo.qsym, 5, 3, parse_numbers, fit=sum))
register(Example("packed", "packed words by length", zoo.packed_words, 4, 3, parse_numbers, fit=len))
register(Example("packed-symbols", "packed words by number of symbols", lambda b: zoo.packed_words_by_symbols(b, b + 1), 3, 3, parse_numbers))
register(Example("fqsym", "permutations, faces drop a letter and standardize", zoo.permutations_fqsym, 4, 3, parse_numbers, fit=len))
register(Example("parking-f", "parking functions by length", zoo.parking_f_basis, 4, 3, parse_numbers, fit=len))
register(Example("parking-g", "parking functions by breakpoints", zoo.parking_g_basis, 4, 3, parse_numbers))
register(Example("nc", "noncrossing partitions", zoo.noncrossing_partitions, 5, 3, cb.parse_partition, fit=cb.partition_size))
register(Example("dyck-height", "Dyck paths by height, faces clip a band", lambda b: zoo.dyck_by_height(b, 2 * b + 2), 4, 3, parse_dyck))
register(Example("dyck-baseline", "Dyck paths by number of irreducible factors", zoo.dyck_by_baseline, 4, 3, parse_dyck))
register(Example("layered", "monotone surjections (linear layered posets)", zoo.layered_linear, 5, 3, parse_numbers, fit=len))
register(Example("quiver", "paths in the quiver x->y, y->x, y->y", _quiver, 4, 3, _parse_quiver))
register(Example("truncated-paths", "quiver paths of length at most 1", _truncated_paths, 4, 3, _parse_quiver))
register(Example("poset-J", "nondegenerate simplices of the nerve of a chain", _poset_J, 3, 3, lambda t: tuple(int(x) for x in t.split("<"))))


def get(name: str) -> Example:
    try:
        return REGISTRY[name]
    except KeyError:
        raise UnknownExample(f"unknown example {name!r}; known: {', '.join(sorted(REGISTRY))}") from None


def presheaf_examples() -> list[str]:
    """Names of the examples given by an inert presheaf (all but ``bn``)."""
    return [n for n, ex in REGISTRY.items() if not isinstance(ex, NaturalsExample)]
