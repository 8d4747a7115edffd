import json
import os
import subprocess
import sys
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from freedecomp import kernels, registry, zoo
from freedecomp.free import PresheafMap, culf_projection, free, map_free
from freedecomp.simplex import monotone_maps
from freedecomp.simplicial import (
    CheckReport,
    NonCommutingSquare,
    SimplicialMap,
    Square,
    TruncatedSimplicialSet,
    TruncationError,
    b_nat,
    check_culf,
    check_decomposition,
    check_segal,
    check_simplicial_identities,
    compare_active_arrows_with_el_bn,
    compare_tw_bn_with_delta_inert,
    edgewise,
    elements_category,
    is_pullback,
    nerve_of_poset,
    point,
    terminal_map,
)


def test_bn_levels():
    assert b_nat(3, 3).levels[0] == ((),)
    assert b_nat(3, 3).sizes()[1] == 4
    assert b_nat(3, 2).sizes()[2] == 6
    B = b_nat(4, 6)
    assert B.sizes() == [comb(6 + k, k) for k in range(5)]


def test_bn_operators():
    B = b_nat(3, 5)
    x = B.index(3, (1, 2, 1))
    faces = [B.levels[2][B.faces[3][i][x]] for i in range(4)]
    assert faces == [(2, 1), (3, 1), (1, 3), (1, 2)]
    assert B.levels[4 - 1][B.degeneracies[2][1][B.index(2, (1, 2))]] == (1, 0, 2)


def test_identities_pass_and_mutation_caught():
    B = b_nat(4, 6)
    assert check_simplicial_identities(B).passed
    Y = B.copy()
    Y.faces[2][1][Y.index(2, (1, 1))] = Y.index(1, (1,))
    rep = check_simplicial_identities(Y)
    assert not rep.passed and rep.witnesses
    assert all("identity" in w for w in rep.witnesses)


def test_failing_report_needs_witness():
    with pytest.raises(ValueError):
        CheckReport("x", False)


def test_pullback_identity_square():
    ident = np.arange(3, dtype=np.int64)
    assert is_pullback(Square(ident, ident, ident, ident, 3, 3, 3)).passed


def _addition_square(P):
    pairs = [(a, b) for a in range(4) for b in range(4) if a + b <= 3]
    return Square.from_functions(
        P,
        pairs,
        pairs,
        range(4),
        lambda p: p[0],
        lambda p: p[1],
        lambda ab: ab[0] + ab[1],
        lambda ab: ab[0] + ab[1],
    )


def test_pullback_against_addition():
    pairs = [(a, b) for a in range(4) for b in range(4) if a + b <= 3]
    genuine = [(x, y) for x in pairs for y in pairs if sum(x) == sum(y)]
    assert is_pullback(_addition_square(genuine)).passed
    diagonal = [(x, x) for x in pairs]
    rep = is_pullback(_addition_square(diagonal))
    assert not rep.passed and rep.witnesses[0]["kind"] == "not-hit"


def test_pullback_merged_element():
    # two elements of P land on the same fiber-product pair
    sq = Square.from_functions(["p", "q"], ["b"], ["c"], ["d"], lambda p: "b", lambda p: "c", lambda b: "d", lambda c: "d")
    rep = is_pullback(sq)
    assert not rep.passed and rep.witnesses[0]["kind"] == "doubly-hit"
    assert rep.witnesses[0]["elements"] == ["p", "q"]


def test_pullback_non_commuting_raises():
    sq = Square.from_functions(["p"], ["b"], ["c"], ["d", "e"], lambda p: "b", lambda p: "c", lambda b: "d", lambda c: "e")
    with pytest.raises(NonCommutingSquare):
        is_pullback(sq)


@st.composite
def finite_squares(draw):
    n_d = draw(st.integers(1, 3))
    h = draw(st.lists(st.integers(0, n_d - 1), min_size=1, max_size=4))
    k = draw(st.lists(st.integers(0, n_d - 1), min_size=1, max_size=4))
    pairs = [(b, c) for b in range(len(h)) for c in range(len(k)) if h[b] == k[c]]
    chosen = draw(st.lists(st.sampled_from(pairs), max_size=6)) if pairs else []
    top = np.array([b for b, _ in chosen], dtype=np.int64)
    left = np.array([c for _, c in chosen], dtype=np.int64)
    return Square(top, left, np.array(h, dtype=np.int64), np.array(k, dtype=np.int64), len(h), len(k), n_d)


@given(finite_squares())
def test_pullback_symmetric(sq):
    assert is_pullback(sq).passed == is_pullback(sq.transpose()).passed


def test_decomposition_examples():
    assert check_decomposition(b_nat(4, 6)).passed
    X = free(zoo.words("ab", 2), 3)
    assert check_decomposition(X).passed
    Y = X.copy()
    j = Y.lookup(2, "1,1|a,b")
    Y.faces[2][0][j] = Y.lookup(1, "1|a")
    rep = check_decomposition(Y)
    assert not rep.passed and "square" in rep.witnesses[0]


def test_segal_examples():
    G = zoo.Quiver(("u", "v"), (("e", "u", "v"), ("f", "u", "v"), ("g", "v", "u")))
    assert check_segal(free(zoo.quiver_paths(G, 3), 3)).passed
    rep = check_segal(free(zoo.truncate_paths(zoo.words("ab", 3), 1), 3))
    assert not rep.passed and rep.witnesses[0]["kind"] == "not-hit"
    assert check_segal(b_nat(4, 5)).passed


def test_segal_of_poset_nerve():
    X = nerve_of_poset([1, 2, 3, 6], lambda a, b: b % a == 0, 3)
    assert check_segal(X).passed and check_decomposition(X).passed


def test_culf_examples():
    A = zoo.words("ab", 3)
    assert check_culf(culf_projection(A, 3)).passed
    B = zoo.words("a", 3)
    phi = PresheafMap.from_function(A, B, lambda w: ("a",) * len(w))
    assert check_culf(map_free(phi, 3)).passed
    rep = check_culf(terminal_map(b_nat(3, 3)))
    assert not rep.passed and rep.witnesses[0]["level"] == 2


def test_culf_full_agrees_with_reduction():
    A = zoo.noncrossing_partitions(3)
    phi = culf_projection(A, 3)
    assert check_culf(phi).passed and check_culf(phi, full=True).passed
    bad = terminal_map(b_nat(3, 3))
    assert not check_culf(bad, full=True).passed


def test_culf_composition_along_alphabet_chain():
    abc, ab, a = zoo.words("abc", 3), zoo.words("ab", 3), zoo.words("a", 3)
    f = PresheafMap.from_function(abc, ab, lambda w: tuple("a" if x == "c" else x for x in w))
    g = PresheafMap.from_function(ab, a, lambda w: ("a",) * len(w))
    F, G = map_free(f, 3), map_free(g, 3)
    assert check_culf(F).passed and check_culf(G).passed
    assert check_culf(F.then(G)).passed


def test_edgewise_levels():
    B = b_nat(5, 4)
    S = edgewise(B)
    assert S.N == 2
    assert S.levels[0] == B.levels[1]
    assert S.levels[1] == B.levels[3]
    assert check_simplicial_identities(S).passed
    with pytest.raises(TruncationError):
        edgewise(b_nat(0, 2))


def test_edgewise_hom_counts():
    S = edgewise(b_nat(3, 5))
    src = [S.levels[0][j][0] for j in S.faces[1][1].tolist()]
    tgt = [S.levels[0][j][0] for j in S.faces[1][0].tolist()]
    for m in range(6):
        for n in range(m, 6):
            assert sum(1 for s, t in zip(src, tgt) if (s, t) == (m, n)) == n - m + 1


def test_edgewise_matches_face_formula_up_to_reversal():
    # d_i d_{2k+1-i} gives the opposite orientation: its i-th face is our (k-i)-th
    B = b_nat(5, 4)
    S = edgewise(B)
    for k in (1, 2):
        for i in range(k + 1):
            formula = kernels.compose(B.faces[2 * k][i], B.faces[2 * k + 1][2 * k + 1 - i])
            assert np.array_equal(formula, S.faces[k][k - i])


@pytest.mark.parametrize("name", ["words", "nc"])
def test_edgewise_of_decomposition_space_is_segal(name):
    A = registry.get(name).presheaf(3)
    assert check_segal(edgewise(free(A, 5))).passed


def test_edgewise_bn_is_segal():
    assert check_segal(edgewise(b_nat(5, 5))).passed


def test_tw_bn_comparison():
    rep = compare_tw_bn_with_delta_inert(5, 4)
    assert rep.passed
    assert rep.details["homs"]["1->3"] == 3
    with pytest.raises(TruncationError):
        compare_tw_bn_with_delta_inert(3, 4)


def test_elements_category():
    P = elements_category(point(3))
    assert [o[0] for o in P.objects] == [0, 1, 2, 3]
    B = b_nat(2, 3)
    el = elements_category(B)
    assert sorted(x for k, x in el.objects if k == 2) == sorted(B.levels[2])
    out_of_empty = [f for f in el.arrows if f.source == (0, ())]
    assert len(out_of_empty) == sum((k + 1) * len(B.levels[k]) for k in range(3))
    assert len(out_of_empty) == sum(len(list(monotone_maps(0, k))) * len(B.levels[k]) for k in range(3))


def test_active_arrows_comparison():
    rep = compare_active_arrows_with_el_bn(2, 3)
    assert rep.passed and rep.details["objects"] > 0


def test_segal_implies_decomposition(presheaves):
    for name, A in presheaves.items():
        X = free(A, 3)
        if check_segal(X).passed:
            assert check_decomposition(X).passed, name


def test_json_round_trip():
    B = b_nat(3, 2)
    doc = B.to_json()
    assert doc["truncation"] == 3 and doc["levels"][1] == ["0", "1", "2"]
    C = TruncatedSimplicialSet.from_json(json.dumps(doc))
    assert C.to_json() == doc
    assert check_simplicial_identities(C).passed


def test_simplicial_map_identity():
    B = b_nat(3, 3)
    ident = SimplicialMap(B, B, [np.arange(len(lv)) for lv in B.levels])
    assert check_culf(ident).passed


def test_pure_backend_gives_same_reports():
    code = (
        "import json;from freedecomp import kernels, registry;"
        "from freedecomp.simplicial import check_decomposition;"
        "X,_=registry.get('truncated-paths').space(3);"
        "Y=X.copy();Y.faces[2][0][0]=1;"
        "print(json.dumps([kernels.BACKEND, check_decomposition(X).to_json(), check_decomposition(Y).to_json()]))"
    )
    outs = {}
    for pure in ("0", "1"):
        env = dict(os.environ, FREEDECOMP_PURE=pure)
        res = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
        backend, *reports = json.loads(res.stdout)
        outs[backend] = reports
    assert "python" in outs
    assert len({json.dumps(v) for v in outs.values()}) == 1
