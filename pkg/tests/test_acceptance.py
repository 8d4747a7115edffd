"""End-to-end acceptance checks, one group per criterion.

A summary line per criterion is printed at the end of the run.
"""

import random
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from freedecomp import combinat as cb
from freedecomp import registry, zoo
from freedecomp.free import (
    PresheafMap,
    check_presheaf_isomorphism,
    check_sheaf,
    culf_projection,
    free,
    map_free,
    roundtrip_presheaf,
    roundtrip_space,
    terminal_presheaf,
    validate_presheaf,
)
from freedecomp.incidence import (
    ConvolutionFunction,
    check_coassoc,
    check_mobius,
    comult,
    convolve,
    epsilon,
    lengths,
    mobius,
    mobius_alternating,
    mobius_of_length,
    zeta,
)
from freedecomp.simplicial import (
    b_nat,
    check_culf,
    check_decomposition,
    check_isomorphism,
    check_segal,
    check_simplicial_identities,
    compare_active_arrows_with_el_bn,
    compare_tw_bn_with_delta_inert,
    terminal_map,
)

NAMES = registry.presheaf_examples()


def space(name, N):
    return registry.get(name).space(N)


# 1


@pytest.mark.criterion(1)
def test_registry_is_large_enough():
    assert len(NAMES) >= 10


@pytest.mark.criterion(1)
@pytest.mark.parametrize("name", NAMES)
def test_free_spaces_are_decomposition_spaces(name):
    X, _ = space(name, 3)
    assert check_simplicial_identities(X).passed
    rep = check_decomposition(X)
    assert rep.passed, rep.witnesses[:3]


# 2


@pytest.mark.criterion(2)
def test_free_on_terminal_is_bn():
    X, B = free(terminal_presheaf(6), 4), b_nat(4, 6)
    assert X.sizes() == B.sizes() == [comb(6 + k, k) for k in range(5)]
    comps = [np.array([B.index(k, s.comp) for s in X.levels[k]]) for k in range(5)]
    assert check_isomorphism(X, B, comps).passed


# 3


@pytest.mark.criterion(3)
@pytest.mark.parametrize("name", NAMES)
def test_segal_and_sheaf_verdicts_agree(name):
    A = registry.get(name).presheaf()
    X = free(A, 3)
    assert check_segal(X).passed == check_sheaf(A).passed


@pytest.mark.criterion(3)
def test_quiver_paths_pass_both():
    A = registry.get("quiver").presheaf()
    assert check_sheaf(A).passed and check_segal(free(A, 3)).passed


@pytest.mark.criterion(3)
def test_truncated_paths_fail_both():
    A = registry.get("truncated-paths").presheaf()
    assert not check_sheaf(A).passed and not check_segal(free(A, 3)).passed


@pytest.mark.criterion(3)
def test_nonempty_words_fail_both():
    # expected to fail: gluing nonempty words along a shared letter is bijective,
    # so this space is the nerve of a category and passes both checks
    A = registry.get("nonempty-words").presheaf()
    assert not check_sheaf(A).passed and not check_segal(free(A, 3)).passed


# 4


@pytest.mark.criterion(4)
@pytest.mark.parametrize("name", NAMES)
def test_projection_is_culf(name):
    _, phi = space(name, 3)
    assert check_culf(phi).passed


@pytest.mark.criterion(4)
def test_terminal_map_of_bn_is_not_culf():
    rep = check_culf(terminal_map(b_nat(3, 4)))
    assert not rep.passed
    assert rep.witnesses[0]["level"] == 2


@pytest.mark.criterion(4)
def test_alphabet_map_is_culf():
    ab, a = zoo.words("ab", 4), zoo.words("a", 4)
    phi = PresheafMap.from_function(ab, a, lambda w: ("a",) * len(w))
    assert check_culf(map_free(phi, 3)).passed
    assert check_culf(map_free(phi, 3), full=True).passed


# 5

ROUNDTRIP_CASES = {
    "words": lambda: zoo.words("ab", 4),
    "qsym": lambda: zoo.qsym(5),
    "nc": lambda: zoo.noncrossing_partitions(5),
    "fqsym": lambda: zoo.permutations_fqsym(4),
}


@pytest.mark.criterion(5)
@pytest.mark.parametrize("name", sorted(ROUNDTRIP_CASES))
def test_round_trips(name):
    A = ROUNDTRIP_CASES[name]()
    assert roundtrip_presheaf(A, 3).passed
    X = free(A, 3)
    assert roundtrip_space(X, culf_projection(A, 3)).passed


# 6


@pytest.mark.criterion(6)
@pytest.mark.parametrize("name", NAMES)
def test_length_equals_projection_degree(name):
    X, phi = space(name, 5)
    degree = [sum(phi.target.levels[1][j]) for j in phi.components[1].tolist()]
    certified = [(j, n) for j, n in enumerate(lengths(X)) if isinstance(n, int)]
    assert certified
    assert all(n == degree[j] for j, n in certified)


# 7


@pytest.mark.criterion(7)
@pytest.mark.parametrize("name", NAMES)
def test_coalgebra_laws(name):
    X, _ = space(name, 4)
    short = [j for j, n in enumerate(lengths(X)) if isinstance(n, int) and n <= 3]
    rep = check_coassoc(X, short)
    assert rep.passed, rep.witnesses[:3]
    assert rep.details["checked"] == len(short)


# 8


@pytest.mark.criterion(8)
def test_mobius_of_bn():
    B = b_nat(7, 7)
    mu = mobius(B)
    assert [mu(n) for n in range(7)] == [1, -1, 0, 0, 0, 0, 0]
    z, e = zeta(B), epsilon(B)
    m = ConvolutionFunction(B, [v if v is not None else Fraction(0) for v in mu.values])
    for j in mu.defined():
        assert convolve(B, z, m).values[j] == e.values[j] == convolve(B, m, z).values[j]
    assert mobius_alternating(B).values == mu.values
    assert check_mobius(B).passed


@pytest.mark.criterion(8)
@pytest.mark.parametrize("name", NAMES)
def test_mobius_factors_through_length(name):
    X, _ = space(name, 5)
    mu = mobius(X)
    ln = lengths(X)
    assert all(mu.values[j] == mobius_of_length(ln[j]) for j in mu.defined())
    assert mobius_alternating(X).values == mu.values
    assert check_mobius(X).passed


# 9


@pytest.mark.criterion(9)
def test_twisted_arrows_of_bn():
    rep = compare_tw_bn_with_delta_inert(5, 6)
    assert rep.passed
    homs = rep.details["homs"]
    for m in range(7):
        for n in range(m, 7):
            assert homs[f"{m}->{n}"] == n - m + 1


@pytest.mark.criterion(9)
def test_active_arrows_against_elements():
    assert compare_active_arrows_with_el_bn(3, 6).passed


# 10


@pytest.mark.criterion(10)
def test_dyck_figure():
    p = "UDUUUUDUDDDUDD"
    assert cb.clip_bottom(p) == "UUUDUDDDUD"
    assert cb.clip_top(p) == "UDUUUDDUDD"


@pytest.mark.criterion(10)
def test_breakpoints_fixture():
    assert cb.breakpoints((1, 6, 2, 4, 3, 6, 1, 6, 6)) == [0, 5, 9]


@pytest.mark.criterion(10)
def test_noncrossing_fixture():
    A = zoo.noncrossing_partitions(4)
    assert ((1,), (2, 4), (3,)) in set(A.levels[4])
    assert not cb.is_noncrossing(((1, 3), (2, 4)))
    assert ((1, 3), (2, 4)) not in set(A.levels[4])


@pytest.mark.criterion(10)
def test_qsym_fixture():
    A = zoo.qsym(11)
    assert (2, 3, 1, 1, 4) in set(A.levels[5])
    assert len(comult(free(A, 2), "5|2,3,1,1,4")) == 6


# 11


@pytest.mark.criterion(11)
def test_J_of_bn_is_qsym():
    J, Q = zoo.nondeg_J(b_nat(5, 5)), zoo.qsym(5)
    comps = [np.array([Q.index(n, c) for c in J.levels[n]]) for n in range(6)]
    assert check_presheaf_isomorphism(J, Q, comps).passed
    X, Y = zoo.J(b_nat(5, 5), 3), free(Q, 3)
    assert X.sizes() == Y.sizes()


@pytest.mark.criterion(11)
def test_layered_is_qsym():
    L, Q = zoo.layered_linear(5), zoo.qsym(5)
    comps = [np.array([Q.index(n, zoo.layer_sizes(s)) for s in L.levels[n]]) for n in range(6)]
    assert check_presheaf_isomorphism(L, Q, comps).passed


# 12


def _perturb(rng):
    name = rng.choice(NAMES)
    X = free(registry.get(name).presheaf(), 3).copy()
    tables = [(X.faces[k][i], len(X.levels[k - 1]), f"d{i}@{k}") for k in range(1, 4) for i in range(k + 1)]
    tables += [(X.degeneracies[k][i], len(X.levels[k + 1]), f"s{i}@{k}") for k in range(3) for i in range(k + 1)]
    # only tables whose entries can actually change
    tables = [t for t in tables if t[1] > 1 and len(t[0])]
    table, size, label = rng.choice(tables)
    j = rng.randrange(len(table))
    table[j] = (int(table[j]) + rng.randint(1, size - 1)) % size
    return name, label, X


@pytest.mark.criterion(12)
@pytest.mark.parametrize("seed", range(20))
def test_single_perturbation_is_caught(seed):
    name, label, X = _perturb(random.Random(seed))
    caught = (
        not check_simplicial_identities(X).passed
        or not check_decomposition(X).passed
        or not validate_presheaf(X.presheaf).passed
    )
    assert caught, f"{name}: {label}"
