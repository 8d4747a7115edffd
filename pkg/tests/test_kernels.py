import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from freedecomp import kernels

BACKENDS = kernels.backends()


def arr(xs):
    return np.asarray(xs, dtype=np.int64)


def test_compiled_backend_is_built():
    # the editable install compiles the extension; the fallback is still importable
    assert "python" in BACKENDS
    assert kernels.BACKEND in BACKENDS


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_compose_and_mismatch(name):
    k = BACKENDS[name]
    assert k.compose(arr([5, 6, 7]), arr([2, 0, 0, 1])).tolist() == [7, 5, 5, 6]
    assert k.first_mismatch(arr([1, 2, 3]), arr([1, 2, 3])) == -1
    assert k.first_mismatch(arr([1, 2, 3]), arr([1, 0, 3])) == 1


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_pullback_codes(name):
    k = BACKENDS[name]
    # P = B x C over a point: 2 x 2
    f, g = arr([0, 0, 1, 1]), arr([0, 1, 0, 1])
    zero2 = arr([0, 0])
    assert k.pullback_check(f, g, zero2, zero2, 2, 2, 1)[0] == 0
    # missing pair (1, 1)
    assert tuple(k.pullback_check(f[:3], g[:3], zero2, zero2, 2, 2, 1)) == (3, 1, 1)
    # doubly hit
    assert tuple(k.pullback_check(arr([0, 0, 1, 1, 0]), arr([0, 1, 0, 1, 1]), zero2, zero2, 2, 2, 1)) == (2, 1, 4)
    # non-commuting
    assert k.pullback_check(arr([0]), arr([0]), arr([0, 1]), arr([1]), 2, 1, 2)[0] == 1


@st.composite
def squares(draw):
    n_b = draw(st.integers(1, 5))
    n_c = draw(st.integers(1, 5))
    n_d = draw(st.integers(1, 3))
    h = draw(st.lists(st.integers(0, n_d - 1), min_size=n_b, max_size=n_b))
    k = draw(st.lists(st.integers(0, n_d - 1), min_size=n_c, max_size=n_c))
    pairs = [(b, c) for b in range(n_b) for c in range(n_c) if h[b] == k[c]]
    chosen = draw(st.lists(st.sampled_from(pairs), max_size=len(pairs) + 2)) if pairs else []
    f = [b for b, _ in chosen]
    g = [c for _, c in chosen]
    return arr(f), arr(g), arr(h), arr(k), n_b, n_c, n_d


@given(squares())
def test_pullback_backends_agree(sq):
    results = {name: tuple(int(x) for x in k.pullback_check(*sq)) for name, k in BACKENDS.items()}
    assert len(set(results.values())) == 1
    f, g, h, k_, n_b, n_c, n_d = sq
    pairs = list(zip(f.tolist(), g.tolist()))
    fiber = {(b, c) for b in range(n_b) for c in range(n_c) if h[b] == k_[c]}
    expected = len(set(pairs)) == len(pairs) and set(pairs) == fiber
    assert (results["python"][0] == 0) == expected


@given(st.lists(st.integers(0, 6), max_size=30), st.data())
def test_compose_and_offsets_agree(table, data):
    t = arr(table)
    outer = arr(data.draw(st.lists(st.integers(0, 100), min_size=7, max_size=7)))
    outs = {name: k.compose(outer, t).tolist() for name, k in BACKENDS.items()}
    assert all(v == [outer[i] for i in table] for v in outs.values())
    offs = {name: [a.tolist() for a in k.fiber_offsets(t, 7)] for name, k in BACKENDS.items()}
    assert len({repr(v) for v in offs.values()}) == 1
    starts, members = offs["python"]
    for y in range(7):
        assert sorted(members[starts[y] : starts[y + 1]]) == [x for x, v in enumerate(table) if v == y]


def test_benchmark_script_runs(capsys):
    import runpy
    from pathlib import Path

    script = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    mod = runpy.run_path(str(script))
    mod["main"](["--repeat", "1", "--size", "500"])
    out = capsys.readouterr().out
    assert "compose" in out and "python" in out
