"""Time the compiled and pure-Python table kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--size 200000]

Prints one row per (workload, backend) with the best wall time in
milliseconds, and the speedup of the compiled module when it is built.
"""

import argparse
import timeit

import numpy as np

from freedecomp import kernels, registry
from freedecomp.free import free
from freedecomp.simplicial import b_nat, check_decomposition, check_segal


def addition_square(w):
    """The genuine fiber product of the addition map on pairs against itself."""
    pairs = [(a, b) for a in range(w + 1) for b in range(w + 1 - a)]
    sums = np.array([a + b for a, b in pairs], dtype=np.int64)
    left, right = [], []
    for i, x in enumerate(pairs):
        for j, y in enumerate(pairs):
            if sum(x) == sum(y):
                left.append(i)
                right.append(j)
    return np.array(left), np.array(right), sums, sums, len(pairs), len(pairs), w + 1


def kernel_workloads(size, rng):
    a = rng.integers(0, size, size=size, dtype=np.int64)
    b = rng.integers(0, size, size=size, dtype=np.int64)
    same = a.copy()
    sq = addition_square(60)
    return {
        "compose": lambda m: m.compose(a, b),
        "first_mismatch": lambda m: m.first_mismatch(a, same),
        "fiber_offsets": lambda m: m.fiber_offsets(a, size),
        "pullback_check": lambda m: m.pullback_check(*sq),
    }


def end_to_end():
    X = free(registry.get("parking-f").presheaf(), 4)
    B = b_nat(5, 12)
    return {
        "decomposition(parking-f, N=4)": lambda: check_decomposition(X),
        "segal(bn, N=5, W=12)": lambda: check_segal(B),
    }


def use(module):
    for name in ("compose", "first_mismatch", "pullback_check", "fiber_offsets"):
        setattr(kernels, name, getattr(module, name))


def best(fn, repeat):
    fn()  # warm caches
    return min(timeit.repeat(fn, number=1, repeat=repeat)) * 1e3


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--size", type=int, default=200_000)
    args = p.parse_args(argv)

    found = kernels.backends()
    if "cython" not in found:
        print("compiled kernels not built; timing the Python fallback only")
    rng = np.random.default_rng(0)
    rows = []
    for label, job in kernel_workloads(args.size, rng).items():
        times = {name: best(lambda: job(mod), args.repeat) for name, mod in found.items()}
        rows.append((label, times))
    checks = end_to_end()
    for label, job in checks.items():
        times = {}
        for name, mod in found.items():
            use(mod)
            times[name] = best(job, args.repeat)
        rows.append((label, times))
    use(found["cython"] if "cython" in found else found["python"])

    print(f"{'workload':34s} {'backend':8s} {'ms':>10s}")
    for label, times in rows:
        for name, t in times.items():
            print(f"{label:34s} {name:8s} {t:10.2f}")
        if "cython" in times:
            print(f"{'':34s} {'speedup':8s} {times['python'] / times['cython']:9.1f}x")


if __name__ == "__main__":
    main()
