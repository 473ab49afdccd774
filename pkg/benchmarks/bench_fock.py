"""Compare the compiled and numpy ladder-string kernels.

Usage: python3 benchmarks/bench_fock.py [--modes 10] [--terms 2000] [--repeat 5]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np
import scipy.sparse as sp

from blochlcu import _fock_py

try:
    from blochlcu import _fock
except ImportError:  # extension not built
    _fock = None


def random_batch(rng, n_modes, n_terms, length=4):
    ops = rng.integers(0, n_modes, (n_terms, length))
    dag = np.tile(np.array([1, 0] * (length // 2)), (n_terms, 1))
    lengths = np.full(n_terms, length)
    coef = rng.standard_normal(n_terms) + 1j * rng.standard_normal(n_terms)
    return ops, dag, lengths, coef


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--modes", type=int, default=10)
    p.add_argument("--terms", type=int, default=2000)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    batch = random_batch(np.random.default_rng(args.seed), args.modes, args.terms)
    kernels = {"python": _fock_py.ladder_terms_coo}
    if _fock is not None:
        kernels["compiled"] = _fock.ladder_terms_coo
    else:
        print("compiled kernel unavailable; timing the numpy fallback only")

    results = {}
    for name, fn in kernels.items():
        fn(args.modes, *batch)  # warm up
        t = min(timeit.repeat(lambda: fn(args.modes, *batch), number=1, repeat=args.repeat))
        results[name] = t
        print(f"{name:>9}: {t * 1e3:9.2f} ms  ({args.terms} terms, {args.modes} modes)")

    if len(results) == 2:
        a = _fock_py.ladder_terms_coo(args.modes, *batch)
        b = _fock.ladder_terms_coo(args.modes, *batch)
        dim = 1 << args.modes
        da = sp.coo_matrix((a[2], (a[0], a[1])), shape=(dim, dim)).toarray()
        db = sp.coo_matrix((b[2], (b[0], b[1])), shape=(dim, dim)).toarray()
        print(f"max |difference|: {np.abs(da - db).max():.2e}")
        print(f"speedup: {results['python'] / results['compiled']:.1f}x")


if __name__ == "__main__":
    main()
