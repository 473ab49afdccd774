"""Second, independent transcription of the per-step Toffoli formulas.

Written from the step lists directly as grouped sums, with every lookup
block size found by exhaustive search over powers of two. It shares no code
with the package beyond the parameter container.
"""

from __future__ import annotations

import itertools
import math


def clog(x) -> int:
    """``ceil(log2 x)`` for positive rationals, exact for integers."""
    if x <= 1:
        return 0
    j = 0
    while (1 << j) < x:
        j += 1
    return j


def nu(d: int) -> int:
    j = 0
    while d % 2 == 0:
        d //= 2
        j += 1
    return j


def up(a, b) -> int:
    return -(-a // b)


def pow2_upto(x):
    return [1 << j for j in range(clog(max(x, 1)) + 1)]


def best(fn, *limits):
    return min(fn(*ks) for ks in itertools.product(*(pow2_upto(x) for x in limits)))


def lookup(L, m):
    return best(lambda k: up(L, k) + m * (k - 1), L)


def unlookup(L):
    return best(lambda k: up(L, k) + k, L)


def eqsup(d, br):
    return 3 * clog(d) - 3 * nu(d) + 2 * br - 9


def sparse_step(N, nk, n_k, d, al, br):
    n_N = clog(N // 2)
    m = al + 8 * n_N + 6 * n_k + 5
    return (
        lookup(d, m) + unlookup(d) + 6 * N * nk + 8 * n_N + 12 * n_k
        + 2 * al + 7 * clog(d) - 6 * nu(d) + 4 * br - 8
    )


def sf_step(N, nk, n_k, M, a1, a2, br):
    n_N = clog(N // 2)
    Lb = nk * N * N // 2
    n_L = clog(Lb)
    n_MN = clog(M * nk + 1)
    b_MN = a1 + n_MN + 2 * n_k + 2
    b_p = 2 * n_k + 4 * n_N + a2 + 3
    lM = clog(M)
    l_prep = (3 * n_MN + 2 * br - 9) + a1 + (n_k + lM + 1)
    pass_common = (
        2 * eqsup(Lb, br) + 2 * a2 + 2 * (n_k + 2 * n_N + 1) + 8 * n_k
        + 4 * (N * nk // 2 - 1) + 1 + N * nk
    )
    two = lambda rows, m: best(lambda k1, k2: up(rows, k1) * up(Lb, k2) + m * (k1 * k2 - 1), rows, Lb)  # noqa: E731
    two_e = lambda rows: best(lambda k1, k2: up(rows, k1) * up(Lb, k2) + k1 * k2, rows, Lb)  # noqa: E731
    first = pass_common + two(M * nk + 1, b_p) + two_e(M * nk + 1)
    second = pass_common + two(M * nk, b_p) + two_e(M * nk)
    return (
        l_prep + lookup(M * nk + 1, b_MN)
        + first + (n_L + a2 + 5)
        + 4 + second
        + l_prep + unlookup(M * nk + 1)
        + (n_MN + n_L + a1 + a2 + 4) + 2
    )


def df_step(N, nk, n_k, M, xi_count, xi_max, a1, a2, br, beth):
    L = 2 * nk * M
    LX = xi_count
    n_L, n_X = clog(L), clog(xi_max)
    A = LX + N * nk // 2
    n_LX = clog(A)
    b_p1 = n_L + a1
    b_o = n_k + n_X + n_LX + br + 1
    b_p2 = n_X + a2 + 2
    b_rot = 4 * N * beth + n_k
    pair = lambda w: best(lambda k: up(A, k) + up(LX, k) + w(k), A)  # noqa: E731
    outer = 2 * (3 * n_L - 3 * nu(L) + 2 * br - 9) + 2 * (a1 + n_L)
    inner_sup = 6 * (7 * n_X + 2 * br - 6) + 10 * (n_LX - 1) + 6 * (a2 + n_X)
    return (
        outer
        + lookup(L + 1, b_p1) + lookup(L + 1, b_o) + 2 * unlookup(L + 1)
        + inner_sup
        + pair(lambda k: 2 * b_p2 * (k - 1))
        + pair(lambda k: b_rot * (k - 1))
        + 2 * pair(lambda k: 2 * k)
        + 16 * N * (beth - 2) + 2 * N * nk + 2
        + (n_X + a2 + 2) + (n_L + n_X + a1 + a2 + 1) + 2
        + 4 * N * nk + 12 * n_k
    )


def thc_step(N, dims, n_k, v, M, al, br, beth):
    nx, ny, nz = dims
    nk = nx * ny * nz
    d = 32 * (nk + 2**v) * M * M + N * nk // 2
    lM = clog(M)
    m = 2 * (2 * lM + n_k + 8) + al
    W1, W0 = nk * (M + N // 2), nk * M
    arith = 0
    for a, b in ((nx, ny), (nx * ny, nz), (nk, nx), (nx * nk, ny), (nx * ny * nk, nz), (nk * nk, M)):
        arith += clog(a) * clog(b) + clog(a * b)
    return (
        3 * nk * N // 2
        + 2 * eqsup(d, br) + lookup(d, m) + unlookup(d)
        + 2 * al + (4 * lM + 2 * n_k + 14) + (4 * lM + 12) + 2 * n_k
        + 4 * (nx + ny + nz + 8 * n_k + 6 * br - 24) + 1
        + 8 * n_k + 4 * arith
        + 2 * lookup(nk * nk * M, n_k + al) + 2 * unlookup(nk * nk * M)
        + 4 * (al + n_k) + 12 * n_k + 4 * N * (nk - 1)
        + best(lambda k: 2 * up(W1, k) + 2 * up(W0, k) + 4 * N * beth * (k - 1), W1)
        + best(lambda k: 2 * up(W1, k) + 2 * up(W0, k) + 4 * k, W1)
        + 16 * N * (beth - 2)
        + 12 * nk + 4 * clog(W1) + 4 * clog(W0)
        + 4 * (nk - 1) + 2
        + clog(d) + 3 * al + 2 * n_k + 9
    )


def pea(lam, eps) -> int:
    return math.ceil(math.pi * lam / (2 * eps))
