from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest

from blochlcu.kmesh import (
    InvalidKVectorError,
    Mesh,
    ceil_log2,
    complement_g,
    count_self_inverse_q,
    gflag,
    gvector,
    modadd,
    modneg,
    modsub,
)
from reference_data import INCONSISTENT_MOMENTUM_ROWS, MOMENTUM_ROWS


def test_ceil_log2_values():
    assert [ceil_log2(x) for x in (0, 1, 2, 3, 4, 5, 1024, 1025)] == [0, 0, 1, 2, 2, 3, 10, 11]
    assert ceil_log2(Fraction(9, 2)) == 3
    assert ceil_log2(Fraction(1, 2)) == 0
    assert ceil_log2(4.0) == 2
    assert ceil_log2(4.000001) == 3


def test_mesh_basics():
    m = Mesh.parse("2,3,4")
    assert m.nk == 24
    assert m.nk_bits == 1 + 2 + 2
    assert m.n_even == 2
    assert str(m) == "2,3,4"
    for i in range(m.nk):
        assert m.index(m.kvec(i)) == i
    with pytest.raises(ValueError):
        Mesh((0, 1, 1))


def test_validate_rejects_out_of_range():
    m = Mesh((1, 1, 4))
    with pytest.raises(InvalidKVectorError):
        m.validate((0, 0, 4))
    with pytest.raises(InvalidKVectorError):
        modsub(m, (0, 0, -1), (0, 0, 0))


def test_modular_ops():
    m = Mesh((3, 4, 5))
    a, b = (2, 3, 4), (1, 3, 2)
    assert modsub(m, a, b) == (1, 0, 2)
    assert modneg(m, (1, 0, 2)) == (2, 0, 3)
    assert modadd(m, modsub(m, a, b), b) == a


def test_sub_table_matches_modsub():
    m = Mesh((2, 3, 2))
    for i, j in itertools.product(range(m.nk), repeat=2):
        assert m.kvec(m.sub_table[i, j]) == modsub(m, m.kvec(i), m.kvec(j))


@pytest.mark.parametrize("row", range(len(MOMENTUM_ROWS)))
def test_momentum_table(row):
    dims, kp, kq, diff, q, g, rdiff, negq, notg = MOMENTUM_ROWS[row]
    m = Mesh(dims)
    Q, G = gvector(m, kp, kq)
    assert tuple(a - b for a, b in zip(kp, kq)) == diff
    assert Q == q and G == g
    nq, ng = complement_g(m, Q, G)
    assert tuple(a - b for a, b in zip(kq, kp)) == rdiff
    assert ng == notg
    if row in INCONSISTENT_MOMENTUM_ROWS:
        assert nq != negq
        assert tuple(a + b for a, b in zip(nq, ng)) == rdiff
    else:
        assert nq == negq


@pytest.mark.parametrize("dims", [(1, 1, 4), (1, 4, 4), (4, 4, 4), (3, 2, 5)])
def test_complement_identity_exhaustive(dims):
    m = Mesh(dims)
    for i, j in itertools.product(range(m.nk), repeat=2):
        kp, kq = m.kvec(i), m.kvec(j)
        Q, G = gvector(m, kp, kq)
        nq, ng = complement_g(m, Q, G)
        assert tuple(a - b for a, b in zip(kq, kp)) == tuple(a + b for a, b in zip(nq, ng))
        assert all(c in (0, -d) for c, d in zip(ng, dims))
        assert m.complement_flag(m.index(Q), gflag(G)) == gflag(ng)


def test_gflag_table_consistent():
    m = Mesh((2, 3, 4))
    for q in range(m.nk):
        for k in range(m.nk):
            kq = m.sub_table[k, q]
            _, g = gvector(m, m.kvec(k), m.kvec(kq))
            assert m.gflag_table[q, k] == gflag(g)


@pytest.mark.parametrize("dims,expected", [((3, 3, 3), 1), ((2, 3, 3), 2), ((2, 2, 3), 4), ((2, 4, 6), 8)])
def test_self_inverse_count(dims, expected):
    m = Mesh(dims)
    brute = int(np.sum(m.neg_table == np.arange(m.nk)))
    assert brute == expected == count_self_inverse_q(m)
