"""Fock-space building blocks for the dense oracle.

Mode ``j`` is qubit ``j`` of a Jordan-Wigner register and bit
``n_modes - 1 - j`` of a basis label (qubit 0 is the most significant, as in
``np.kron`` ordering). For spatial orbital ``i`` (composite ``k*n + p``) and
spin ``σ`` the mode is ``2*i + σ``: k-point most significant, orbitals of one
k-point contiguous, spin least significant.

The ladder-string kernel has a compiled implementation and a numpy one. The
compiled one is used when importable unless ``BLOCHLCU_PURE_PYTHON`` is set.
"""

from __future__ import annotations

import os

import numpy as np
import scipy.sparse as sp

from . import _fock_py

BACKEND = "python"
ladder_terms_coo = _fock_py.ladder_terms_coo
if not os.environ.get("BLOCHLCU_PURE_PYTHON"):
    try:
        from ._fock import ladder_terms_coo  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        pass

MAX_MODES = 12


def mode(orbital: int, spin: int) -> int:
    return 2 * orbital + spin


def coo_to_dense(n_modes, rows, cols, vals) -> np.ndarray:
    dim = 1 << n_modes
    return sp.coo_matrix((vals, (rows, cols)), shape=(dim, dim)).toarray()


def ladder_terms_dense(n_modes, ops, daggers, lengths, coefs) -> np.ndarray:
    if n_modes > MAX_MODES:
        raise ValueError(f"{n_modes} modes exceeds the dense cap of {MAX_MODES}")
    return coo_to_dense(n_modes, *ladder_terms_coo(n_modes, ops, daggers, lengths, coefs))


def one_body_terms(A: np.ndarray):
    """Ladder batch for ``sum_{ij,σ} A[i,j] a†_{iσ} a_{jσ}``."""
    m = A.shape[0]
    i, j, s = np.indices((m, m, 2)).reshape(3, -1)
    ops = np.stack([2 * i + s, 2 * j + s], axis=1)
    dag = np.tile(np.array([1, 0]), (len(i), 1))
    return ops, dag, np.full(len(i), 2), A[i, j]


def one_body_operator(A: np.ndarray) -> np.ndarray:
    m = A.shape[0]
    return ladder_terms_dense(2 * m, *one_body_terms(A))


def two_body_operator(V: np.ndarray) -> np.ndarray:
    """``1/2 sum V[P,Q,R,S] a†_{Pσ} a_{Qσ} a†_{Rτ} a_{Sτ}`` over all spins."""
    m = V.shape[0]
    P, Q, R, S, s, t = np.indices((m, m, m, m, 2, 2)).reshape(6, -1)
    coef = 0.5 * V[P, Q, R, S]
    keep = coef != 0
    ops = np.stack([2 * P + s, 2 * Q + s, 2 * R + t, 2 * S + t], axis=1)[keep]
    dag = np.tile(np.array([1, 0, 1, 0]), (int(keep.sum()), 1))
    return ladder_terms_dense(2 * m, ops, dag, np.full(len(ops), 4), coef[keep])


# ---------------------------------------------------------------------------
# Majorana operators: γ_{2j} = Z...Z X_j, γ_{2j+1} = Z...Z Y_j


def canonical_majorana(seq) -> tuple[int, tuple[int, ...]]:
    """Reduce a product of Majoranas to ``sign * γ_{i1} γ_{i2} ...`` sorted."""
    seq = list(seq)
    sign = 1
    # bubble sort with anticommutation signs, then cancel squares
    for a in range(len(seq)):
        for b in range(len(seq) - 1 - a):
            if seq[b] > seq[b + 1]:
                seq[b], seq[b + 1] = seq[b + 1], seq[b]
                sign = -sign
    out: list[int] = []
    for x in seq:
        if out and out[-1] == x:
            out.pop()
        else:
            out.append(x)
    return sign, tuple(out)


class MajoranaBasis:
    """Monomial (permutation, phase) forms of all Majoranas on ``n_modes``."""

    def __init__(self, n_modes: int):
        if n_modes > MAX_MODES:
            raise ValueError(f"{n_modes} modes exceeds the dense cap of {MAX_MODES}")
        self.n_modes = n_modes
        self.dim = 1 << n_modes
        b = np.arange(self.dim, dtype=np.int64)
        pc = _fock_py.popcount_table(n_modes)
        self._perm = []
        self._phase = []
        for j in range(n_modes):
            pos = n_modes - 1 - j
            zsign = 1 - 2 * (pc[b >> (pos + 1)] & 1)
            bit = (b >> pos) & 1
            perm = b ^ (1 << pos)
            self._perm += [perm, perm]
            self._phase += [zsign.astype(np.complex128), zsign * np.where(bit == 0, 1j, -1j)]
        self._cache: dict[tuple[int, ...], tuple[np.ndarray, np.ndarray]] = {}

    def monomial(self, idx: tuple[int, ...]):
        """``(perm, phase)`` with ``Γ|b> = phase[b] |perm[b]>``."""
        hit = self._cache.get(idx)
        if hit is not None:
            return hit
        if not idx:
            res = (np.arange(self.dim), np.ones(self.dim, dtype=np.complex128))
        else:
            perm, phase = self.monomial(idx[1:])
            p1, ph1 = self._perm[idx[0]], self._phase[idx[0]]
            res = (p1[perm], phase * ph1[perm])
        self._cache[idx] = res
        return res

    def dense(self, idx: tuple[int, ...], coef: complex = 1.0) -> np.ndarray:
        perm, phase = self.monomial(idx)
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        out[perm, np.arange(self.dim)] = coef * phase
        return out

    def accumulate(self, terms) -> np.ndarray:
        """Dense ``sum coef * Γ(idx)`` for an iterable of ``(coef, idx)``."""
        rows, cols, vals = [], [], []
        cols_all = np.arange(self.dim)
        for coef, idx in terms:
            if coef == 0:
                continue
            perm, phase = self.monomial(idx)
            rows.append(perm)
            cols.append(cols_all)
            vals.append(coef * phase)
        if not rows:
            return np.zeros((self.dim, self.dim), dtype=np.complex128)
        return coo_to_dense(self.n_modes, np.concatenate(rows), np.concatenate(cols), np.concatenate(vals))
