"""Numpy implementation of the ladder-string kernel (fallback backend)."""

from __future__ import annotations

import numpy as np


def popcount_table(n_modes: int) -> np.ndarray:
    dim = 1 << n_modes
    pc = np.zeros(dim, dtype=np.int64)
    for bit in range(n_modes):
        pc += (np.arange(dim) >> bit) & 1
    return pc


def ladder_terms_coo(n_modes, ops, daggers, lengths, coefs):
    """Matrix elements of a batch of ladder-operator products.

    Term ``t`` is ``coefs[t] * c_0 c_1 ... c_{L-1}`` with ``c_i`` the
    creation (``daggers[t, i]``) or annihilation operator on mode
    ``ops[t, i]``, ``L = lengths[t]``. Mode ``j`` is bit ``n_modes-1-j`` of
    the basis label and carries a Jordan-Wigner string over modes ``< j``.

    Returns ``(rows, cols, vals)`` with duplicates not yet summed.
    """
    ops = np.asarray(ops, dtype=np.int64)
    daggers = np.asarray(daggers, dtype=np.int64)
    lengths = np.asarray(lengths, dtype=np.int64)
    coefs = np.asarray(coefs, dtype=np.complex128)
    dim = 1 << n_modes
    pc = popcount_table(n_modes)
    base = np.arange(dim, dtype=np.int64)
    rows, cols, vals = [], [], []
    for t in range(len(coefs)):
        if coefs[t] == 0:
            continue
        state = base.copy()
        sign = np.ones(dim, dtype=np.int64)
        alive = np.ones(dim, dtype=bool)
        for i in range(lengths[t] - 1, -1, -1):
            j = ops[t, i]
            pos = n_modes - 1 - j
            bit = (state >> pos) & 1
            alive &= bit == (0 if daggers[t, i] else 1)
            sign *= 1 - 2 * (pc[state >> (pos + 1)] & 1)
            state ^= 1 << pos
        rows.append(state[alive])
        cols.append(base[alive])
        vals.append(coefs[t] * sign[alive])
    if not rows:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy(), np.zeros(0, dtype=np.complex128)
    return np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)
