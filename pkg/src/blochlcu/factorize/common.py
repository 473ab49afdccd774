"""Helpers shared by the factorizations."""

from __future__ import annotations

import numpy as np

from ..hamiltonian import KHamiltonian


def effective_one_body(H: KHamiltonian) -> np.ndarray:
    """``h'[k] = h[k] + sum_{k2, r} V_{pk, qk, r k2, r k2}``.

    This is the one-body operator left over once the two-body part is
    written in traceless (Majorana-pair) form.
    """
    exch = np.einsum("kjpqrr->kpq", H.V[0])
    return H.h + exch


def reconstruct(factors) -> np.ndarray:
    """Dense ``V[Q,k,k2,p,q,r,s]`` from any factorization object."""
    from .cholesky import CholeskyFactors, reconstruct_sf
    from .double import DFFactors, reconstruct_df
    from .sparse import SparseEntries, reconstruct_sparse
    from .thc import THCFactors, reconstruct_thc

    if isinstance(factors, SparseEntries):
        return reconstruct_sparse(factors)[1]
    if isinstance(factors, CholeskyFactors):
        return reconstruct_sf(factors)
    if isinstance(factors, DFFactors):
        return reconstruct_df(factors)
    if isinstance(factors, THCFactors):
        return reconstruct_thc(factors)
    raise TypeError(f"not a factorization: {type(factors).__name__}")
