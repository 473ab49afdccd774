"""The four LCU data representations of a k-point Hamiltonian."""

from __future__ import annotations

from .cholesky import CholeskyFactors, NotPSDError, cholesky_sf, pivoted_cholesky, reconstruct_sf
from .common import effective_one_body, reconstruct
from .double import DFBlock, DFFactors, double_factorize, givens_decomposition, reconstruct_df
from .sparse import SparseEntries, reconstruct_sparse, sparsify
from .thc import (
    SymmetryViolationError,
    THCFactors,
    hamiltonian_from_thc,
    ingest_thc,
    normalization_sums,
    read_thc,
    reconstruct_thc,
    symmetrize_zeta,
    synthesize_thc,
    write_thc,
    zeta_violation,
)

__all__ = [
    "CholeskyFactors",
    "DFBlock",
    "DFFactors",
    "NotPSDError",
    "SparseEntries",
    "SymmetryViolationError",
    "THCFactors",
    "cholesky_sf",
    "double_factorize",
    "effective_one_body",
    "givens_decomposition",
    "hamiltonian_from_thc",
    "ingest_thc",
    "normalization_sums",
    "pivoted_cholesky",
    "read_thc",
    "reconstruct",
    "reconstruct_df",
    "reconstruct_sf",
    "reconstruct_sparse",
    "reconstruct_thc",
    "sparsify",
    "symmetrize_zeta",
    "synthesize_thc",
    "write_thc",
    "zeta_violation",
]
