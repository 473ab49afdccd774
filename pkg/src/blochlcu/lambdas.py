"""L1 norms of the LCU weights for each representation.

All sums use compensated summation (``math.fsum``) over C-ordered arrays, so
reports are reproducible independent of BLAS or platform.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .factorize import CholeskyFactors, DFFactors, SparseEntries, THCFactors, effective_one_body
from .hamiltonian import KHamiltonian


@dataclass(frozen=True)
class LambdaReport:
    """One- and two-body L1 norms (Hartree)."""

    lcu: str
    lambda_one: float
    lambda_two: float
    nk: int

    @property
    def lambda_total(self) -> float:
        return self.lambda_one + self.lambda_two

    @property
    def lambda_per_cell(self) -> float:
        return self.lambda_total / self.nk

    def as_dict(self) -> dict:
        out = asdict(self)
        out.pop("nk")
        out["lambda_total"] = self.lambda_total
        out["lambda_per_cell"] = self.lambda_per_cell
        return out


def _l1_reim(a) -> float:
    a = np.asarray(a, dtype=np.complex128).ravel()
    return math.fsum(np.concatenate([np.abs(a.real), np.abs(a.imag)]))


def _sum(a) -> float:
    return math.fsum(np.asarray(a, dtype=float).ravel())


def lambda_one_body(H: KHamiltonian) -> float:
    """``sum_k sum_pq |Re h'| + |Im h'|``."""
    return _l1_reim(effective_one_body(H))


def lambda_sparse(H: KHamiltonian) -> LambdaReport:
    return LambdaReport("sparse", lambda_one_body(H), _l1_reim(H.V), H.nk)


def lambda_sparse_entries(E: SparseEntries) -> LambdaReport:
    """Same norm computed from the deduplicated entry list."""
    two = math.fsum(
        float(m) * (abs(v.real) + abs(v.imag)) for m, v in zip(E.multiplicity, E.two_body_value)
    )
    k, p, q = E.one_body_index.T if E.n_one_body else (np.zeros(0),) * 3
    w = np.where(p == q, 1.0, 2.0)
    one = math.fsum(w * (np.abs(E.one_body_value.real) + np.abs(E.one_body_value.imag)))
    return LambdaReport("sparse", one, two, E.mesh.nk)


def sf_weights(C: CholeskyFactors) -> np.ndarray:
    """``S[Q, n] = sum_{k,pq} |Re L| + |Im L|``."""
    nk, M = C.L.shape[:2]
    flat = C.L.reshape(nk, M, -1)
    return np.array([[_l1_reim(flat[q, n]) for n in range(M)] for q in range(nk)]).reshape(nk, M)


def lambda_sf(H: KHamiltonian, C: CholeskyFactors) -> LambdaReport:
    S = sf_weights(C)
    return LambdaReport("sf", lambda_one_body(H), 0.5 * _sum(S**2), H.nk)


def df_weights(D: DFFactors) -> np.ndarray:
    """``S[Q, n, A|B] = sum_k sum |f|``."""
    out = np.zeros((D.mesh.nk, D.M, 2))
    for b in D.blocks:
        out[b.Q, b.aux, "AB".index(b.kind)] += math.fsum(np.abs(b.f))
    return out


def effective_one_body_eigenvalues(H: KHamiltonian) -> np.ndarray:
    """Ascending eigenvalues of ``h'(k)`` for every k."""
    return np.linalg.eigvalsh(effective_one_body(H))


def lambda_df(H: KHamiltonian, D: DFFactors) -> LambdaReport:
    S = df_weights(D)
    one = _sum(np.abs(effective_one_body_eigenvalues(H)))
    return LambdaReport("df", one, 0.25 * _sum(S**2), H.nk)


def lambda_thc(H: KHamiltonian, T: THCFactors) -> LambdaReport:
    """One-body part from the bare ``h`` eigenvalues; two-body from ``zeta``."""
    one = 2.0 * _sum(np.abs(np.linalg.eigvalsh(H.h)))
    S = T.norm_sums
    z = np.abs(T.zeta.real) + np.abs(T.zeta.imag)
    terms = z * S[:, :, None, :, None] * S[:, None, :, None, :]
    return LambdaReport("thc", one, 2.0 * _sum(terms), H.nk)
