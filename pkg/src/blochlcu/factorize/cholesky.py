"""Per-momentum-transfer pivoted Cholesky (single factorization).

For every Q the tensor is read as a Hermitian matrix over orbital pairs::

    M_Q[(k, p, q), (k2, s, r)] = V[Q, k, k2, p, q, r, s]

with row flat index ``(k * n + p) * n + q``. The factors satisfy
``M_Q = sum_n L[Q, n] L[Q, n]^†`` with ``L[Q, n]`` reshaped to ``(k, p, q)``,
i.e. ``V_{pk, q(k⊖Q), r(k2⊖Q), sk2} = sum_n L_{pkq,n} L*_{sk2r,n}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..hamiltonian import KHamiltonian, gram_to_v, v_to_gram
from ..kmesh import Mesh


class NotPSDError(ValueError):
    """A momentum block of V is not positive semidefinite within tolerance."""


@dataclass(eq=False)
class CholeskyFactors:
    """``L[Q, n, k, p, q]``; vectors beyond ``ranks[Q]`` are zero."""

    mesh: Mesh
    n_spatial: int
    L: np.ndarray
    ranks: np.ndarray
    tol: float

    @property
    def M(self) -> int:
        return int(self.L.shape[1])


def pivoted_cholesky(A: np.ndarray, tol: float) -> np.ndarray:
    """Columns ``l_i`` with ``max|A - sum l_i l_i^†| <= tol`` for Hermitian PSD ``A``.

    Pivots on the largest remaining diagonal (lowest index on ties) and stops
    once every remaining diagonal is below ``max(tol, floor)``, where the floor
    is a few ulps of the largest diagonal. For PSD input the residual is PSD,
    so its largest entry is bounded by its largest diagonal.

    Raises:
        NotPSDError: a residual diagonal falls below ``-max(tol, floor)`` or
            the final residual is not bounded by its diagonal.
    """
    A = np.asarray(A, dtype=np.complex128)
    dim = A.shape[0]
    if dim == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    diag = A.diagonal().real.copy()
    scale = float(np.max(np.abs(A), initial=0.0))
    stop = max(float(tol), 64 * np.finfo(float).eps * scale)
    vecs: list[np.ndarray] = []
    Lmat = np.zeros((dim, 0), dtype=np.complex128)
    while len(vecs) < dim:
        if diag.min() < -stop:
            raise NotPSDError(f"negative pivot {diag.min():.3e}")
        j = int(np.argmax(diag))
        if diag[j] <= stop:
            break
        col = A[:, j] - Lmat @ Lmat[j].conj()
        col = col / np.sqrt(diag[j])
        vecs.append(col)
        Lmat = np.stack(vecs, axis=1)
        diag = diag - np.abs(col) ** 2
        diag[j] = 0.0
    resid = A - Lmat @ Lmat.conj().T
    err = float(np.max(np.abs(resid), initial=0.0))
    slack = 16 * dim * np.finfo(float).eps * scale
    if err > stop + slack:
        raise NotPSDError(f"residual {err:.3e} exceeds tolerance {stop:.3e}")
    return Lmat


def cholesky_sf(H: KHamiltonian, tol: float = 1e-8) -> CholeskyFactors:
    """Pivoted Cholesky of every momentum block; ``M`` is the largest rank."""
    mesh, n, nk = H.mesh, H.n_spatial, H.nk
    mats = v_to_gram(mesh, n, H.V)
    per_q = []
    for q in range(nk):
        try:
            per_q.append(pivoted_cholesky(mats[q], tol))
        except NotPSDError as exc:
            raise NotPSDError(f"Q={mesh.kvec(q)}: {exc}") from exc
    ranks = np.array([v.shape[1] for v in per_q], dtype=np.int64)
    M = int(ranks.max(initial=0))
    L = np.zeros((nk, M, nk, n, n), dtype=np.complex128)
    for q, v in enumerate(per_q):
        L[q, : v.shape[1]] = v.T.reshape(v.shape[1], nk, n, n)
    return CholeskyFactors(mesh, n, L, ranks, float(tol))


def reconstruct_sf(C: CholeskyFactors) -> np.ndarray:
    nk, n = C.mesh.nk, C.n_spatial
    flat = C.L.reshape(nk, C.M, nk * n * n)
    mats = np.einsum("qna,qnb->qab", flat, flat.conj())
    return gram_to_v(C.mesh, n, mats)
