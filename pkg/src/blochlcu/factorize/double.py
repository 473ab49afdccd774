"""Second factorization of the single-factorization one-body operators.

For each ``(Q, n)`` the operators ``A = (ρ + ρ†)/2`` and ``B = i(ρ - ρ†)/2``
with ``ρ = sum_{k,pq,σ} L[Q,n,k,p,q] a†_{pkσ} a_{q(k⊖Q)σ}`` split into one
Hermitian block per k. For ``Q != 0`` a block acts on the ``2n`` orbitals
``(k, ·) ∪ (k⊖Q, ·)``; for ``Q = 0`` it acts on the ``n`` orbitals of ``k``.
Each block is diagonalised and eigenvalues with ``|f| <= eigtol`` dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..hamiltonian import gram_to_v
from ..kmesh import Mesh
from .cholesky import CholeskyFactors


@dataclass(eq=False)
class DFBlock:
    """Retained eigensystem of one ``(Q, n, k, A|B)`` block.

    ``orbitals`` are supercell orbital indices ``k*n + p`` of the block rows.
    """

    Q: int
    aux: int
    k: int
    kind: str
    orbitals: np.ndarray
    f: np.ndarray
    U: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.f)

    @property
    def dim(self) -> int:
        return len(self.orbitals)

    def matrix(self) -> np.ndarray:
        return (self.U * self.f) @ self.U.conj().T


@dataclass(eq=False)
class DFFactors:
    mesh: Mesh
    n_spatial: int
    M: int
    blocks: list[DFBlock]
    eigtol: float
    relative: bool = False
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {(b.Q, b.aux, b.k, b.kind): b for b in self.blocks}

    def block(self, Q: int, aux: int, k: int, kind: str) -> DFBlock:
        return self._index[(Q, aux, k, kind)]

    @property
    def total_rank(self) -> int:
        return sum(b.rank for b in self.blocks)

    @property
    def xi(self) -> float:
        """Average rank per ``(Q, n)``, with the k sum counted as part of the rank."""
        if self.M == 0:
            return 0.0
        return self.total_rank / (2 * self.mesh.nk * self.M)

    def one_body_matrix(self, Q: int, aux: int, kind: str) -> np.ndarray:
        """Supercell single-particle matrix of ``A`` or ``B`` for ``(Q, n)``."""
        m = self.mesh.nk * self.n_spatial
        out = np.zeros((m, m), dtype=np.complex128)
        for k in range(self.mesh.nk):
            b = self.block(Q, aux, k, kind)
            out[np.ix_(b.orbitals, b.orbitals)] += b.matrix()
        return out

    def lambda_weights(self, Q: int, aux: int, kind: str) -> float:
        return float(sum(np.abs(self.block(Q, aux, k, kind).f).sum() for k in range(self.mesh.nk)))


def block_matrices(L: np.ndarray, zero_q: bool) -> tuple[np.ndarray, np.ndarray]:
    """``(A, B)`` blocks built from one ``n x n`` slice ``L[Q, n, k]``."""
    if zero_q:
        return 0.5 * (L + L.conj().T), 0.5j * (L - L.conj().T)
    n = L.shape[0]
    A = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    B = np.zeros_like(A)
    A[:n, n:] = 0.5 * L
    A[n:, :n] = 0.5 * L.conj().T
    B[:n, n:] = 0.5j * L
    B[n:, :n] = -0.5j * L.conj().T
    return A, B


def _truncate(f: np.ndarray, U: np.ndarray, eigtol: float, relative: bool):
    cut = eigtol * (np.max(np.abs(f), initial=0.0) if relative else 1.0)
    keep = np.abs(f) > cut
    return f[keep], U[:, keep]


def double_factorize(C: CholeskyFactors, eigtol: float = 0.0, relative: bool = False) -> DFFactors:
    """Eigendecompose every ``(Q, n, k)`` block of ``A`` and ``B``.

    Args:
        C: single-factorization vectors.
        eigtol: eigenvalues with ``|f| <= eigtol`` are discarded (absolute),
            or ``|f| <= eigtol * max|f|`` of the block when ``relative``.
    """
    mesh, n, nk = C.mesh, C.n_spatial, C.mesh.nk
    blocks = []
    for q in range(nk):
        for aux in range(C.M):
            for k in range(nk):
                kmq = int(mesh.sub_table[k, q])
                if q == 0:
                    orbs = k * n + np.arange(n)
                else:
                    orbs = np.concatenate([k * n + np.arange(n), kmq * n + np.arange(n)])
                for kind, mat in zip("AB", block_matrices(C.L[q, aux, k], q == 0)):
                    f, U = np.linalg.eigh(mat)
                    f, U = _truncate(f, U, eigtol, relative)
                    blocks.append(DFBlock(q, aux, k, kind, orbs, f, U))
    return DFFactors(mesh, n, C.M, blocks, float(eigtol), relative)


def reconstruct_cholesky(D: DFFactors) -> np.ndarray:
    """``L[Q, n, k, p, q]`` recovered from the retained ``A - iB`` blocks."""
    n, nk = D.n_spatial, D.mesh.nk
    L = np.zeros((nk, D.M, nk, n, n), dtype=np.complex128)
    for q in range(nk):
        for aux in range(D.M):
            for k in range(nk):
                rho = D.block(q, aux, k, "A").matrix() - 1j * D.block(q, aux, k, "B").matrix()
                L[q, aux, k] = rho if q == 0 else rho[:n, n:]
    return L


def reconstruct_df(D: DFFactors) -> np.ndarray:
    nk, n = D.mesh.nk, D.n_spatial
    flat = reconstruct_cholesky(D).reshape(nk, D.M, nk * n * n)
    mats = np.einsum("qna,qnb->qab", flat, flat.conj())
    return gram_to_v(D.mesh, n, mats)


# ---------------------------------------------------------------------------
# Givens rotations


@dataclass(frozen=True)
class GivensRotation:
    """Rotation on rows ``(i, i+1)``: ``[[c, s e^{-iφ}], [-s e^{iφ}, c]]`` with ``c = cos θ``."""

    i: int
    theta: float
    phi: float

    def matrix(self) -> np.ndarray:
        c, s = np.cos(self.theta), np.sin(self.theta)
        e = np.exp(1j * self.phi)
        return np.array([[c, s / e], [-s * e, c]], dtype=np.complex128)


def givens_decomposition(U: np.ndarray) -> tuple[list[GivensRotation], np.ndarray]:
    """Reduce an isometry ``U`` (``dim x r``) to diagonal phases by Givens rotations.

    Column by column, entries below the diagonal are zeroed from the bottom
    up with nearest-neighbour rotations. Returns ``(rotations, phases)`` with
    ``U = G_1^† G_2^† ... G_m^† [diag(phases); 0]``. Every position is
    recorded, so the count is ``sum_c (dim - 1 - c)`` regardless of values.
    """
    W = np.array(U, dtype=np.complex128)
    dim, r = W.shape
    rots: list[GivensRotation] = []
    for c in range(r):
        for i in range(dim - 1, c, -1):
            a, b = W[i - 1, c], W[i, c]
            theta = float(np.arctan2(abs(b), abs(a)))
            phi = float(np.angle(b) - np.angle(a)) if abs(b) > 0 else 0.0
            g = GivensRotation(i - 1, theta, phi)
            W[i - 1 : i + 1] = g.matrix() @ W[i - 1 : i + 1]
            rots.append(g)
    return rots, W.diagonal()[:r].copy()


def apply_givens_inverse(rots: list[GivensRotation], phases: np.ndarray, dim: int) -> np.ndarray:
    """Rebuild the isometry from :func:`givens_decomposition` output."""
    r = len(phases)
    W = np.zeros((dim, r), dtype=np.complex128)
    W[np.arange(r), np.arange(r)] = phases
    for g in reversed(rots):
        W[g.i : g.i + 2] = g.matrix().conj().T @ W[g.i : g.i + 2]
    return W
