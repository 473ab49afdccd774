"""Tensor hypercontraction factors with a momentum-resolved central tensor.

``chi[k, p, μ]`` are orbital values at interpolation point μ and
``zeta[Q, g1, g2, μ, ν]`` is indexed by the 3-bit flags of
``G1 = G(k, k⊖Q)`` and ``G2 = G(k2, k2⊖Q)`` (see :mod:`blochlcu.kmesh`)::

    V[Q,k,k2,p,q,r,s] = sum_{μν} chi*[k,p,μ] chi[k⊖Q,q,μ]
                        zeta[Q, G1, G2, μ, ν] chi*[k2⊖Q,r,ν] chi[k2,s,ν]

The four-fold integral symmetry becomes, with ``!g`` the complement flag::

    zeta[Q,g1,g2,μ,ν] = conj zeta[⊖Q,!g1,!g2,μ,ν]
                      = zeta[⊖Q,!g2,!g1,ν,μ]
                      = conj zeta[Q,g2,g1,ν,μ]

Flags never produced for a given Q are held at zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..hamiltonian import KHamiltonian, gram_to_v, random_hermitian_blocks
from ..kmesh import Mesh

N_FLAGS = 8


class SymmetryViolationError(ValueError):
    """Raw central tensor breaks the integral symmetries beyond tolerance."""


def reachable_mask(mesh: Mesh) -> np.ndarray:
    """``mask[Q, g]`` is True when flag ``g`` occurs for momentum transfer ``Q``."""
    mask = np.zeros((mesh.nk, N_FLAGS), dtype=bool)
    for q in range(mesh.nk):
        mask[q, mesh.gflag_table[q]] = True
    return mask


def _complement_table(mesh: Mesh) -> np.ndarray:
    """``comp[Q, g]`` flag of !G."""
    return np.array([[mesh.complement_flag(q, g) for g in range(N_FLAGS)] for q in range(mesh.nk)])


def zeta_images(mesh: Mesh, m: int):
    """Index tuples and conjugation flags of the three symmetry partners."""
    Q, g1, g2, mu, nu = np.indices((mesh.nk, N_FLAGS, N_FLAGS, m, m))
    nq = mesh.neg_table[Q]
    comp = _complement_table(mesh)
    c1, c2 = comp[Q, g1], comp[Q, g2]
    return [
        ((nq, c1, c2, mu, nu), True),
        ((Q, g2, g1, nu, mu), True),
        ((nq, c2, c1, nu, mu), False),
    ]


def _images(zeta: np.ndarray, mesh: Mesh):
    for idx, conj in zeta_images(mesh, zeta.shape[-1]):
        img = zeta[idx]
        yield img.conj() if conj else img


def zeta_violation(mesh: Mesh, zeta: np.ndarray) -> float:
    """Largest deviation of ``zeta`` from any of its symmetry partners."""
    zeta = np.asarray(zeta, dtype=np.complex128)
    return float(max((np.max(np.abs(zeta - img), initial=0.0) for img in _images(zeta, mesh)), default=0.0))


def symmetrize_zeta(mesh: Mesh, zeta: np.ndarray) -> np.ndarray:
    """Average over the symmetry group and zero unreachable flag slots.

    This is an orthogonal projector: idempotent and the identity on tensors
    that already satisfy the relations.
    """
    zeta = np.asarray(zeta, dtype=np.complex128)
    mask = reachable_mask(mesh)
    z = zeta * (mask[:, :, None, None, None] & mask[:, None, :, None, None])
    total = z.copy()
    for img in _images(z, mesh):
        total += img
    return 0.25 * total


def normalization_sums(mesh: Mesh, norms: np.ndarray) -> np.ndarray:
    """``S[Q, g, μ] = sum_{k : G(k, k⊖Q) = g} N[k, μ] N[k⊖Q, μ]``."""
    nk, m = norms.shape
    out = np.zeros((nk, N_FLAGS, m))
    for q in range(nk):
        prod = norms * norms[mesh.sub_table[:, q]]
        np.add.at(out[q], mesh.gflag_table[q], prod)
    return out


@dataclass(eq=False)
class THCFactors:
    mesh: Mesh
    n_spatial: int
    chi: np.ndarray
    zeta: np.ndarray

    @property
    def M(self) -> int:
        return int(self.chi.shape[2])

    @property
    def c_thc(self) -> float:
        """Rank parameter ``M / (N/2)``."""
        return self.M / self.n_spatial

    @property
    def norms(self) -> np.ndarray:
        """``N[k, μ] = ||chi[k, :, μ]||``."""
        return np.sqrt(np.sum(np.abs(self.chi) ** 2, axis=1))

    @property
    def chi_tilde(self) -> np.ndarray:
        nrm = self.norms
        safe = np.where(nrm > 0, nrm, 1.0)
        return np.where(nrm[:, None, :] > 0, self.chi / safe[:, None, :], 0.0)

    @property
    def norm_sums(self) -> np.ndarray:
        return normalization_sums(self.mesh, self.norms)


def ingest_thc(chi, zeta, mesh: Mesh, tol: float = 1e-8) -> THCFactors:
    """Validate raw factors and project ``zeta`` onto the symmetric subspace.

    Raises:
        SymmetryViolationError: ``zeta`` deviates from a partner by more than ``tol``.
    """
    chi = np.asarray(chi, dtype=np.complex128)
    zeta = np.asarray(zeta, dtype=np.complex128)
    if chi.ndim != 3 or chi.shape[0] != mesh.nk:
        raise ValueError(f"chi must have shape (N_k, n, M), got {chi.shape}")
    m = chi.shape[2]
    if zeta.shape != (mesh.nk, N_FLAGS, N_FLAGS, m, m):
        raise ValueError(f"zeta must have shape {(mesh.nk, N_FLAGS, N_FLAGS, m, m)}, got {zeta.shape}")
    mask = reachable_mask(mesh)
    live = mask[:, :, None, None, None] & mask[:, None, :, None, None]
    viol = zeta_violation(mesh, zeta * live)
    if viol > tol:
        raise SymmetryViolationError(f"central tensor symmetry violated by {viol:.3e} (tol {tol:.1e})")
    return THCFactors(mesh, chi.shape[1], chi, symmetrize_zeta(mesh, zeta))


def _pair_basis(T: THCFactors) -> np.ndarray:
    """``B[Q, (k,p,q), (g, μ)] = chi*[k,p,μ] chi[k⊖Q,q,μ] δ(g, G(k,k⊖Q))``."""
    mesh, n, m, nk = T.mesh, T.n_spatial, T.M, T.mesh.nk
    B = np.zeros((nk, nk, n, n, N_FLAGS, m), dtype=np.complex128)
    ks = np.arange(nk)
    for q in range(nk):
        kmq = mesh.sub_table[:, q]
        pair = np.einsum("kpm,kqm->kpqm", T.chi.conj(), T.chi[kmq])
        B[q, ks, :, :, mesh.gflag_table[q], :] = pair
    return B.reshape(nk, nk * n * n, N_FLAGS * m)


def reconstruct_thc(T: THCFactors) -> np.ndarray:
    """Dense V; per Q the pair matrix is ``B_Q Z_Q B_Q^†``."""
    nk, m = T.mesh.nk, T.M
    B = _pair_basis(T)
    Z = T.zeta.transpose(0, 1, 3, 2, 4).reshape(nk, N_FLAGS * m, N_FLAGS * m)
    mats = np.einsum("qai,qij,qbj->qab", B, Z, B.conj())
    return gram_to_v(T.mesh, T.n_spatial, mats)


def synthesize_thc(
    mesh: Mesh,
    n_spatial: int,
    n_thc: int,
    seed: int,
    decay: float = 0.5,
    rank: int | None = None,
) -> THCFactors:
    """Seeded factors whose central tensor is symmetric and positive semidefinite.

    Each ``Z_Q`` (rows ``(g, μ)``) is a Gram matrix; symmetrization keeps
    positive semidefiniteness, so the reconstructed V has PSD momentum blocks.
    """
    rng = np.random.default_rng(seed)
    nk, n, m = mesh.nk, int(n_spatial), int(n_thc)
    dim = N_FLAGS * m
    rank = dim if rank is None else int(rank)
    chi = rng.standard_normal((nk, n, m)) + 1j * rng.standard_normal((nk, n, m))
    chi *= np.exp(-decay * np.arange(n))[None, :, None] / np.sqrt(2.0 * n)
    R = rng.standard_normal((nk, dim, rank)) + 1j * rng.standard_normal((nk, dim, rank))
    Z = np.einsum("qar,qbr->qab", R, R.conj()) / (2.0 * rank)
    zeta = Z.reshape(nk, N_FLAGS, m, N_FLAGS, m).transpose(0, 1, 3, 2, 4)
    return THCFactors(mesh, n, chi, symmetrize_zeta(mesh, zeta))


def hamiltonian_from_thc(T: THCFactors, h: np.ndarray | None = None, seed: int = 0, decay: float = 0.5) -> KHamiltonian:
    """Hamiltonian whose two-body part is exactly the THC tensor.

    When ``h`` is not given a seeded Hermitian one-body term is drawn.
    """
    if h is None:
        h = random_hermitian_blocks(np.random.default_rng(seed), T.mesh.nk, T.n_spatial, decay)
    return KHamiltonian(T.mesh, T.n_spatial, h, reconstruct_thc(T))


def write_thc(T: THCFactors, path) -> None:
    """Store ``chi.bin`` and ``zeta.bin`` next to a Hamiltonian directory."""
    from pathlib import Path

    from ..hamiltonian import _write_c128

    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    _write_c128(out / "chi.bin", T.chi)
    _write_c128(out / "zeta.bin", T.zeta)


def read_thc(path, mesh: Mesh, n_spatial: int, n_thc: int, tol: float = 1e-8) -> THCFactors:
    from pathlib import Path

    from ..hamiltonian import _read_c128

    nk = mesh.nk
    chi = _read_c128(Path(path) / "chi.bin", (nk, n_spatial, n_thc))
    zeta = _read_c128(Path(path) / "zeta.bin", (nk, N_FLAGS, N_FLAGS, n_thc, n_thc))
    return ingest_thc(chi, zeta, mesh, tol)
