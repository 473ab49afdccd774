"""Thresholded, symmetry-deduplicated sparse representation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..hamiltonian import KHamiltonian, symmetry_images
from ..kmesh import Mesh
from .common import effective_one_body


@dataclass(eq=False)
class SparseEntries:
    """Symmetry-unique retained entries of ``V`` and of ``h'``.

    Attributes:
        two_body_index: ``(m, 7)`` canonical ``(Q, k, k2, p, q, r, s)`` per orbit.
        two_body_value: value of ``V`` at the canonical index.
        multiplicity: number of distinct stored positions in each orbit.
        one_body_index: ``(m1, 3)`` ``(k, p, q)`` with ``p <= q``.
        one_body_value: ``h'[k, p, q]``.
        threshold: entries with ``max(|Re|, |Im|) <= threshold`` were dropped.
    """

    mesh: Mesh
    n_spatial: int
    two_body_index: np.ndarray
    two_body_value: np.ndarray
    multiplicity: np.ndarray
    one_body_index: np.ndarray
    one_body_value: np.ndarray
    threshold: float

    @property
    def n_two_body(self) -> int:
        return len(self.two_body_value)

    @property
    def n_one_body(self) -> int:
        return len(self.one_body_value)

    @property
    def d(self) -> int:
        """Unique coefficients fed to state preparation (real and imaginary counted apart)."""
        return 2 * (self.n_two_body + self.n_one_body)

    def entries(self) -> list[tuple]:
        """``(Q, k, k2, p, q, r, s, value)`` for every retained two-body orbit."""
        return [tuple(int(i) for i in idx) + (complex(v),) for idx, v in zip(self.two_body_index, self.two_body_value)]


def _orbit_flat_indices(mesh: Mesh, n: int) -> np.ndarray:
    """Flat positions of the identity and the three symmetry images, shape (4, size)."""
    nk = mesh.nk
    shape = (nk, nk, nk, n, n, n, n)
    imgs = symmetry_images(mesh, n)
    out = [np.arange(int(np.prod(shape)))]
    for name in ("pair_swap", "conj_swap", "conj_reverse"):
        out.append(np.ravel_multi_index(tuple(a.ravel() for a in imgs[name][0]), shape))
    return np.stack(out)


def _keep(values: np.ndarray, threshold: float) -> np.ndarray:
    return np.maximum(np.abs(values.real), np.abs(values.imag)) > threshold


def sparsify(H: KHamiltonian, threshold: float = 0.0) -> SparseEntries:
    """Retain entries whose real or imaginary part exceeds ``threshold``.

    The real and imaginary parts of one entry are kept or dropped together.
    Two-body entries are grouped into orbits of the four-fold symmetry and
    stored once per orbit; one-body entries of ``h'`` once per ``p <= q``.
    """
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    mesh, n = H.mesh, H.n_spatial
    shape = H.V.shape
    orbits = _orbit_flat_indices(mesh, n)
    canon = orbits.min(axis=0)
    is_canon = canon == np.arange(canon.size)
    sorted_orbits = np.sort(orbits, axis=0)
    mult = 1 + np.count_nonzero(np.diff(sorted_orbits, axis=0), axis=0)

    flat_v = H.V.ravel()
    sel = np.flatnonzero(is_canon & _keep(flat_v, threshold))
    idx2 = np.stack(np.unravel_index(sel, shape), axis=1).astype(np.int64)

    hp = effective_one_body(H)
    k, p, q = np.indices(hp.shape).reshape(3, -1)
    upper = p <= q
    vals1 = hp[k, p, q]
    sel1 = upper & _keep(vals1, threshold)
    idx1 = np.stack([k[sel1], p[sel1], q[sel1]], axis=1).astype(np.int64)
    return SparseEntries(
        mesh=mesh,
        n_spatial=n,
        two_body_index=idx2,
        two_body_value=flat_v[sel].copy(),
        multiplicity=mult[sel].astype(np.int64),
        one_body_index=idx1,
        one_body_value=vals1[sel1].copy(),
        threshold=float(threshold),
    )


def reconstruct_sparse(E: SparseEntries) -> tuple[np.ndarray, np.ndarray]:
    """Dense ``(h', V)`` implied by the retained entries."""
    mesh, n, nk = E.mesh, E.n_spatial, E.mesh.nk
    shape = (nk, nk, nk, n, n, n, n)
    V = np.zeros(int(np.prod(shape)), dtype=np.complex128)
    if E.n_two_body:
        orbits = _orbit_flat_indices(mesh, n)
        canon_flat = np.ravel_multi_index(tuple(E.two_body_index.T), shape)
        conj = (False, False, True, True)
        for img, c in zip(orbits, conj):
            # the image of the canonical position carries V or V*
            V[img[canon_flat]] = E.two_body_value.conj() if c else E.two_body_value
    hp = np.zeros((nk, n, n), dtype=np.complex128)
    if E.n_one_body:
        k, p, q = E.one_body_index.T
        hp[k, q, p] = E.one_body_value.conj()
        hp[k, p, q] = E.one_body_value
    return hp, V.reshape(shape)
