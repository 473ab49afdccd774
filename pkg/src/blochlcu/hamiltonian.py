"""k-point Hamiltonians: container, symmetry checks, synthetic instances,
supercell folding and the on-disk format.

Index conventions
-----------------
``h[k, p, q]``                   one-body block at k-point ``k`` (Hartree).
``V[Q, k, k2, p, q, r, s]``      ``V_{p k, q (k⊖Q), r (k2⊖Q), s k2}``.

The represented operator is::

    H = sum_{k,p,q,σ} h[k,p,q] a†_{pkσ} a_{qkσ}
      + 1/2 sum_{Q,k,k2,pqrs,σ,τ} V[Q,k,k2,p,q,r,s]
            a†_{pkσ} a_{q(k⊖Q)σ} a†_{r(k2⊖Q)τ} a_{s k2 τ}

``h`` is the bare one-body term; representation-specific corrections are
added downstream.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .kmesh import Mesh

FORMAT_VERSION = 1
DTYPE_TAG = "c128le"


class StructuralError(ValueError):
    """Array shapes do not match the declared mesh / orbital count."""


class DataFormatError(ValueError):
    """An on-disk artifact is missing, truncated or inconsistent."""


@dataclass(frozen=True, eq=False)
class KHamiltonian:
    mesh: Mesh
    n_spatial: int
    h: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        nk, n = self.mesh.nk, int(self.n_spatial)
        if n < 1:
            raise StructuralError("n_spatial must be >= 1")
        h = np.asarray(self.h, dtype=np.complex128)
        V = np.asarray(self.V, dtype=np.complex128)
        if h.shape != (nk, n, n):
            raise StructuralError(f"h has shape {h.shape}, expected {(nk, n, n)}")
        if V.shape != (nk, nk, nk, n, n, n, n):
            raise StructuralError(f"V has shape {V.shape}, expected {(nk, nk, nk, n, n, n, n)}")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "n_spatial", n)

    @property
    def nk(self) -> int:
        return self.mesh.nk

    @property
    def n_spin_orbitals(self) -> int:
        """N, spin-orbitals per cell."""
        return 2 * self.n_spatial

    @property
    def n_modes(self) -> int:
        return 2 * self.n_spatial * self.nk


# ---------------------------------------------------------------------------
# symmetry index maps


def _v_index_grid(mesh: Mesh, n: int):
    nk = mesh.nk
    return np.indices((nk, nk, nk, n, n, n, n), dtype=np.int64)


def symmetry_images(mesh: Mesh, n: int) -> dict[str, tuple[tuple[np.ndarray, ...], bool]]:
    """Index arrays locating the partner of every V element.

    Returns ``{name: (index_tuple, conjugated)}`` such that a symmetric tensor
    satisfies ``V == V[index_tuple]`` (conjugated when flagged). The three
    relations are the pair swap ``V_pqrs = V_rspq``, the conjugate swap
    ``V_pqrs = V*_qpsr`` and the conjugate reversal ``V_pqrs = V*_srqp``.
    """
    Q, k, k2, p, q, r, s = _v_index_grid(mesh, n)
    sub = mesh.sub_table
    negq = mesh.neg_table[Q]
    kmq = sub[k, Q]
    k2mq = sub[k2, Q]
    return {
        "pair_swap": ((negq, k2mq, kmq, r, s, p, q), False),
        "conj_swap": ((negq, kmq, k2mq, q, p, s, r), True),
        "conj_reverse": ((Q, k2, k, s, r, q, p), True),
    }


@dataclass
class SymmetryReport:
    hermiticity: float
    pair_swap: float
    conj_swap: float
    conj_reverse: float
    tol: float

    @property
    def max_violation(self) -> float:
        return max(self.hermiticity, self.pair_swap, self.conj_swap, self.conj_reverse)

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tol

    def as_dict(self) -> dict:
        return {
            "hermiticity": self.hermiticity,
            "pair_swap": self.pair_swap,
            "conj_swap": self.conj_swap,
            "conj_reverse": self.conj_reverse,
            "max_violation": self.max_violation,
            "tol": self.tol,
            "passed": self.passed,
        }


def validate(H: KHamiltonian, tol: float = 1e-10) -> SymmetryReport:
    """Largest violation of h Hermiticity and of each V symmetry relation."""
    herm = float(np.max(np.abs(H.h - H.h.conj().transpose(0, 2, 1)), initial=0.0))
    out = {}
    for name, (idx, conj) in symmetry_images(H.mesh, H.n_spatial).items():
        img = H.V[idx]
        if conj:
            img = img.conj()
        out[name] = float(np.max(np.abs(H.V - img), initial=0.0))
    return SymmetryReport(hermiticity=herm, tol=tol, **out)


# ---------------------------------------------------------------------------
# synthetic instances


def _pair_rows(mesh: Mesh, n: int, q: int) -> np.ndarray:
    """Row permutation (k, p, q) -> (k⊖Q, q, p) into the ⊖Q row space."""
    nk = mesh.nk
    k, p, qq = np.indices((nk, n, n)).reshape(3, -1)
    kmq = mesh.sub_table[k, q]
    return (kmq * n + qq) * n + p


def gram_to_v(mesh: Mesh, n: int, mats: np.ndarray) -> np.ndarray:
    """Stack of per-Q matrices with rows (k,p,q), cols (k2,s,r) -> V tensor."""
    nk = mesh.nk
    V = mats.reshape(nk, nk, n, n, nk, n, n)  # Q, k, p, q, k2, s, r
    return np.ascontiguousarray(V.transpose(0, 1, 4, 2, 3, 6, 5))


def v_to_gram(mesh: Mesh, n: int, V: np.ndarray) -> np.ndarray:
    """Inverse of :func:`gram_to_v`: per-Q matrices over (k,p,q) x (k2,s,r)."""
    nk = mesh.nk
    dim = nk * n * n
    return np.ascontiguousarray(V.transpose(0, 1, 3, 4, 2, 6, 5)).reshape(nk, dim, dim)


def symmetrize_gram(mesh: Mesh, n: int, mats: np.ndarray) -> np.ndarray:
    """Project per-Q Hermitian matrices onto the pair-swap-symmetric set.

    Averaging with the partner block keeps positive semidefiniteness.
    """
    mats = 0.5 * (mats + mats.conj().transpose(0, 2, 1))
    out = np.empty_like(mats)
    for q in range(mesh.nk):
        nq = mesh.neg_table[q]
        perm = _pair_rows(mesh, n, q)
        partner = mats[nq].conj()[np.ix_(perm, perm)]
        out[q] = 0.5 * (mats[q] + partner)
    return out


def random_hermitian_blocks(rng: np.random.Generator, nk: int, n: int, decay: float) -> np.ndarray:
    a = rng.standard_normal((nk, n, n)) + 1j * rng.standard_normal((nk, n, n))
    dist = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    a = a * np.exp(-decay * dist)
    return 0.25 * (a + a.conj().transpose(0, 2, 1))


def generate_synthetic(
    mesh: Mesh,
    n_spatial: int,
    seed: int,
    decay: float = 0.5,
    rank: int | None = None,
) -> KHamiltonian:
    """Seeded Hamiltonian with exact Hermiticity and four-fold V symmetry.

    Each V(Q) block is a Gram matrix ``L L†`` (so it is positive
    semidefinite), symmetrized against its ``⊖Q`` partner. Magnitudes fall
    off as ``exp(-decay * |p - q|)`` within each orbital pair.
    """
    n = int(n_spatial)
    if n < 1:
        raise ValueError("n_spatial must be >= 1")
    rng = np.random.default_rng(seed)
    nk = mesh.nk
    dim = nk * n * n
    rank = dim if rank is None else int(rank)
    h = random_hermitian_blocks(rng, nk, n, decay)

    _, p, q = np.indices((nk, n, n)).reshape(3, -1)
    w = np.exp(-decay * np.abs(p - q))
    L = rng.standard_normal((nk, dim, rank)) + 1j * rng.standard_normal((nk, dim, rank))
    L *= w[None, :, None] / np.sqrt(2.0 * rank)
    mats = np.einsum("qar,qbr->qab", L, L.conj())
    mats = symmetrize_gram(mesh, n, mats)
    return KHamiltonian(mesh, n, h, gram_to_v(mesh, n, mats))


# ---------------------------------------------------------------------------
# supercell folding


@dataclass(frozen=True, eq=False)
class SupercellHamiltonian:
    """Gamma-only view of a k-point Hamiltonian; composite index ``k*n + p``."""

    n_total: int
    h_sc: np.ndarray
    V_sc: np.ndarray
    source_mesh: Mesh | None = field(default=None)

    def to_khamiltonian(self) -> KHamiltonian:
        m = self.h_sc.shape[0]
        return KHamiltonian(Mesh((1, 1, 1)), m, self.h_sc[None], self.V_sc[None, None, None])


def fold_to_supercell(H: KHamiltonian) -> SupercellHamiltonian:
    mesh, n, nk = H.mesh, H.n_spatial, H.nk
    m = n * nk
    h_sc = np.zeros((m, m), dtype=np.complex128)
    for k in range(nk):
        h_sc[k * n:(k + 1) * n, k * n:(k + 1) * n] = H.h[k]
    Q, k, k2, p, q, r, s = _v_index_grid(mesh, n)
    sub = mesh.sub_table
    P = k * n + p
    Qi = sub[k, Q] * n + q
    R = sub[k2, Q] * n + r
    S = k2 * n + s
    V_sc = np.zeros((m, m, m, m), dtype=np.complex128)
    V_sc[P, Qi, R, S] = H.V
    return SupercellHamiltonian(2 * m, h_sc, V_sc, mesh)


# ---------------------------------------------------------------------------
# on-disk format


def _write_c128(path: Path, arr: np.ndarray) -> None:
    path.write_bytes(np.ascontiguousarray(arr, dtype="<c16").tobytes())


def _read_c128(path: Path, shape) -> np.ndarray:
    if not path.is_file():
        raise DataFormatError(f"missing data file {path}")
    raw = path.read_bytes()
    count = int(np.prod(shape)) if len(shape) else 1
    if len(raw) != 16 * count:
        raise DataFormatError(f"{path.name}: expected {16 * count} bytes, found {len(raw)}")
    return np.frombuffer(raw, dtype="<c16").astype(np.complex128).reshape(shape)


def read_manifest(path: str | os.PathLike) -> dict:
    mpath = Path(path) / "manifest.json"
    if not mpath.is_file():
        raise DataFormatError(f"no manifest.json in {path}")
    try:
        return json.loads(mpath.read_text())
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"unreadable manifest in {path}: {exc}") from exc


def write_hamiltonian(H: KHamiltonian, path: str | os.PathLike, provenance: dict | None = None) -> None:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    manifest = {
        "format_version": FORMAT_VERSION,
        "dims": list(H.mesh.dims),
        "n_spatial": H.n_spatial,
        "dtype": DTYPE_TAG,
        "shapes": {"h": list(H.h.shape), "v": list(H.V.shape)},
    }
    if provenance:
        manifest["provenance"] = provenance
    _write_c128(out / "h.bin", H.h)
    _write_c128(out / "v.bin", H.V)
    (out / "manifest.json").write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")


def read_hamiltonian(path: str | os.PathLike) -> KHamiltonian:
    man = read_manifest(path)
    try:
        if man["format_version"] != FORMAT_VERSION or man["dtype"] != DTYPE_TAG:
            raise DataFormatError(f"unsupported format {man['format_version']}/{man['dtype']}")
        mesh = Mesh(tuple(man["dims"]))
        n = int(man["n_spatial"])
        hs, vs = tuple(man["shapes"]["h"]), tuple(man["shapes"]["v"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DataFormatError):
            raise
        raise DataFormatError(f"malformed manifest in {path}: {exc}") from exc
    h = _read_c128(Path(path) / "h.bin", hs)
    V = _read_c128(Path(path) / "v.bin", vs)
    try:
        return KHamiltonian(mesh, n, h, V)
    except StructuralError as exc:
        raise DataFormatError(str(exc)) from exc
