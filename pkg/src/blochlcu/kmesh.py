"""Monkhorst-Pack mesh algebra.

k-points are integer triples ``(kx, ky, kz)`` with ``0 <= k_d < N_d``. They are
enumerated lexicographically with x slowest, so the flat index of ``k`` is
``(kx * Ny + ky) * Nz + kz``.

Reciprocal-lattice vectors G are kept as signed integer triples in units of the
mesh extent. A G produced by :func:`gvector` has components in ``{0, -N_d}``;
its 3-bit flag form (bit set where the component is nonzero, x in the highest
bit) is what the THC central tensor is indexed by.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np


class InvalidKVectorError(ValueError):
    """A k-vector component lies outside the mesh."""


def ceil_log2(x) -> int:
    """Smallest integer ``n >= 0`` with ``2**n >= x``.

    Accepts ints and rationals (``fractions.Fraction``) exactly, and floats.
    Values ``<= 1`` give 0.
    """
    if isinstance(x, (int, np.integer)):
        x = int(x)
        return 0 if x <= 1 else (x - 1).bit_length()
    num = getattr(x, "numerator", None)
    den = getattr(x, "denominator", None)
    if num is not None and den is not None and not isinstance(x, float):
        num, den = int(num), int(den)
        if num <= den:
            return 0
        n = (num // den).bit_length() - 1
        while (den << n) < num:
            n += 1
        return n
    x = float(x)
    if x <= 1.0:
        return 0
    n = int(np.ceil(np.log2(x)))
    # guard against rounding in log2 near exact powers of two
    while 2.0 ** (n - 1) >= x:
        n -= 1
    while 2.0**n < x:
        n += 1
    return n


@dataclass(frozen=True)
class Mesh:
    """Gamma-centred k-point grid of shape ``dims``."""

    dims: tuple[int, int, int]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 3 or any(d < 1 for d in dims):
            raise ValueError(f"mesh dims must be three positive integers, got {self.dims!r}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def parse(cls, text: str) -> "Mesh":
        parts = [p for p in text.replace("x", ",").split(",") if p.strip()]
        return cls(tuple(int(p) for p in parts))

    @property
    def nk(self) -> int:
        nx, ny, nz = self.dims
        return nx * ny * nz

    @property
    def nk_bits(self) -> int:
        """Register width n_k = sum of per-dimension ceil(log2 N_d)."""
        return sum(ceil_log2(d) for d in self.dims)

    @property
    def n_even(self) -> int:
        return sum(1 for d in self.dims if d % 2 == 0)

    def __str__(self) -> str:
        return ",".join(str(d) for d in self.dims)

    # -- enumeration -----------------------------------------------------
    @cached_property
    def kpoints(self) -> np.ndarray:
        """All k-points, shape ``(N_k, 3)``, in flat-index order."""
        grids = np.meshgrid(*[np.arange(d) for d in self.dims], indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)

    def index(self, k: Iterable[int]) -> int:
        kx, ky, kz = self.validate(k)
        _, ny, nz = self.dims
        return (kx * ny + ky) * nz + kz

    def kvec(self, i: int) -> tuple[int, int, int]:
        return tuple(int(c) for c in self.kpoints[i])

    def validate(self, k: Iterable[int]) -> tuple[int, int, int]:
        k = tuple(int(c) for c in k)
        if len(k) != 3 or any(not 0 <= c < d for c, d in zip(k, self.dims)):
            raise InvalidKVectorError(f"{k!r} is not a valid k-point on mesh {self.dims}")
        return k

    # -- flat-index tables ------------------------------------------------
    @cached_property
    def sub_table(self) -> np.ndarray:
        """``sub_table[a, b]`` is the flat index of ``k_a ⊖ k_b``."""
        k = self.kpoints
        diff = np.mod(k[:, None, :] - k[None, :, :], np.array(self.dims))
        _, ny, nz = self.dims
        return (diff[..., 0] * ny + diff[..., 1]) * nz + diff[..., 2]

    @cached_property
    def neg_table(self) -> np.ndarray:
        """Flat index of ``⊖Q`` for every ``Q``."""
        return self.sub_table[0].copy()

    @cached_property
    def gflag_table(self) -> np.ndarray:
        """``gflag_table[Q, k]``: flag index of G for the pair (k, k ⊖ Q)."""
        k = self.kpoints
        sub = self.sub_table
        flags = np.zeros((self.nk, self.nk), dtype=np.int64)
        for q in range(self.nk):
            kq = k[sub[:, q]]
            g = (k - kq) - k[q]
            flags[q] = (g[:, 0] != 0) * 4 + (g[:, 1] != 0) * 2 + (g[:, 2] != 0)
        return flags

    def reachable_gflags(self, q: int) -> list[int]:
        """Flag values that occur as G for pairs with momentum transfer ``q``."""
        return sorted(set(int(f) for f in self.gflag_table[q]))

    def complement_flag(self, q: int, flag: int) -> int:
        """Flag of !G given Q and the flag of G: nonzero Q components flip."""
        qx, qy, qz = self.kpoints[q]
        mask = (qx != 0) * 4 + (qy != 0) * 2 + (qz != 0)
        return int(flag) ^ int(mask)


def modsub(mesh: Mesh, a, b) -> tuple[int, int, int]:
    """Componentwise ``(a - b) mod N_d``."""
    a = mesh.validate(a)
    b = mesh.validate(b)
    return tuple((x - y) % d for x, y, d in zip(a, b, mesh.dims))


def modneg(mesh: Mesh, a) -> tuple[int, int, int]:
    return modsub(mesh, (0, 0, 0), a)


def modadd(mesh: Mesh, a, b) -> tuple[int, int, int]:
    return modsub(mesh, a, modneg(mesh, b))


def gvector(mesh: Mesh, kp, kq) -> tuple[tuple[int, int, int], tuple[int, int, int]]:
    """Momentum transfer ``Q = kp ⊖ kq`` and ``G = (kp - kq) - Q``."""
    kp = mesh.validate(kp)
    kq = mesh.validate(kq)
    q = modsub(mesh, kp, kq)
    g = tuple((x - y) - z for x, y, z in zip(kp, kq, q))
    return q, g


def complement_g(mesh: Mesh, q, g) -> tuple[tuple[int, int, int], tuple[int, int, int]]:
    """``(⊖Q, !G)`` with ``!G = -(Q + G + ⊖Q)``.

    For a pair ``(kp, kq)`` with ``(Q, G) = gvector(kp, kq)`` this gives
    ``kq - kp = ⊖Q + !G`` exactly.
    """
    q = mesh.validate(q)
    g = tuple(int(c) for c in g)
    for c, d in zip(g, mesh.dims):
        if c not in (0, -d):
            raise ValueError(f"G component {c} is not in {{0, -{d}}}")
    negq = modneg(mesh, q)
    notg = tuple(-(a + b + c) for a, b, c in zip(q, g, negq))
    return negq, notg


def count_self_inverse_q(mesh: Mesh) -> int:
    """Number of Q with ``Q = ⊖Q``; equals ``2**v`` for ``v`` even dimensions."""
    return 2**mesh.n_even


def gflag(g) -> int:
    """3-bit flag form of a G vector (x is the highest bit)."""
    gx, gy, gz = g
    return (gx != 0) * 4 + (gy != 0) * 2 + (gz != 0)
