from __future__ import annotations

import numpy as np
import pytest

from blochlcu.factorize import (
    NotPSDError,
    SymmetryViolationError,
    cholesky_sf,
    double_factorize,
    effective_one_body,
    givens_decomposition,
    hamiltonian_from_thc,
    ingest_thc,
    pivoted_cholesky,
    read_thc,
    reconstruct,
    reconstruct_sparse,
    sparsify,
    synthesize_thc,
    write_thc,
    zeta_violation,
)
from blochlcu.factorize.double import apply_givens_inverse
from blochlcu.hamiltonian import KHamiltonian, generate_synthetic, validate
from blochlcu.kmesh import Mesh


@pytest.fixture(scope="module")
def H():
    return generate_synthetic(Mesh((1, 2, 2)), 2, seed=3)


def test_effective_one_body_definition(H):
    hp = effective_one_body(H)
    nk, n = H.nk, H.n_spatial
    ref = H.h.copy()
    for k in range(nk):
        for k2 in range(nk):
            for r in range(n):
                ref[k] += H.V[0, k, k2, :, :, r, r]
    assert np.allclose(hp, ref)
    assert np.allclose(hp, hp.conj().transpose(0, 2, 1))


def test_sparse_exact_roundtrip(H):
    E = sparsify(H, 0.0)
    hp, V = reconstruct_sparse(E)
    assert np.allclose(V, H.V, atol=1e-14)
    assert np.allclose(hp, effective_one_body(H), atol=1e-14)
    assert E.d == 2 * (E.n_two_body + E.n_one_body)
    assert int(E.multiplicity.sum()) == H.V.size


def test_sparse_threshold_monotone(H):
    counts = [sparsify(H, t).n_two_body for t in (0.0, 1e-3, 1e-2, 1e-1, 1.0)]
    assert counts == sorted(counts, reverse=True)
    E = sparsify(H, 1e-2)
    _, V = reconstruct_sparse(E)
    err = np.abs(V - H.V)
    dropped = V == 0
    assert np.all(np.maximum(np.abs(H.V.real), np.abs(H.V.imag))[dropped] <= 1e-2)
    assert np.all(err[~dropped] < 1e-14)
    with pytest.raises(ValueError):
        sparsify(H, -1.0)


def test_cholesky_exact(H):
    C = cholesky_sf(H, 0.0)
    assert np.allclose(reconstruct(C), H.V, atol=1e-12)
    assert C.M == int(C.ranks.max())


def test_cholesky_tolerance_bounds_error(H):
    for tol in (1e-2, 1e-4, 1e-6):
        C = cholesky_sf(H, tol)
        assert np.abs(reconstruct(C) - H.V).max() <= tol * (1 + 1e-9)


def test_low_rank_input_gives_low_m():
    H = generate_synthetic(Mesh((1, 1, 2)), 2, seed=1, rank=3)
    C = cholesky_sf(H, 1e-10)
    assert C.M <= 6  # symmetrization can at most double the rank


def test_pivoted_cholesky_rejects_indefinite():
    A = np.diag([1.0, -0.5, 0.2]).astype(complex)
    with pytest.raises(NotPSDError):
        pivoted_cholesky(A, 1e-8)


def test_not_psd_hamiltonian(H):
    V = H.V.copy()
    V[0] *= -1
    with pytest.raises(NotPSDError):
        cholesky_sf(KHamiltonian(H.mesh, H.n_spatial, H.h, V), 1e-8)


def test_double_factorization_exact(H):
    C = cholesky_sf(H, 0.0)
    D = double_factorize(C, 0.0)
    assert np.allclose(reconstruct(D), H.V, atol=1e-12)
    for b in D.blocks:
        assert np.allclose(b.U.conj().T @ b.U, np.eye(b.rank), atol=1e-12)
        assert b.dim == (H.n_spatial if b.Q == 0 else 2 * H.n_spatial)
    assert D.xi == D.total_rank / (2 * H.nk * D.M)


def test_double_factorization_truncation(H):
    C = cholesky_sf(H, 0.0)
    full = double_factorize(C, 0.0)
    cut = double_factorize(C, 1e-2)
    assert cut.total_rank < full.total_rank
    assert all(np.all(np.abs(b.f) > 1e-2) for b in cut.blocks)
    rel = double_factorize(C, 0.1, relative=True)
    for b in rel.blocks:
        fb = np.linalg.eigvalsh(full.block(b.Q, b.aux, b.k, b.kind).matrix())
        assert np.all(np.abs(b.f) > 0.1 * np.abs(fb).max() - 1e-15)


def test_q_nonzero_blocks_have_paired_spectrum(H):
    D = double_factorize(cholesky_sf(H, 0.0), 0.0)
    for b in D.blocks:
        if b.Q != 0:
            f = np.sort(b.f)
            assert np.allclose(f, -f[::-1], atol=1e-12)


@pytest.mark.parametrize("seed", range(3))
@pytest.mark.parametrize("rank", [5, 3])
def test_givens_roundtrip(seed, rank):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    U = np.linalg.qr(X)[0][:, :rank]
    rots, phases = givens_decomposition(U)
    assert len(rots) == sum(5 - 1 - c for c in range(rank))
    assert np.allclose(np.abs(phases), 1.0, atol=1e-12)
    assert np.allclose(apply_givens_inverse(rots, phases, 5), U, atol=1e-12)


def test_thc_synthesis_symmetric_and_psd():
    mesh = Mesh((1, 1, 4))
    T = synthesize_thc(mesh, 1, 3, seed=2)
    assert zeta_violation(mesh, T.zeta) < 1e-14
    H = hamiltonian_from_thc(T, seed=2)
    assert validate(H).passed
    C = cholesky_sf(H, 0.0)
    assert np.allclose(reconstruct(C), H.V, atol=1e-12)


def test_thc_ingest_rejects_asymmetric():
    mesh = Mesh((1, 1, 2))
    T = synthesize_thc(mesh, 1, 2, seed=0)
    bad = T.zeta.copy()
    bad[0, 0, 0, 0, 1] += 0.5
    with pytest.raises(SymmetryViolationError):
        ingest_thc(T.chi, bad, mesh)
    with pytest.raises(ValueError):
        ingest_thc(T.chi[:, :, :1], T.zeta, mesh)


def test_thc_io_roundtrip(tmp_path):
    mesh = Mesh((1, 2, 2))
    T = synthesize_thc(mesh, 1, 2, seed=4)
    write_thc(T, tmp_path)
    back = read_thc(tmp_path, mesh, 1, 2)
    assert np.array_equal(back.chi, T.chi)
    assert np.allclose(back.zeta, T.zeta)


def test_reconstruct_dispatch_rejects_other():
    with pytest.raises(TypeError):
        reconstruct(object())
