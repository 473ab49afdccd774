from __future__ import annotations

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

import cost_reference as ref
from blochlcu.costmodel import ERASE, OUTPUT, CostParams, cost, qroam_cost, qroam_exhaustive_grid
from blochlcu.factorize import cholesky_sf, double_factorize, reconstruct, reconstruct_sparse, sparsify
from blochlcu.hamiltonian import generate_synthetic, validate
from blochlcu.kmesh import Mesh, complement_g, gvector, modadd, modsub
from blochlcu.lambdas import lambda_df, lambda_sf, lambda_sparse
from blochlcu.oracle import assemble_direct, check_lambda_bound, assemble_sparse

dims_st = st.tuples(*(st.integers(1, 6),) * 3)
slow = settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@given(dims_st, st.data())
def test_momentum_identity(dims, data):
    m = Mesh(dims)
    kp = tuple(data.draw(st.integers(0, n - 1)) for n in dims)
    kq = tuple(data.draw(st.integers(0, n - 1)) for n in dims)
    Q, G = gvector(m, kp, kq)
    assert tuple(a - b for a, b in zip(kp, kq)) == tuple(a + b for a, b in zip(Q, G))
    nq, ng = complement_g(m, Q, G)
    assert tuple(a - b for a, b in zip(kq, kp)) == tuple(a + b for a, b in zip(nq, ng))
    assert modadd(m, modsub(m, kp, kq), kq) == kp


@given(st.integers(1, 1 << 20), st.integers(1, 200), st.sampled_from([OUTPUT, ERASE]))
def test_qroam_descent_is_global(L, m, mode):
    c, k, _ = qroam_cost(L, m, mode)
    best, bestk = qroam_exhaustive_grid(np.array([L]), np.array([m]), mode)
    assert (c, k) == (int(best[0]), int(bestk[0]))


params_st = st.builds(
    dict,
    N=st.integers(1, 12).map(lambda x: 2 * x),
    mesh=dims_st,
    M=st.integers(1, 60),
    d=st.integers(2, 10**6),
    xi_count=st.integers(1, 40),
    aleph=st.integers(4, 16),
    b_r=st.integers(4, 12),
    beth=st.integers(8, 24),
)


@given(params_st, st.sampled_from(["sparse", "sf", "df", "thc"]))
@settings(max_examples=150, deadline=None)
def test_cost_matches_reference(p, lcu):
    nk = int(np.prod(p["mesh"]))
    L = 2 * nk * p["M"]
    count = L * p["xi_count"]
    P = CostParams(
        N=p["N"], mesh=p["mesh"], lam=10.0, M=p["M"], d=p["d"], xi=count / L,
        aleph=p["aleph"], aleph1=p["aleph"], aleph2=p["aleph"], b_r=p["b_r"], beth=p["beth"],
    )
    rep = cost(lcu, P)
    if rep.floored:
        return
    dims = P.mesh.dims
    if lcu == "sparse":
        expected = ref.sparse_step(P.N, nk, P.n_k, P.d, P.aleph, P.b_r)
    elif lcu == "sf":
        expected = ref.sf_step(P.N, nk, P.n_k, P.M, P.aleph, P.aleph, P.b_r)
    elif lcu == "df":
        expected = ref.df_step(P.N, nk, P.n_k, P.M, count, P.N, P.aleph, P.aleph, P.b_r, P.beth)
    else:
        v = sum(1 for x in dims if x % 2 == 0)
        expected = ref.thc_step(P.N, dims, P.n_k, v, P.M, P.aleph, P.b_r, P.beth)
    assert rep.per_step == expected


@given(params_st, st.sampled_from(["sf", "df", "thc"]))
@settings(max_examples=60, deadline=None)
def test_cost_grows_with_mesh_doubling(p, lcu):
    base = dict(N=p["N"], lam=10.0, M=p["M"], xi=2.0)
    dims = p["mesh"]
    doubled = (2 * dims[0],) + dims[1:]
    a = cost(lcu, CostParams(mesh=dims, **base))
    b = cost(lcu, CostParams(mesh=doubled, **base))
    assert b.per_step > a.per_step


@given(st.integers(0, 10**6), st.sampled_from([(1, 1, 1), (1, 1, 2), (1, 2, 2), (2, 1, 1)]), st.integers(1, 2))
@slow
def test_factorizations_reconstruct(seed, dims, n):
    H = generate_synthetic(Mesh(dims), n, seed)
    assert validate(H).passed
    assert np.allclose(reconstruct_sparse(sparsify(H))[1], H.V, atol=1e-13)
    C = cholesky_sf(H, 0.0)
    assert np.allclose(reconstruct(C), H.V, atol=1e-11)
    assert np.allclose(reconstruct(double_factorize(C, 0.0)), H.V, atol=1e-11)


@given(st.integers(0, 10**6))
@slow
def test_lambda_bounds_norm(seed):
    H = generate_synthetic(Mesh((1, 1, 2)), 1, seed)
    direct = assemble_direct(H)
    op = assemble_sparse(H, direct=direct)
    assert check_lambda_bound(op, lambda_sparse(H).lambda_total).passed
    C = cholesky_sf(H, 0.0)
    assert lambda_df(H, double_factorize(C, 0.0)).lambda_total <= lambda_sf(H, C).lambda_total * (1 + 1e-12)
