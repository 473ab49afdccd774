"""Acceptance criteria 1 to 9, each reporting one PASS/FAIL line."""

from __future__ import annotations

import contextlib
import itertools
import json
import math
import time

import numpy as np
import pytest

from blochlcu import cli, costmodel
from blochlcu.costmodel import ERASE, OUTPUT, qroam_cost_grid, qroam_exhaustive_grid
from blochlcu.factorize import hamiltonian_from_thc, synthesize_thc
from blochlcu.hamiltonian import fold_to_supercell
from blochlcu.kmesh import Mesh, complement_g, gvector
from blochlcu.lambdas import lambda_sparse
from blochlcu.oracle import majorana_unitaries, sparse_lcu_terms, verify_instance, walk_spectrum
from blochlcu.physical import estimate_physical, load_profile
from reference_data import DIAMOND_ROWS, INCONSISTENT_MOMENTUM_ROWS, MOMENTUM_ROWS


@pytest.fixture
def criterion(capsys):
    @contextlib.contextmanager
    def run(number: int, text: str, extra_seconds: float = 0.0):
        t0 = time.perf_counter()
        notes: list[str] = []

        def line(status):
            secs = time.perf_counter() - t0 + extra_seconds
            detail = "; ".join([text] + notes)
            return f"\ncriterion {number}: {status} ({detail}; {secs:.2f}s)"

        try:
            yield notes
        except BaseException:
            with capsys.disabled():
                print(line("FAIL"))
            raise
        with capsys.disabled():
            print(line("PASS"))

    return run


# ---------------------------------------------------------------------------
# shared instances for criteria 3 to 5: n_spatial * N_k <= 4, N_k in {1, 2, 4}

SHAPES = [
    ((1, 1, 1), 1),
    ((1, 1, 1), 2),
    ((1, 1, 1), 3),
    ((1, 1, 1), 4),
    ((1, 1, 2), 1),
    ((2, 1, 1), 2),
    ((1, 1, 4), 1),
    ((2, 2, 1), 1),
]
SEEDS = (101, 202, 303)


@pytest.fixture(scope="module")
def verified():
    out = []
    for (dims, n), seed in itertools.product(SHAPES, SEEDS):
        T = synthesize_thc(Mesh(dims), n, 1 + seed % 3, seed)
        H = hamiltonian_from_thc(T, seed=seed)
        t0 = time.perf_counter()
        res = verify_instance(H, T, tol=1e-9)
        out.append((dims, n, seed, H, res, time.perf_counter() - t0))
    return out


def test_criterion_1_momentum_algebra(criterion):
    with criterion(1, "momentum table rows and exhaustive complement identity"):
        t0 = time.perf_counter()
        for i, (dims, kp, kq, diff, q, g, rdiff, negq, notg) in enumerate(MOMENTUM_ROWS):
            m = Mesh(dims)
            Q, G = gvector(m, kp, kq)
            nq, ng = complement_g(m, Q, G)
            assert tuple(a - b for a, b in zip(kp, kq)) == diff
            assert (Q, G, ng) == (q, g, notg)
            assert tuple(a - b for a, b in zip(kq, kp)) == rdiff
            if i not in INCONSISTENT_MOMENTUM_ROWS:
                assert nq == negq
        for dims in [(1, 1, 4), (1, 4, 4), (4, 4, 4)]:
            m = Mesh(dims)
            for i, j in itertools.product(range(m.nk), repeat=2):
                kp, kq = m.kvec(i), m.kvec(j)
                nq, ng = complement_g(m, *gvector(m, kp, kq))
                assert tuple(a - b for a, b in zip(kq, kp)) == tuple(a + b for a, b in zip(nq, ng))
        assert time.perf_counter() - t0 < 1.0


def test_criterion_2_qroam_exhaustive(criterion):
    with criterion(2, "QROAM optimizer equals exhaustive search, L <= 2^14, m <= 64"):
        t0 = time.perf_counter()
        L, m = np.meshgrid(np.arange(1, (1 << 14) + 1), np.arange(1, 65), indexing="ij")
        rng = np.random.default_rng(0)
        picks = list(zip(rng.integers(1, (1 << 14) + 1, 200), rng.integers(1, 65, 200)))
        for mode in (OUTPUT, ERASE):
            c, k = qroam_cost_grid(L, m, mode)
            ce, ke = qroam_exhaustive_grid(L, m, mode)
            assert np.array_equal(c, ce) and np.array_equal(k, ke)
            # the scalar optimizer used by the cost models agrees too
            for Li, mi in picks:
                tof, kk, _ = costmodel.qroam_cost(int(Li), int(mi), mode)
                assert (tof, kk) == (ce[Li - 1, mi - 1], ke[Li - 1, mi - 1])
        assert time.perf_counter() - t0 < 10.0


def test_criterion_3_representation_equivalence(criterion, verified):
    verify_seconds = sum(t for *_, t in verified)
    text = f"{len(verified)} instances, sparse/SF/DF/THC spectra equal up to shift at 1e-9"
    with criterion(3, text, verify_seconds) as notes:
        assert len(verified) >= 20
        assert {math.prod(d) for d, *_ in verified} == {1, 2, 4}
        assert all(n * math.prod(d) <= 4 for d, n, *_ in verified)
        worst = 0.0
        for dims, n, seed, H, res, _ in verified:
            assert set(res["representations"]) == {"sparse", "sf", "df", "thc"}
            for name, rep in res["representations"].items():
                worst = max(worst, rep["spectral_distance"])
                assert rep["spectral_distance"] <= 1e-9, (dims, n, seed, name)
            be = res["thc_block_encoding"]
            assert be["status"] == "skipped" or be["passed"], (dims, n, seed)
        notes.append(f"max distance {worst:.1e}")
        assert verify_seconds < 120.0


def test_criterion_4_lambda_bound(criterion, verified):
    with criterion(4, "lambda + 1e-9 >= ||H'|| for every representation and instance"):
        for dims, n, seed, H, res, _ in verified:
            for name, rep in res["representations"].items():
                assert rep["lambda_total"] + 1e-9 >= rep["norm"], (dims, n, seed, name)


def test_criterion_5_fold_invariance(criterion, verified):
    with criterion(5, "sparse lambda unchanged by folding to the supercell, 1e-12 relative"):
        for dims, n, seed, H, _, _ in verified:
            a = lambda_sparse(H).lambda_total
            b = lambda_sparse(fold_to_supercell(H).to_khamiltonian()).lambda_total
            assert abs(a - b) <= 1e-12 * abs(a), (dims, n, seed)


def test_criterion_6_walk_eigenphases(criterion):
    from blochlcu.hamiltonian import generate_synthetic

    shapes = [((1, 1, 1), 1), ((1, 1, 1), 2), ((1, 1, 2), 1), ((2, 1, 1), 1)]
    with criterion(6, "walk eigenphases equal +-arccos(E/lambda) at 1e-8 for 1-2 orbital sparse LCUs"):
        for (dims, n), seed in itertools.product(shapes, (1, 2)):
            H = generate_synthetic(Mesh(dims), n, seed)
            terms = sparse_lcu_terms(H)
            rep = walk_spectrum(majorana_unitaries(H, terms), lambda_sparse(H).lambda_total, tol=1e-8)
            assert rep.passed, (dims, n, seed, rep.max_error, rep.invariance_error)


# meshes spanning N_k = 512 .. 131072
SCALING_MESHES = [(8, 8, 8), (16, 16, 8), (16, 16, 16), (32, 32, 16), (32, 32, 32), (64, 64, 32)]
SCALING_CASES = {
    # lcu: (sweep options, target exponent)
    "sparse": (dict(N=8, M=1, xi=1.0), 1.5),
    "sf": (dict(N=8, M=40, xi=1.0), 1.0),
    "df": (dict(N=4, M=2000, xi=200.0), 0.5),
    "thc": (dict(N=8, M=4, xi=1.0), 1.0),
}


def _exponent(lcu, opts, supercell):
    base = dict(lam=100.0, lam_exp=0.0, d_coef=0.125, supercell=supercell, bits={})
    rows = [cli.sweep_point((lcu, dims, {**base, **opts})) for dims in SCALING_MESHES]
    slope, _ = cli.fit_exponent([r["Nk"] for r in rows], [r["per_step_toffoli"] for r in rows])
    return slope


def test_criterion_7_scaling_exponents(criterion):
    with criterion(7, "per-step Toffoli exponents in N_k within 0.15 of targets, supercell about +0.5") as notes:
        t0 = time.perf_counter()
        found = {}
        for lcu, (opts, target) in SCALING_CASES.items():
            found[lcu] = _exponent(lcu, opts, False)
            if lcu != "thc":
                found[lcu + "_sc"] = _exponent(lcu, opts, True)
        notes.append(" ".join(f"{k}={v:.3f}" for k, v in found.items()))
        for lcu, (_, target) in SCALING_CASES.items():
            assert abs(found[lcu] - target) <= 0.15, (lcu, found[lcu])
            if lcu != "thc":
                assert abs(found[lcu + "_sc"] - found[lcu] - 0.5) <= 0.15, (lcu, found)
        nks = [math.prod(m) for m in SCALING_MESHES]
        assert math.log10(max(nks) / min(nks)) >= 2
        assert time.perf_counter() - t0 < 30.0


def test_criterion_8_physical_calibration(criterion):
    with criterion(8, "all Diamond rows within a factor of 2 using the frozen default profile"):
        P = load_profile()
        assert P.name == "default"
        for lcu, dims, tof, logical, phys_m, days in DIAMOND_ROWS:
            rep = estimate_physical(int(tof), logical, P)
            assert 0.5 <= rep.physical_qubits / (phys_m * 1e6) <= 2.0, (lcu, dims)
            assert 0.5 <= rep.runtime_days / days <= 2.0, (lcu, dims)


def _run_bytes(args, out):
    assert cli.main(args + ["-o", str(out)]) == 0, args
    return out.read_bytes()


def test_criterion_9_cli_determinism(criterion, tmp_path):
    with criterion(9, "every CLI command is byte-identical across reruns and worker counts"):
        h1, h2 = tmp_path / "h1", tmp_path / "h2"
        gen = ["gen", "--mesh", "1,1,2", "--n", "1", "--seed", "9", "--thc-rank", "2"]
        for h in (h1, h2):
            assert cli.main(gen + ["-o", str(h)]) == 0
        for f in ("manifest.json", "h.bin", "v.bin", "chi.bin", "zeta.bin"):
            assert (h1 / f).read_bytes() == (h2 / f).read_bytes(), f

        commands = [
            ["factor", "-i", str(h1), "--method", "sparse"],
            ["factor", "-i", str(h1), "--method", "sf"],
            ["factor", "-i", str(h1), "--method", "df"],
            ["factor", "-i", str(h1), "--method", "thc"],
            ["lambda", "-i", str(h1)],
            ["cost", "--lcu", "sparse", "-i", str(h1)],
            ["cost", "--lcu", "thc", "--N", "8", "--mesh", "3,3,3", "--lam", "20", "--M", "16"],
            ["cost", "--lcu", "df", "-i", str(h1), "--supercell"],
            ["phys", "--toffoli", "4840000000", "--logical", "2478"],
            ["verify", "-i", str(h1)],
        ]
        for i, args in enumerate(commands):
            a = _run_bytes(args, tmp_path / f"a{i}.json")
            b = _run_bytes(args, tmp_path / f"b{i}.json")
            assert a == b, args
        # identical input contents give identical hashes whatever the path
        a = json.loads(_run_bytes(["lambda", "-i", str(h1)], tmp_path / "p1.json"))
        b = json.loads(_run_bytes(["lambda", "-i", str(h2)], tmp_path / "p2.json"))
        assert a == b

        sweep = ["sweep", "--lcu", "all", "--meshes", "1,1,1;2,2,2;3,3,3;4,4,4", "--seed", "5"]
        outs = [_run_bytes(sweep + ["--workers", str(w)], tmp_path / f"s{w}.csv") for w in (1, 1, 3)]
        assert outs[0] == outs[1] == outs[2]
        rep = ["report", "--inputs", str(tmp_path / "s1.csv")]
        assert _run_bytes(rep, tmp_path / "r1.json") == _run_bytes(rep, tmp_path / "r2.json")
