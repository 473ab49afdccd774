"""Dense brute-force checks at tiny sizes.

Each representation is assembled as the operator its block encoding
actually implements (``H'``), over the full Fock space of all
``2 * n_spatial * N_k`` spin-orbitals. ``H'`` differs from the direct
second-quantized ``H`` by an identity multiple, recorded as ``shift`` so that
``eig(H) = eig(H') + shift``.

Implemented operators:

sparse  Majorana-string LCU of the two-body term plus ``h'`` in traceless form.
sf, df  ``H1'(h') + sum_{Q,n} (S²/4) [T2(A'/S) + T2(B'/S)]`` with ``T2(x) = 2x² - 1``
        and ``A' = A - tr(A)``; ``S`` is the LCU weight of ``A'`` (resp. ``B'``).
thc     ``H`` itself: bare ``h`` and the ladder-operator THC two-body term.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import fock
from .factorize import (
    CholeskyFactors,
    DFFactors,
    SparseEntries,
    THCFactors,
    effective_one_body,
    reconstruct_sparse,
    sparsify,
)
from .hamiltonian import KHamiltonian, fold_to_supercell
from .lambdas import df_weights, sf_weights

MAX_DIM = 1 << fock.MAX_MODES
WALK_CAP = 1 << 14
THC_TERM_CAP = 1 << 23


class DimensionCapError(ValueError):
    """Fock space too large for dense assembly."""


class InvalidLCUError(ValueError):
    """An LCU term is not a self-inverse unitary, or weights are inconsistent."""


@dataclass(eq=False)
class DenseOperator:
    matrix: np.ndarray
    tag: str
    shift: float = 0.0
    provenance: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigvals(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def shifted_eigvals(self) -> np.ndarray:
        """Spectrum of the represented Hamiltonian (``H' + shift``)."""
        return self.eigvals() + self.shift

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0))


def _check_modes(n_modes: int) -> None:
    if n_modes > fock.MAX_MODES:
        raise DimensionCapError(f"{n_modes} spin-orbitals exceed the dense cap of {fock.MAX_MODES}")


def supercell_blocks(H: KHamiltonian) -> tuple[np.ndarray, np.ndarray]:
    sc = fold_to_supercell(H)
    return sc.h_sc, sc.V_sc


def _one_body_traceless(A: np.ndarray) -> np.ndarray:
    """``sum_σ sum_ij A_ij a†a - tr(A)``: the Majorana-pair form of a one-body operator."""
    dim = 1 << (2 * A.shape[0])
    op = fock.one_body_operator(A)
    op[np.diag_indices(dim)] -= np.trace(A).real
    return op


def assemble_direct(H: KHamiltonian) -> DenseOperator:
    """``H1 + H2`` straight from ``(h, V)`` with no rewriting."""
    _check_modes(H.n_modes)
    h_sc, V_sc = supercell_blocks(H)
    mat = fock.one_body_operator(h_sc) + fock.two_body_operator(V_sc)
    return DenseOperator(mat, "direct")


def _with_shift(op: np.ndarray, H: KHamiltonian, tag: str, direct: DenseOperator | None, **prov) -> DenseOperator:
    if direct is None:
        direct = assemble_direct(H)
    shift = float((np.trace(direct.matrix) - np.trace(op)).real / op.shape[0])
    return DenseOperator(op, tag, shift, prov)


# ---------------------------------------------------------------------------
# sparse: Majorana-string LCU


def _x_pair(P: int, Q: int):
    """``X~_PQ = (i/2)(γ_P0 γ_Q1 - γ_P1 γ_Q0)``."""
    return [(0.5j, (2 * P, 2 * Q + 1)), (-0.5j, (2 * P + 1, 2 * Q))]


def _y_pair(P: int, Q: int):
    """``Y~_PQ = (i/2)(γ_P0 γ_Q0 + γ_P1 γ_Q1)``."""
    return [(0.5j, (2 * P, 2 * Q)), (0.5j, (2 * P + 1, 2 * Q + 1))]


def _phase_of(c: complex) -> complex:
    for ph in (1, -1, 1j, -1j):
        if abs(c / abs(c) - ph) < 1e-9:
            return ph
    raise InvalidLCUError(f"coefficient {c} is not a real or imaginary multiple")


def _hermitian_phase(phase: complex, length: int) -> complex:
    """Phase making ``phase * Γ`` Hermitian (anti-Hermitian pieces cancel in total)."""
    real_ok = (length * (length - 1) // 2) % 2 == 0
    if (phase.imag == 0) != real_ok:
        phase = phase * 1j
    return phase


@dataclass(frozen=True)
class MajoranaTerm:
    weight: float
    phase: complex
    string: tuple[int, ...]


def sparse_lcu_terms(H: KHamiltonian, threshold: float = 0.0, entries: SparseEntries | None = None) -> list[MajoranaTerm]:
    """Weighted Majorana strings of the sparse LCU, merged by ``(phase, string)``.

    Merging only combines terms with identical phase, so the weight total
    equals the sparse L1 norm exactly.
    """
    E = sparsify(H, threshold) if entries is None else entries
    hp, V = reconstruct_sparse(E)
    Htmp = KHamiltonian(H.mesh, H.n_spatial, hp, V)
    h_sc, V_sc = supercell_blocks(Htmp)
    m = h_sc.shape[0]
    acc: dict[tuple, float] = {}

    def add(coef: complex, seq):
        if coef == 0:
            return
        sign, string = fock.canonical_majorana(seq)
        c = coef * sign
        ph = _hermitian_phase(_phase_of(c), len(string))
        key = (ph, string)
        acc[key] = acc.get(key, 0.0) + abs(c)

    for i, j in zip(*np.nonzero(h_sc)):
        a, b = h_sc[i, j].real, h_sc[i, j].imag
        for s in range(2):
            P, Q = 2 * i + s, 2 * j + s
            for c, seq in _x_pair(P, Q):
                add(0.5 * a * c, seq)
            for c, seq in _y_pair(P, Q):
                add(0.5 * b * c, seq)

    for p, q, r, s_ in zip(*np.nonzero(V_sc)):
        a, b = V_sc[p, q, r, s_].real, V_sc[p, q, r, s_].imag
        for s in range(2):
            for t in range(2):
                P, Q, R, S = 2 * p + s, 2 * q + s, 2 * r + t, 2 * s_ + t
                X1, Y1, X2, Y2 = _x_pair(P, Q), _y_pair(P, Q), _x_pair(R, S), _y_pair(R, S)
                for left, right, coef in ((X1, X2, a), (Y1, Y2, -a), (X1, Y2, b), (Y1, X2, b)):
                    for c1, s1 in left:
                        for c2, s2 in right:
                            add(coef * c1 * c2 / 8, s1 + s2)
    keys = sorted(acc, key=lambda k: (len(k[1]), k[1], k[0].real, k[0].imag))
    return [MajoranaTerm(acc[k], k[0], k[1]) for k in keys]


def assemble_sparse(H: KHamiltonian, threshold: float = 0.0, direct: DenseOperator | None = None) -> DenseOperator:
    _check_modes(H.n_modes)
    terms = sparse_lcu_terms(H, threshold)
    basis = fock.MajoranaBasis(H.n_modes)
    op = basis.accumulate((t.weight * t.phase, t.string) for t in terms)
    return _with_shift(op, H, "sparse", direct, threshold=threshold, n_terms=len(terms))


def majorana_unitaries(H: KHamiltonian, terms: list[MajoranaTerm]) -> list[tuple[float, np.ndarray]]:
    basis = fock.MajoranaBasis(H.n_modes)
    return [(t.weight, basis.dense(t.string, t.phase)) for t in terms]


# ---------------------------------------------------------------------------
# single and double factorization


def _square_terms(mats_and_weights, dim: int) -> tuple[np.ndarray, float]:
    """``sum (S²/4) T2(A'/S)`` over ``(single-particle A, S)`` pairs."""
    out = np.zeros((dim, dim), dtype=np.complex128)
    for A, S in mats_and_weights:
        if S == 0:
            continue
        Ap = _one_body_traceless(A)
        out += 0.5 * Ap @ Ap
        out[np.diag_indices(dim)] -= S * S / 4
    return out


def _sf_one_body_mats(H: KHamiltonian, C: CholeskyFactors, q: int, aux: int):
    n, nk = H.n_spatial, H.nk
    m = n * nk
    rho = np.zeros((m, m), dtype=np.complex128)
    for k in range(nk):
        kmq = int(H.mesh.sub_table[k, q])
        rho[k * n:(k + 1) * n, kmq * n:(kmq + 1) * n] += C.L[q, aux, k]
    return 0.5 * (rho + rho.conj().T), 0.5j * (rho - rho.conj().T)


def assemble_sf(H: KHamiltonian, C: CholeskyFactors, direct: DenseOperator | None = None) -> DenseOperator:
    _check_modes(H.n_modes)
    dim = 1 << H.n_modes
    h_sc, _ = supercell_blocks(KHamiltonian(H.mesh, H.n_spatial, effective_one_body(H), H.V))
    S = sf_weights(C)
    pairs = []
    for q in range(H.nk):
        for aux in range(C.M):
            A, B = _sf_one_body_mats(H, C, q, aux)
            pairs += [(A, S[q, aux]), (B, S[q, aux])]
    op = _one_body_traceless(h_sc) + _square_terms(pairs, dim)
    return _with_shift(op, H, "sf", direct, M=C.M, tol=C.tol)


def assemble_df(H: KHamiltonian, D: DFFactors, direct: DenseOperator | None = None) -> DenseOperator:
    _check_modes(H.n_modes)
    dim = 1 << H.n_modes
    h_sc, _ = supercell_blocks(KHamiltonian(H.mesh, H.n_spatial, effective_one_body(H), H.V))
    S = df_weights(D)
    pairs = []
    for q in range(H.nk):
        for aux in range(D.M):
            for j, kind in enumerate("AB"):
                pairs.append((D.one_body_matrix(q, aux, kind), S[q, aux, j]))
    op = _one_body_traceless(h_sc) + _square_terms(pairs, dim)
    return _with_shift(op, H, "df", direct, M=D.M, eigtol=D.eigtol, xi=D.xi)


# ---------------------------------------------------------------------------
# tensor hypercontraction


def thc_pair_matrices(T: THCFactors, q: int) -> dict[tuple[int, int], np.ndarray]:
    """Supercell single-particle matrices of ``ρ_{Q,g,μ}``.

    ``ρ`` has entry ``chi*[k,p,μ] chi[k⊖Q,q,μ]`` at ``((k,p), (k⊖Q,q))`` for
    every k whose G flag is ``g``.
    """
    mesh, n, nk = T.mesh, T.n_spatial, T.mesh.nk
    m = n * nk
    out = {}
    for mu in range(T.M):
        for k in range(nk):
            g = int(mesh.gflag_table[q, k])
            kmq = int(mesh.sub_table[k, q])
            mat = out.setdefault((g, mu), np.zeros((m, m), dtype=np.complex128))
            mat[k * n:(k + 1) * n, kmq * n:(kmq + 1) * n] += np.outer(T.chi[k, :, mu].conj(), T.chi[kmq, :, mu])
    return out


def assemble_thc_two_body(T: THCFactors) -> np.ndarray:
    """``1/2 sum ζ[Q,g1,g2,μ,ν] ρ_{Q,g1,μ} ρ_{Q,g2,ν}^†`` (dense)."""
    n_modes = 2 * T.n_spatial * T.mesh.nk
    _check_modes(n_modes)
    dim = 1 << n_modes
    out = np.zeros((dim, dim), dtype=np.complex128)
    for q in range(T.mesh.nk):
        rho = {key: fock.one_body_operator(mat) for key, mat in thc_pair_matrices(T, q).items()}
        for (g2, nu), r2 in rho.items():
            left = np.zeros((dim, dim), dtype=np.complex128)
            for (g1, mu), r1 in rho.items():
                z = T.zeta[q, g1, g2, mu, nu]
                if z != 0:
                    left += z * r1
            out += 0.5 * left @ r2.conj().T
    return out


def assemble_thc(H: KHamiltonian, T: THCFactors, direct: DenseOperator | None = None) -> DenseOperator:
    _check_modes(H.n_modes)
    h_sc, _ = supercell_blocks(H)
    op = fock.one_body_operator(h_sc) + assemble_thc_two_body(T)
    return _with_shift(op, H, "thc", direct, M=T.M)


def _rotated_majoranas(basis: fock.MajoranaBasis, coeffs: np.ndarray, modes: np.ndarray):
    """Dense ``γ_a0, γ_a1`` for the mode ``a† = sum_j coeffs[j] a†_{modes[j]}``."""
    g0 = np.zeros((basis.dim, basis.dim), dtype=np.complex128)
    g1 = np.zeros_like(g0)
    for c, j in zip(coeffs, modes):
        if c == 0:
            continue
        # γ_a0 = sum Re c γ_j0 + Im c γ_j1,  γ_a1 = sum -Im c γ_j0 + Re c γ_j1
        g0 += c.real * basis.dense((2 * j,)) + c.imag * basis.dense((2 * j + 1,))
        g1 += -c.imag * basis.dense((2 * j,)) + c.real * basis.dense((2 * j + 1,))
    return g0, g1


def thc_lcu_terms(H: KHamiltonian, T: THCFactors) -> list[tuple[float, np.ndarray]]:
    """Unitaries and weights of the THC block encoding.

    One-body: ``λ n = (λ/2) 1 + (λ/2)(2n - 1)`` in the eigenbasis of ``h(k)``.
    Two-body: each ``c†_a c_b = 1/4 sum_{xy} (-i)^x i^y γ_ax γ_by`` with
    rotated Majoranas, real and imaginary parts of ``ζ`` as separate terms.
    """
    _check_modes(H.n_modes)
    mesh, n, nk = H.mesh, H.n_spatial, H.nk
    if (1 << H.n_modes) * nk**3 * (8 * T.M) ** 2 * 64 > THC_TERM_CAP:
        raise DimensionCapError("instance too large for the THC block-encoding check")
    basis = fock.MajoranaBasis(H.n_modes)
    eye = np.eye(basis.dim, dtype=np.complex128)
    terms: list[tuple[float, np.ndarray]] = []

    evals, evecs = np.linalg.eigh(H.h)
    for k in range(nk):
        for j in range(n):
            lam = evals[k, j]
            if lam == 0:
                continue
            for s in range(2):
                modes = 2 * (k * n + np.arange(n)) + s
                # a†_eig = sum_p W[p, j] a†_p
                g0, g1 = _rotated_majoranas(basis, evecs[k][:, j], modes)
                refl = 1j * g0 @ g1  # 2n - 1
                sgn = np.sign(lam)
                terms.append((abs(lam) / 2, sgn * eye))
                terms.append((abs(lam) / 2, sgn * refl))

    chit, norms = T.chi_tilde, T.norms
    gam = {}

    def majoranas(k: int, mu: int, s: int):
        key = (k, mu, s)
        if key not in gam:
            modes = 2 * (k * n + np.arange(n)) + s
            gam[key] = _rotated_majoranas(basis, chit[k, :, mu].conj(), modes)
        return gam[key]

    for q in range(nk):
        for k in range(nk):
            kmq = int(mesh.sub_table[k, q])
            g1 = int(mesh.gflag_table[q, k])
            for k2 in range(nk):
                k2mq = int(mesh.sub_table[k2, q])
                g2 = int(mesh.gflag_table[q, k2])
                for mu in range(T.M):
                    for nu in range(T.M):
                        z = T.zeta[q, g1, g2, mu, nu]
                        w = norms[k, mu] * norms[kmq, mu] * norms[k2mq, nu] * norms[k2, nu]
                        if z == 0 or w == 0:
                            continue
                        for s in range(2):
                            for t in range(2):
                                A = majoranas(k, mu, s)
                                B = majoranas(kmq, mu, s)
                                Cm = majoranas(k2mq, nu, t)
                                Dm = majoranas(k2, nu, t)
                                for x in range(2):
                                    for y in range(2):
                                        for x2 in range(2):
                                            for y2 in range(2):
                                                ph = (-1j) ** x * (1j) ** y * (-1j) ** x2 * (1j) ** y2
                                                U = ph * (A[x] @ B[y] @ Cm[x2] @ Dm[y2])
                                                for part, uph in ((z.real, 1.0), (z.imag, 1j)):
                                                    if part != 0:
                                                        wt = 0.5 * w * abs(part) / 16
                                                        terms.append((wt, np.sign(part) * uph * U))
    return terms


@dataclass
class BlockEncodingReport:
    weight_total: float
    operator_error: float
    unitarity_error: float
    n_terms: int

    def passed(self, lam: float, tol: float = 1e-9) -> bool:
        return (
            self.operator_error <= tol
            and self.unitarity_error <= 1e-10
            and abs(self.weight_total - lam) <= tol * max(1.0, lam)
        )


def check_block_encoding(terms: list[tuple[float, np.ndarray]], target: np.ndarray) -> BlockEncodingReport:
    """``sum w U`` against ``target`` and the unitarity of every ``U``."""
    total = np.zeros_like(target)
    uerr = 0.0
    for w, U in terms:
        total += w * U
        uerr = max(uerr, float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0])))))
    return BlockEncodingReport(
        weight_total=float(np.sum([w for w, _ in terms])),
        operator_error=float(np.max(np.abs(total - target), initial=0.0)),
        unitarity_error=uerr,
        n_terms=len(terms),
    )


# ---------------------------------------------------------------------------
# spectral checks


def spectral_distance(a: DenseOperator, b: DenseOperator) -> float:
    """Largest gap between the shifted spectra of two assemblies."""
    return float(np.max(np.abs(a.shifted_eigvals() - b.shifted_eigvals())))


@dataclass
class LambdaBoundReport:
    norm: float
    lam: float
    tol: float = 1e-9

    @property
    def margin(self) -> float:
        return self.lam + self.tol - self.norm

    @property
    def passed(self) -> bool:
        return self.margin >= 0


def check_lambda_bound(op: DenseOperator, lam: float, tol: float = 1e-9) -> LambdaBoundReport:
    """``λ + tol >= ||H'||_2``."""
    ev = op.eigvals()
    norm = float(np.max(np.abs(ev), initial=0.0))
    return LambdaBoundReport(norm, float(lam), tol)


@dataclass
class WalkReport:
    expected: np.ndarray
    observed: np.ndarray
    max_error: float
    invariance_error: float
    tol: float = 1e-8

    @property
    def passed(self) -> bool:
        return len(self.expected) == len(self.observed) and self.max_error <= self.tol and self.invariance_error <= self.tol


def _validate_terms(terms, tol: float = 1e-10):
    for i, (w, U) in enumerate(terms):
        if w < 0:
            raise InvalidLCUError(f"term {i} has negative weight {w}")
        d = U.shape[0]
        if np.max(np.abs(U.conj().T @ U - np.eye(d))) > tol:
            raise InvalidLCUError(f"term {i} is not unitary")
        if np.max(np.abs(U - U.conj().T)) > tol:
            raise InvalidLCUError(f"term {i} is not self-inverse")


def walk_spectrum(terms: list[tuple[float, np.ndarray]], lam: float | None = None, tol: float = 1e-8) -> WalkReport:
    """Eigenvalues of ``W = R · SELECT`` against ``exp(±i arccos(E/λ))``.

    ``W`` is restricted to the subspace spanned by ``|L>⊗ψ`` and
    ``SELECT |L>⊗ψ``, which it leaves invariant; outside it the walk only has
    eigenvalues ±1 unrelated to ``H``. Eigenvalues are compared on the unit
    circle with an optimal one-to-one assignment.
    """
    _validate_terms(terms)
    weights = np.array([w for w, _ in terms], dtype=float)
    total = float(weights.sum())
    if lam is None:
        lam = total
    if abs(total - lam) > 1e-12 * max(1.0, lam):
        raise InvalidLCUError(f"weights sum to {total}, not λ={lam}")
    d = terms[0][1].shape[0]
    nterm = len(terms)
    if nterm * d > WALK_CAP:
        raise DimensionCapError(f"{nterm} terms x dimension {d} exceeds {WALK_CAP}")
    Us = np.stack([U for _, U in terms])
    amp = np.sqrt(weights / lam)
    Hm = np.einsum("l,lij->ij", weights, Us)
    E = np.linalg.eigvalsh(0.5 * (Hm + Hm.conj().T))

    def select(X):  # X: (nterm, d, c)
        return np.einsum("lij,ljc->lic", Us, X)

    def reflect(X):
        proj = np.einsum("l,lic->ic", amp, X)
        return 2 * amp[:, None, None] * proj[None] - X

    base = np.broadcast_to(amp[:, None, None] * np.eye(d)[None], (nterm, d, d))
    span = np.concatenate([base, select(base)], axis=2).reshape(nterm * d, 2 * d)
    u, s, _ = np.linalg.svd(span, full_matrices=False)
    r = int(np.sum(s > 1e-10 * s[0]))
    B = u[:, :r]
    WB = reflect(select(B.reshape(nterm, d, r))).reshape(nterm * d, r)
    Wr = B.conj().T @ WB
    inv_err = float(np.max(np.abs(WB - B @ Wr), initial=0.0))
    obs = np.linalg.eigvals(Wr)

    x = np.clip(E / lam, -1.0, 1.0)
    exp_list = []
    for xi in x:
        y = np.sqrt(max(0.0, 1.0 - xi * xi))
        if y < 1e-7:
            exp_list.append(complex(np.sign(xi) if xi != 0 else 1.0, 0.0))
        else:
            exp_list += [complex(xi, y), complex(xi, -y)]
    expected = np.array(exp_list)
    if len(expected) != len(obs):
        return WalkReport(expected, obs, float("inf"), inv_err, tol)
    cost = np.abs(expected[:, None] - obs[None, :])
    ri, ci = linear_sum_assignment(cost)
    return WalkReport(expected, obs, float(cost[ri, ci].max(initial=0.0)), inv_err, tol)


# ---------------------------------------------------------------------------
# combined suite


def verify_instance(
    H: KHamiltonian,
    thc: THCFactors | None = None,
    tol: float = 1e-9,
    walk_tol: float = 1e-8,
) -> dict:
    """Equivalence, λ bound and walk checks for every applicable representation.

    Sparse, SF and DF are assembled from ``H`` at zero truncation. THC is
    checked only when exact factors are supplied (``H`` must be their
    reconstruction); its explicit block-encoding check is skipped above
    :data:`THC_TERM_CAP`. The walk check runs for the sparse LCU when it fits under
    :data:`WALK_CAP`, otherwise it is reported as skipped.
    """
    from .factorize import cholesky_sf, double_factorize
    from .lambdas import lambda_df, lambda_sf, lambda_sparse, lambda_thc

    direct = assemble_direct(H)
    C = cholesky_sf(H, 0.0)
    D = double_factorize(C, 0.0)
    ops = {
        "sparse": (assemble_sparse(H, direct=direct), lambda_sparse(H)),
        "sf": (assemble_sf(H, C, direct=direct), lambda_sf(H, C)),
        "df": (assemble_df(H, D, direct=direct), lambda_df(H, D)),
    }
    if thc is not None:
        ops["thc"] = (assemble_thc(H, thc, direct=direct), lambda_thc(H, thc))
    out: dict = {"representations": {}}
    ok = True
    for name, (op, lam) in ops.items():
        dist = spectral_distance(direct, op)
        bound = check_lambda_bound(op, lam.lambda_total, tol)
        herm = op.hermiticity_error()
        passed = dist <= tol and bound.passed and herm <= 1e-10
        ok &= passed
        out["representations"][name] = {
            "spectral_distance": dist,
            "shift": op.shift,
            "lambda_total": lam.lambda_total,
            "norm": bound.norm,
            "lambda_margin": bound.margin,
            "hermiticity_error": herm,
            "passed": bool(passed),
        }
    terms = sparse_lcu_terms(H)
    if len(terms) * direct.dim <= WALK_CAP:
        unitaries = majorana_unitaries(H, terms)
        rep = walk_spectrum(unitaries, ops["sparse"][1].lambda_total, walk_tol)
        out["walk"] = {
            "status": "checked",
            "max_error": rep.max_error,
            "invariance_error": rep.invariance_error,
            "n_terms": len(terms),
            "passed": bool(rep.passed),
        }
        ok &= rep.passed
    else:
        out["walk"] = {"status": "skipped", "n_terms": len(terms), "dim": direct.dim}
    if thc is not None:
        try:
            be = check_block_encoding(thc_lcu_terms(H, thc), ops["thc"][0].matrix)
        except DimensionCapError as exc:
            out["thc_block_encoding"] = {"status": "skipped", "reason": str(exc)}
            out["passed"] = bool(ok)
            return out
        passed = be.passed(ops["thc"][1].lambda_total)
        out["thc_block_encoding"] = {
            "status": "checked",
            "operator_error": be.operator_error,
            "unitarity_error": be.unitarity_error,
            "weight_total": be.weight_total,
            "n_terms": be.n_terms,
            "passed": bool(passed),
        }
        ok &= passed
    out["passed"] = bool(ok)
    return out
