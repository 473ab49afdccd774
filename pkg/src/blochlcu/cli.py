"""Command-line interface.

Subcommands: ``gen``, ``factor``, ``lambda``, ``cost``, ``phys``, ``sweep``,
``verify`` and ``report``. Every artifact embeds the format version, seed and a
hash of the canonical run configuration. Output paths and worker counts are
left out of that hash, so reruns with the same inputs are byte-identical.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 data error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import costmodel, lambdas, oracle, physical
from .factorize import (
    NotPSDError,
    SymmetryViolationError,
    cholesky_sf,
    double_factorize,
    hamiltonian_from_thc,
    read_thc,
    sparsify,
    synthesize_thc,
    write_thc,
)
from .hamiltonian import (
    DataFormatError,
    StructuralError,
    fold_to_supercell,
    generate_synthetic,
    read_hamiltonian,
    read_manifest,
    write_hamiltonian,
)
from .kmesh import Mesh

FORMAT_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3
SWEEP_COLUMNS = [
    "lcu",
    "mesh",
    "supercell",
    "Nk",
    "N",
    "per_step_toffoli",
    "qubits",
    "lambda",
    "iterations",
    "total_toffoli",
]
DATA_ERRORS = (
    DataFormatError,
    StructuralError,
    NotPSDError,
    SymmetryViolationError,
    costmodel.DegenerateInputError,
    physical.InfeasibleError,
    oracle.DimensionCapError,
    oracle.InvalidLCUError,
    FileNotFoundError,
    ValueError,
)
_UNHASHED = {"output", "csv", "workers", "func"}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# provenance and output


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _digest_dir(path: Path) -> str:
    h = hashlib.sha256()
    for f in sorted(p for p in path.iterdir() if p.is_file()):
        h.update(f.name.encode())
        h.update(hashlib.sha256(f.read_bytes()).digest())
    return h.hexdigest()


def _digest_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def run_config(args: argparse.Namespace) -> dict:
    """Canonical configuration: every option except outputs and workers.

    Input paths are replaced by a digest of their contents.
    """
    cfg = {}
    for k, v in sorted(vars(args).items()):
        if k in _UNHASHED:
            continue
        if k == "input" and v is not None:
            p = Path(v)
            v = {"digest": _digest_dir(p) if p.is_dir() else _digest_file(p)}
        elif k == "inputs" and v is not None:
            v = [_digest_file(Path(x)) for x in v]
        elif k == "profile":
            v = {"digest": _digest_file(Path(v) if v else physical.profile_dir() / "default.json")}
        cfg[k] = _jsonable(v)
    return cfg


def provenance(args: argparse.Namespace) -> dict:
    cfg = run_config(args)
    return {
        "config": cfg,
        "config_hash": hashlib.sha256(_canonical(cfg).encode()).hexdigest(),
        "seed": getattr(args, "seed", None),
        "format_version": FORMAT_VERSION,
    }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, Mesh):
        return list(x.dims)
    return x


def emit_json(args, payload: dict) -> None:
    doc = {"provenance": provenance(args), **payload}
    text = json.dumps(_jsonable(doc), sort_keys=True, indent=2) + "\n"
    out = getattr(args, "output", None)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv_text(args, header: list[str], rows: list[dict]) -> str:
    prov = provenance(args)
    buf = io.StringIO()
    buf.write(f"# format_version={prov['format_version']}\n")
    buf.write(f"# config_hash={prov['config_hash']}\n")
    buf.write(f"# seed={prov['seed']}\n")
    w = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def _write_text(path: str | None, text: str) -> None:
    if path:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# parsing helpers


def parse_mesh(text: str) -> Mesh:
    try:
        return Mesh.parse(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"bad mesh {text!r}: {exc}") from None


def parse_mesh_list(text: str) -> list[Mesh]:
    parts = [p for p in text.replace(" ", "").split(";") if p]
    if not parts:
        raise argparse.ArgumentTypeError("empty mesh list")
    return [parse_mesh(p) for p in parts]


def _add_cost_bits(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("cost bit widths")
    g.add_argument("--eps", type=float, default=costmodel.DEFAULT_EPS, help="phase estimation precision (Hartree)")
    g.add_argument("--aleph", type=int, default=costmodel.DEFAULT_ALEPH)
    g.add_argument("--aleph1", type=int, default=costmodel.DEFAULT_ALEPH)
    g.add_argument("--aleph2", type=int, default=costmodel.DEFAULT_ALEPH)
    g.add_argument("--br", type=int, default=costmodel.DEFAULT_BR)
    g.add_argument("--beth", type=int, default=costmodel.DEFAULT_BETH)


def _add_thresholds(p: argparse.ArgumentParser) -> None:
    p.add_argument("--threshold", type=float, default=0.0, help="sparse drop threshold")
    p.add_argument("--tol", type=float, default=1e-8, help="Cholesky residual tolerance")
    p.add_argument("--eigtol", type=float, default=0.0, help="DF eigenvalue cutoff")


def _bits(args) -> dict:
    return dict(
        eps=args.eps,
        aleph=args.aleph,
        aleph1=args.aleph1,
        aleph2=args.aleph2,
        b_r=args.br,
        beth=args.beth,
    )


# ---------------------------------------------------------------------------
# instance loading


def _load(args):
    if not args.input:
        raise UsageError("an input directory is required (-i)")
    path = Path(args.input)
    H = read_hamiltonian(path)
    man = read_manifest(path)
    return H, man, path


def _load_thc(H, man, path):
    info = man.get("provenance", {}).get("thc")
    if not info:
        return None
    return read_thc(path, H.mesh, H.n_spatial, int(info["n_thc"]))


def _factor_summary(method: str, H, man, path, args) -> tuple[dict, lambdas.LambdaReport]:
    if method == "sparse":
        E = sparsify(H, args.threshold)
        lam = lambdas.lambda_sparse_entries(E)
        return {"d": E.d, "n_two_body": E.n_two_body, "n_one_body": E.n_one_body}, lam
    C = cholesky_sf(H, args.tol)
    if method == "sf":
        return {"M": C.M, "ranks": C.ranks.tolist()}, lambdas.lambda_sf(H, C)
    if method == "df":
        D = double_factorize(C, args.eigtol)
        xi_max = max((b.rank for b in D.blocks), default=0)
        info = {"M": C.M, "total_rank": D.total_rank, "xi": D.xi, "xi_max": xi_max}
        return info, lambdas.lambda_df(H, D)
    T = _load_thc(H, man, path)
    if T is None:
        raise DataFormatError(f"{path} holds no THC factors (generate with --thc-rank)")
    return {"M": T.M, "c_thc": T.c_thc}, lambdas.lambda_thc(H, T)


# ---------------------------------------------------------------------------
# commands


def cmd_gen(args) -> int:
    mesh = args.mesh
    prov = provenance(args)
    T = None
    if args.thc_rank:
        T = synthesize_thc(mesh, args.n, args.thc_rank, args.seed, args.decay)
        H = hamiltonian_from_thc(T, seed=args.seed, decay=args.decay)
        prov["thc"] = {"n_thc": args.thc_rank}
    else:
        H = generate_synthetic(mesh, args.n, args.seed, args.decay, args.rank)
    write_hamiltonian(H, args.output, prov)
    if T is not None:
        write_thc(T, args.output)
    return EXIT_OK


def cmd_factor(args) -> int:
    H, man, path = _load(args)
    info, lam = _factor_summary(args.method, H, man, path, args)
    emit_json(args, {"method": args.method, "factorization": info, "lambda": lam.as_dict()})
    return EXIT_OK


def cmd_lambda(args) -> int:
    H, man, path = _load(args)
    methods = ["sparse", "sf", "df", "thc"] if args.method == "all" else [args.method]
    out = {}
    for m in methods:
        if m == "thc" and args.method == "all" and _load_thc(H, man, path) is None:
            continue
        out[m] = _factor_summary(m, H, man, path, args)[1].as_dict()
    emit_json(args, {"lambda": out})
    return EXIT_OK


def _params_from_args(args) -> tuple[costmodel.CostParams, Mesh, int]:
    """Cost parameters plus the source mesh and per-cell spin orbitals."""
    if args.input:
        H, man, path = _load(args)
        mesh, N = H.mesh, H.n_spin_orbitals
        if args.supercell and args.lcu != "thc":
            H = fold_to_supercell(H).to_khamiltonian()
        info, lam = _factor_summary(args.lcu, H, man, path, args)
        P = costmodel.CostParams(
            N=H.n_spin_orbitals,
            mesh=H.mesh,
            lam=lam.lambda_total,
            M=max(1, int(info.get("M", 1))),
            xi=max(1.0, float(info.get("xi", 1.0))),
            xi_max=info.get("xi_max") or None,
            d=max(2, int(info.get("d", 2))),
            **_bits(args),
        )
        if args.supercell and args.lcu == "thc":
            P = costmodel.supercell_params(P)
        return P, mesh, N
    if args.N is None or args.mesh is None or args.lam is None:
        raise UsageError("without -i, --N, --mesh and --lam are required")
    P = costmodel.CostParams(
        N=args.N, mesh=args.mesh, lam=args.lam, M=args.M, xi=args.xi, d=args.d, xi_max=args.xi_max, **_bits(args)
    )
    return (costmodel.supercell_params(P) if args.supercell else P), args.mesh, args.N


def cmd_cost(args) -> int:
    P, mesh, N = _params_from_args(args)
    rep = costmodel.cost(args.lcu, P)
    payload = {"cost": rep.as_dict(), "supercell": bool(args.supercell)}
    emit_json(args, payload)
    if args.csv:
        row = _sweep_row(args.lcu, P, rep, args.supercell, mesh)
        row["N"] = N
        _write_text(args.csv, _csv_text(args, SWEEP_COLUMNS, [row]))
    return EXIT_OK


def cmd_phys(args) -> int:
    prof = physical.load_profile(args.profile)
    rep = physical.estimate_physical(args.toffoli, args.logical, prof)
    emit_json(args, {"profile": prof.as_dict(), "physical": rep.as_dict()})
    return EXIT_OK


def _sweep_row(lcu, P, rep, supercell, mesh) -> dict:
    return {
        "lcu": lcu,
        "mesh": "x".join(str(d) for d in mesh.dims),
        "supercell": int(bool(supercell)),
        "Nk": mesh.nk,
        "N": P.N,
        "per_step_toffoli": rep.per_step,
        "qubits": rep.qubits,
        "lambda": repr(float(P.lam)),
        "iterations": rep.iterations,
        "total_toffoli": rep.total,
    }


def sweep_point(job: tuple) -> dict:
    """One sweep row; module-level so it can run in worker processes."""
    lcu, dims, opts = job
    mesh = Mesh(tuple(dims))
    nk = mesh.nk
    lam = opts["lam"] * nk ** opts["lam_exp"]
    d_exp = 4 if opts["supercell"] else 3
    d = max(2, math.ceil(opts["d_coef"] * opts["N"] ** 4 * nk**d_exp))
    P = costmodel.CostParams(
        N=opts["N"], mesh=mesh, lam=lam, M=opts["M"], xi=opts["xi"], d=d, **opts["bits"]
    )
    if opts["supercell"]:
        P = costmodel.supercell_params(P)
    rep = costmodel.cost(lcu, P)
    row = _sweep_row(lcu, P, rep, opts["supercell"], mesh)
    row["N"] = opts["N"]
    return row


def cmd_sweep(args) -> int:
    opts = {
        "N": args.N,
        "M": args.M,
        "xi": args.xi,
        "lam": args.lam,
        "lam_exp": args.lam_exp,
        "d_coef": args.d_coef,
        "supercell": bool(args.supercell),
        "bits": _bits(args),
    }
    lcus = ["sparse", "sf", "df", "thc"] if args.lcu == "all" else [args.lcu]
    jobs = [(l, m.dims, opts) for l in lcus for m in args.meshes]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as ex:
            rows = list(ex.map(sweep_point, jobs))
    else:
        rows = [sweep_point(j) for j in jobs]
    _write_text(args.output, _csv_text(args, SWEEP_COLUMNS, rows))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.input:
        H, man, path = _load(args)
        T = _load_thc(H, man, path)
    else:
        if args.mesh is None or args.n is None:
            raise UsageError("verify needs -i or both --mesh and --n")
        T = synthesize_thc(args.mesh, args.n, args.thc_rank, args.seed)
        H = hamiltonian_from_thc(T, seed=args.seed)
    res = oracle.verify_instance(H, T, tol=args.tol)
    emit_json(args, {"verify": res})
    return EXIT_OK if res["passed"] else EXIT_FAIL


def read_sweep_csv(path: str | Path) -> list[dict]:
    lines = [l for l in Path(path).read_text().splitlines() if l and not l.startswith("#")]
    rows = list(csv.DictReader(lines))
    if rows and set(SWEEP_COLUMNS) - set(rows[0]):
        raise DataFormatError(f"{path}: missing columns {sorted(set(SWEEP_COLUMNS) - set(rows[0]))}")
    return rows


def fit_exponent(x, y) -> tuple[float, float]:
    """Least-squares slope and intercept of ``log2 y`` against ``log2 x``."""
    lx, ly = np.log2(np.asarray(x, float)), np.log2(np.asarray(y, float))
    A = np.stack([lx, np.ones_like(lx)], axis=1)
    (slope, icpt), *_ = np.linalg.lstsq(A, ly, rcond=None)
    return float(slope), float(icpt)


def cmd_report(args) -> int:
    rows = []
    for p in args.inputs:
        rows += read_sweep_csv(p)
    groups: dict[tuple, list] = {}
    for r in rows:
        nk = int(r["Nk"])
        if args.fit_min_nk is not None and nk < args.fit_min_nk:
            continue
        if args.fit_max_nk is not None and nk > args.fit_max_nk:
            continue
        groups.setdefault((r["lcu"], int(r["supercell"]), int(r["N"])), []).append(r)
    fits = []
    for (lcu, sc, N), grp in sorted(groups.items()):
        nks = sorted({int(r["Nk"]) for r in grp})
        entry = {"lcu": lcu, "supercell": bool(sc), "N": N, "n_points": len(grp), "nk_min": nks[0], "nk_max": nks[-1]}
        if len(nks) >= 2:
            x = [int(r["Nk"]) for r in grp]
            for col in ("per_step_toffoli", "total_toffoli", "qubits"):
                s, c = fit_exponent(x, [float(r[col]) for r in grp])
                entry[f"{col}_exponent"] = s
                entry[f"{col}_intercept"] = c
        fits.append(entry)
    emit_json(args, {"fits": fits, "n_rows": len(rows)})
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="blochlcu", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a seeded synthetic Hamiltonian")
    p.add_argument("--mesh", type=parse_mesh, required=True)
    p.add_argument("--n", type=int, required=True, help="spatial orbitals per cell")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--decay", type=float, default=0.5)
    p.add_argument("--rank", type=int, default=None, help="Gram rank of each V(Q) block")
    p.add_argument("--thc-rank", type=int, default=0, help="build V from THC factors of this rank")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("factor", help="factorize and summarize")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--method", choices=["sparse", "sf", "df", "thc"], required=True)
    _add_thresholds(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("lambda", help="L1 norms")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--method", choices=["sparse", "sf", "df", "thc", "all"], default="all")
    _add_thresholds(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("cost", help="itemized Toffoli and qubit cost")
    p.add_argument("--lcu", choices=sorted(costmodel.COST_FUNCTIONS), required=True)
    p.add_argument("-i", "--input")
    p.add_argument("--supercell", action="store_true")
    p.add_argument("--N", type=int, help="spin orbitals per cell")
    p.add_argument("--mesh", type=parse_mesh)
    p.add_argument("--lam", type=float)
    p.add_argument("--M", type=int, default=1)
    p.add_argument("--xi", type=float, default=1.0)
    p.add_argument("--xi-max", type=int, default=None)
    p.add_argument("--d", type=int, default=2)
    _add_thresholds(p)
    _add_cost_bits(p)
    p.add_argument("-o", "--output")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("phys", help="surface-code translation")
    p.add_argument("--toffoli", type=int, required=True)
    p.add_argument("--logical", type=int, required=True)
    p.add_argument("--profile")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_phys)

    p = sub.add_parser("sweep", help="formula-driven cost sweep over meshes")
    p.add_argument("--lcu", choices=sorted(costmodel.COST_FUNCTIONS) + ["all"], required=True)
    p.add_argument("--meshes", type=parse_mesh_list, required=True, help="e.g. '2,2,2;3,3,3'")
    p.add_argument("--N", type=int, default=8)
    p.add_argument("--M", type=int, default=40)
    p.add_argument("--xi", type=float, default=8.0)
    p.add_argument("--lam", type=float, default=100.0)
    p.add_argument("--lam-exp", type=float, default=0.0, help="lambda grows as Nk**lam_exp")
    p.add_argument("--d-coef", type=float, default=0.125, help="sparse d = coef N^4 Nk^3")
    p.add_argument("--supercell", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    _add_cost_bits(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="dense equivalence, lambda bound and walk checks")
    p.add_argument("-i", "--input")
    p.add_argument("--mesh", type=parse_mesh)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--thc-rank", type=int, default=2)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="merge sweep CSVs and fit exponents")
    p.add_argument("--inputs", nargs="+", required=True)
    p.add_argument("--fit-min-nk", type=int)
    p.add_argument("--fit-max-nk", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_report)
    return ap


def _fail(code: int, kind: str, msg: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": msg}, sort_keys=True) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return int(args.func(args))
    except UsageError as exc:
        return _fail(EXIT_USAGE, "usage", str(exc))
    except DATA_ERRORS as exc:
        return _fail(EXIT_DATA, type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
