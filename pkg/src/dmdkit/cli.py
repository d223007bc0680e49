"""Command-line front end: synthesize data, fit models, sweep, verify.

Subcommands
-----------
synth    write a synthetic forced-plant experiment (snapshots + ground truth)
run      fit dmd | dmdc | cdmd | cdmdc from files and write the model out
sweep    seeded ensembles over one declared axis, long-format CSV output
verify   check the compression identities, exit nonzero on a clean failure

Matrices travel as .cdmc binary files (or .csv); JSON carries complex values
as [real, imag] pairs and refers to matrices by file path.  Omitted ranks
default to the numerical rank of the data being decomposed, which is the
exact choice on noiseless synthetic experiments; pass --r/--r-tilde on noisy
data.  Exit codes: 0 success, 2 usage error, 3 numerical failure,
4 verification failure.  DMDKIT_OUTPUT_DIR names the default output
directory.
"""

from __future__ import annotations

import argparse
import csv
import functools
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .compressive import CompressiveInputs, cdmd, cdmdc
from .cosamp import SparseRecoveryConfig
from .dmd import (
    DmdModel,
    SnapshotSet,
    augmented_factors,
    dmdc_known_b,
    dmdc_unknown_b,
    exact_dmd,
)
from .linalg import numerical_rank
from .measurement import KINDS, MeasurementSpec, build_measurement, operator_from_matrix
from .testbed import (
    add_noise,
    load_matrix,
    load_matrix_csv,
    load_snapshots,
    save_matrix,
    save_snapshots,
    toy_run,
)
from .util import NumericalError, derive_seed
from .verify import (
    actuation_error,
    assumption_scores,
    eig_errors,
    mode_error,
    run_theorem_suite,
    theorem_suite,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_VERIFY = 4

SWEEP_AXES = ("compression", "noise", "measurement")

_SYNTH_NOISE_KEY = 17


class UsageError(ValueError):
    """Bad flag combination or unusable input file."""


# ---------------------------------------------------------------------------
# serialization helpers


def _pairs(values) -> list[list[float | None]]:
    """Complex vector -> [[re, im], ...]; a non-finite real part becomes null
    (the marker for a zero eigenvalue's missing continuous exponent)."""
    out = []
    for v in np.asarray(values, dtype=complex).ravel():
        re = float(v.real)
        out.append([re if np.isfinite(re) else None, float(v.imag)])
    return out


def _unpairs(pairs) -> np.ndarray:
    return np.array(
        [complex(re if re is not None else -np.inf, im) for re, im in pairs]
    )


def _resolve_out(arg: str | None) -> Path:
    out = Path(arg or os.environ.get("DMDKIT_OUTPUT_DIR", "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_any(path: str | Path) -> np.ndarray:
    p = Path(path)
    if not p.exists():
        raise UsageError(f"no such file: {p}")
    return load_matrix_csv(p) if p.suffix == ".csv" else load_matrix(p)


def save_model(model: DmdModel, out: Path, extra: dict | None = None) -> Path:
    """Write model.json plus the referenced matrix files; returns the path."""
    files = {"modes": "modes.cdmc", "atilde": "atilde.cdmc"}
    save_matrix(model.modes, out / files["modes"])
    save_matrix(model.atilde, out / files["atilde"])
    if model.b_hat is not None:
        files["b_hat"] = "b_hat.cdmc"
        save_matrix(model.b_hat, out / files["b_hat"])
    for name in ("modes_compressed", "b_compressed"):
        M = getattr(model, name, None)
        if M is not None:
            files[name] = name + ".cdmc"
            save_matrix(M, out / files[name])
    doc = {
        "algorithm": model.algorithm,
        "branch": getattr(model, "path", None),
        "n": int(model.modes.shape[0]),
        "r": int(model.r),
        "dt": float(model.dt),
        "eigenvalues": _pairs(model.eigs),
        "continuous": _pairs(model.omega),
        "amplitudes": _pairs(model.amplitudes),
        "files": files,
    }
    for name in ("mode_residuals", "b_residuals"):
        resid = getattr(model, name, None)
        if resid is not None:
            doc[name] = [float(v) for v in resid]
    doc.update(extra or {})
    path = out / "model.json"
    path.write_text(json.dumps(doc, indent=2) + "\n")
    return path


def load_model(path: str | Path) -> DmdModel:
    """Rebuild a predictable model from model.json and its matrix files."""
    path = Path(path)
    if path.is_dir():
        path = path / "model.json"
    doc = json.loads(path.read_text())
    base = path.parent
    b_hat = None
    if "b_hat" in doc["files"]:
        b_hat = load_matrix(base / doc["files"]["b_hat"])
    return DmdModel(
        algorithm=doc["algorithm"],
        r=doc["r"],
        dt=doc["dt"],
        atilde=load_matrix(base / doc["files"]["atilde"]),
        eigs=_unpairs(doc["eigenvalues"]),
        omega=_unpairs(doc["continuous"]),
        modes=load_matrix(base / doc["files"]["modes"]),
        amplitudes=_unpairs(doc["amplitudes"]),
        b_hat=b_hat,
    )


def _truth_metrics(truth_path: str | Path, model: DmdModel) -> dict:
    path = Path(truth_path)
    if path.is_dir():
        path = path / "truth.json"
    if not path.exists():
        raise UsageError(f"no such truth manifest: {path}")
    info = json.loads(path.read_text())
    base = path.parent
    eigs_true = _unpairs(info["eigenvalues"])
    modes_true = load_matrix(base / info["files"]["modes"])
    errs = eig_errors(eigs_true, model.eigs)
    metrics = {
        "eig_errors": [float(e) for e in errs],
        "eig_error_max": float(errs.max()),
        "mode_error": mode_error(modes_true, model.modes, eigs_true, model.eigs),
    }
    if model.b_hat is not None:
        b_true = load_matrix(base / info["files"]["b"])
        metrics["b_error"] = actuation_error(b_true, model.b_hat)
    return metrics


# ---------------------------------------------------------------------------
# synth


def cmd_synth(args) -> int:
    out = _resolve_out(args.out)
    run = toy_run(
        n=args.n,
        m=args.steps,
        dt=args.dt,
        seed=args.seed,
        forcing_scale=args.forcing_scale,
    )
    snaps = run.snapshots
    if args.noise > 0.0:
        trajectory = np.column_stack([snaps.X, snaps.Xp[:, -1]])
        noisy = add_noise(trajectory, args.noise, derive_seed(args.seed, _SYNTH_NOISE_KEY))
        snaps = SnapshotSet.from_trajectory(noisy, snaps.dt, snaps.inputs)
    manifest = save_snapshots(snaps, out, format=args.format)
    # truth files are always binary: the modes are complex and have no CSV form
    save_matrix(run.modes_true, out / "modes_true.cdmc")
    save_matrix(run.b_true, out / "b_true.cdmc")
    truth = {
        "eigenvalues": _pairs(run.eigs_true),
        "dt": args.dt,
        "seed": args.seed,
        "noise": args.noise,
        "files": {"modes": "modes_true.cdmc", "b": "b_true.cdmc"},
    }
    (out / "truth.json").write_text(json.dumps(truth, indent=2) + "\n")
    print(
        f"wrote {snaps.n}x{snaps.m} snapshot pairs ({snaps.q} input channels) "
        f"and ground truth to {manifest.parent}"
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# run


def _gather_inputs(args):
    """Resolve snapshots, measured data, operator and dt from the flags."""
    snaps = None
    if args.snapshots:
        snaps = load_snapshots(args.snapshots)
        if args.dt is not None:
            snaps = SnapshotSet(snaps.X, snaps.Xp, snaps.inputs, args.dt)
    dt = args.dt if args.dt is not None else (snaps.dt if snaps is not None else 1.0)

    op = None
    if args.c_file:
        op = operator_from_matrix(_load_any(args.c_file))
    elif args.measurement:
        if args.p is None:
            raise UsageError("--measurement needs --p")
        if snaps is None:
            raise UsageError("--measurement draws C for --snapshots data; without snapshots give --c-file")
        op = build_measurement(MeasurementSpec(args.measurement, args.p, snaps.n, seed=args.c_seed))

    Y = Yp = None
    U = snaps.inputs if snaps is not None else None
    if args.y or args.yp:
        if not (args.y and args.yp):
            raise UsageError("give both --y and --yp")
        Y, Yp = _load_any(args.y), _load_any(args.yp)
        if args.u:
            U = _load_any(args.u)
    elif args.u:
        raise UsageError("--u only makes sense with --y/--yp; snapshot sets carry their own inputs")
    elif op is not None and snaps is not None:
        Y, Yp = op.apply(snaps.X), op.apply(snaps.Xp)
    return snaps, Y, Yp, U, op, dt


def cmd_run(args) -> int:
    out = _resolve_out(args.out)
    snaps, Y, Yp, U, op, dt = _gather_inputs(args)
    B = _load_any(args.b_file) if args.b_file else None
    recovery = None
    if args.sparsity is not None:
        recovery = SparseRecoveryConfig(args.sparsity, max_iterations=args.max_iterations)
    full_state = None
    if snaps is not None and not args.hide_full_state:
        full_state = (snaps.X, snaps.Xp)

    algo = args.algorithm
    scores = None
    if algo in ("dmd", "dmdc"):
        if snaps is None:
            raise UsageError(f"{algo} runs on full-state data: give --snapshots")
        if algo == "dmd":
            r = args.r if args.r is not None else numerical_rank(snaps.X)
            model = exact_dmd(snaps, r)
        else:
            if snaps.inputs is None:
                raise UsageError("dmdc needs a control record in the snapshot set")
            if B is not None:
                r = args.r if args.r is not None else numerical_rank(snaps.X)
                model = dmdc_known_b(snaps, B, r)
            else:
                r = args.r if args.r is not None else numerical_rank(snaps.Xp)
                r_tilde = args.r_tilde
                if r_tilde is None:
                    r_tilde = numerical_rank(np.vstack([snaps.X, snaps.inputs]))
                model = dmdc_unknown_b(snaps, r, r_tilde)
    else:
        if Y is None:
            raise UsageError(
                f"{algo} needs measured data: give --y/--yp, or --snapshots with --measurement/--c-file"
            )
        if algo == "cdmd":
            if B is not None:
                raise UsageError("cdmd has no actuation; --b-file only applies to cdmdc")
            if U is not None:
                print("note: cdmd ignores the control record", file=sys.stderr)
            r = args.r if args.r is not None else numerical_rank(Y)
            ci = CompressiveInputs(
                Y, Yp, dt=dt, C=op, full_state=full_state, r=r, recovery=recovery
            )
            model = cdmd(ci)
        else:
            if U is None:
                raise UsageError("cdmdc needs a control record (--u or snapshot inputs)")
            U = np.atleast_2d(np.asarray(U, dtype=float))
            if B is not None:
                r = args.r if args.r is not None else numerical_rank(Y)
                r_tilde = args.r_tilde
            else:
                r = args.r if args.r is not None else numerical_rank(Yp)
                r_tilde = args.r_tilde
                if r_tilde is None:
                    r_tilde = numerical_rank(np.vstack([Y, U]))
            ci = CompressiveInputs(
                Y,
                Yp,
                dt=dt,
                inputs=U,
                C=op,
                full_state=full_state,
                b_known=B,
                r=r,
                r_tilde=r_tilde,
                recovery=recovery,
            )
            model = cdmdc(ci)
            if full_state is not None and op is not None:
                rt = r_tilde if r_tilde is not None else numerical_rank(np.vstack([Y, U]))
                full = SnapshotSet(full_state[0], full_state[1], U, dt)
                measured = SnapshotSet(Y, Yp, U, dt)
                scores = assumption_scores(
                    augmented_factors(full, model.r, rt),
                    augmented_factors(measured, model.r, rt),
                    full_state[1],
                )

    extra = {"assumption_scores": scores}
    if args.truth:
        extra["metrics"] = _truth_metrics(args.truth, model)
    path = save_model(model, out, extra)
    lead = ", ".join(f"{v:.6g}" for v in model.eigs[:4])
    branch = getattr(model, "path", None)
    branch_note = f" ({branch})" if branch else ""
    print(f"{model.algorithm}{branch_note}: r={model.r}, eigenvalues [{lead}]")
    print(f"wrote {path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep


def _sweep_one(cfg: dict, task: tuple[int, int]) -> list[tuple]:
    i, j = task
    value = cfg["values"][i]
    axis = cfg["axis"]
    n = int(cfg.get("n", 1024))
    m = int(cfg.get("steps", 301))
    dt = float(cfg.get("dt", 0.1))
    kind = str(cfg.get("measurement", "gaussian"))
    p = int(cfg.get("p", max(1, n // 8)))
    eta = float(cfg.get("noise", 0.0))
    if axis == "compression":
        p = max(1, round(float(value) * n))
    elif axis == "noise":
        eta = float(value)
    else:
        kind = str(value)

    seed = derive_seed(int(cfg.get("master_seed", 0)), i, j)
    run = toy_run(
        n=n, m=m, dt=dt,
        seed=derive_seed(seed, 1),
        forcing_scale=float(cfg.get("forcing_scale", 1.0)),
    )
    snaps = run.snapshots
    if eta > 0.0:
        trajectory = np.column_stack([snaps.X, snaps.Xp[:, -1]])
        noisy = add_noise(trajectory, eta, derive_seed(seed, 2))
        snaps = SnapshotSet.from_trajectory(noisy, snaps.dt, snaps.inputs)
    op = build_measurement(MeasurementSpec(kind, p, n, seed=derive_seed(seed, 3)))
    Y, Yp = op.apply(snaps.X), op.apply(snaps.Xp)

    x_known = bool(cfg.get("x_known", True))
    b_known = bool(cfg.get("b_known", False))
    recovery = None
    if not x_known:
        recovery = SparseRecoveryConfig(int(cfg.get("sparsity", 8)))
    ci = CompressiveInputs(
        Y,
        Yp,
        dt=dt,
        inputs=snaps.inputs,
        C=op,
        full_state=(snaps.X, snaps.Xp) if x_known else None,
        b_known=run.b_true if b_known else None,
        r=int(cfg.get("r", run.plant.k)),
        r_tilde=int(cfg.get("r_tilde", run.plant.k + run.plant.q)),
        recovery=recovery,
    )
    model = cdmdc(ci)

    errs = eig_errors(run.eigs_true, model.eigs)
    rows = [
        (axis, value, j, seed, "eig_error_max", float(errs.max())),
        (axis, value, j, seed, "mode_error",
         mode_error(run.modes_true, model.modes, run.eigs_true, model.eigs)),
    ]
    if model.b_hat is not None and not b_known:
        rows.append((axis, value, j, seed, "b_error", actuation_error(run.b_true, model.b_hat)))
    return rows


def cmd_sweep(args) -> int:
    out = _resolve_out(args.out)
    cfg_path = Path(args.config)
    if not cfg_path.exists():
        raise UsageError(f"no such config: {cfg_path}")
    cfg = json.loads(cfg_path.read_text())
    axis = cfg.get("axis")
    if axis not in SWEEP_AXES:
        raise UsageError(f"config axis must be one of {SWEEP_AXES}, got {axis!r}")
    values = cfg.get("values") or []
    if not values:
        raise UsageError("empty sweep axis: config needs a nonempty 'values' list")
    realizations = int(cfg.get("realizations", 1))
    if realizations < 1:
        raise UsageError("realizations must be >= 1")

    tasks = [(i, j) for i in range(len(values)) for j in range(realizations)]
    worker = functools.partial(_sweep_one, cfg)
    if args.workers > 1:
        # BLAS dominates and releases the GIL, so threads parallelize fine;
        # map() keeps the row order deterministic whatever finishes first
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            groups = list(pool.map(worker, tasks))
    else:
        groups = [worker(t) for t in tasks]
    rows = [row for group in groups for row in group]

    sweep_path = out / "sweep.csv"
    with open(sweep_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["axis", "parameter", "realization", "seed", "metric", "value"])
        writer.writerows(rows)

    stats: dict[tuple, list[float]] = {}
    for _, value, _, _, metric, val in rows:
        stats.setdefault((value, metric), []).append(val)
    with open(out / "summary.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["axis", "parameter", "metric", "count", "mean", "median", "p25", "p75"])
        for (value, metric), vals in stats.items():
            a = np.asarray(vals)
            writer.writerow([
                axis, value, metric, len(vals),
                np.mean(a), np.median(a), np.percentile(a, 25), np.percentile(a, 75),
            ])
    print(f"wrote {len(rows)} rows to {sweep_path} (aggregates in summary.csv)")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _print_report_table(cases: list[tuple[str, int | None, list]], advisory: bool) -> None:
    print(f"{'case':<16} {'seed':>4}  {'checks':>6}  {'worst residual':>14}  result")
    for label, seed, reports in cases:
        worst = max(r.residual for r in reports)
        ok = all(r.passed for r in reports)
        seed_txt = "-" if seed is None else str(seed)
        result = "advisory" if advisory else ("pass" if ok else "FAIL")
        print(f"{label:<16} {seed_txt:>4}  {len(reports):>6}  {worst:>14.3e}  {result}")


def cmd_verify(args) -> int:
    out = _resolve_out(args.out)
    file_mode = bool(args.snapshots or args.c_file or args.y or args.yp)
    cases: list[tuple[str, int | None, list]] = []

    if file_mode:
        if not (args.snapshots and args.c_file):
            raise UsageError("file mode needs --snapshots and --c-file")
        snaps = load_snapshots(args.snapshots)
        if snaps.inputs is None:
            raise UsageError("the identity suite needs snapshots with a control record")
        op = operator_from_matrix(_load_any(args.c_file))
        if args.y or args.yp:
            if not (args.y and args.yp):
                raise UsageError("give both --y and --yp")
            Y, Yp = _load_any(args.y), _load_any(args.yp)
            # precondition: the supplied measurements really are C times the
            # supplied state; constructing the inputs runs the spot check
            CompressiveInputs(
                Y, Yp, dt=snaps.dt, inputs=snaps.inputs,
                C=op, full_state=(snaps.X, snaps.Xp),
            )
        r = args.r if args.r is not None else numerical_rank(snaps.Xp)
        r_tilde = args.r_tilde
        if r_tilde is None:
            r_tilde = numerical_rank(np.vstack([snaps.X, snaps.inputs]))
        reports = theorem_suite(snaps, op, r, r_tilde, k_max=args.k_max, horizon=args.horizon)
        cases.append(("files", None, reports))
        advisory = False
    else:
        r = args.r if args.r is not None else 2
        r_tilde = args.r_tilde if args.r_tilde is not None else 3
        for seed in range(args.seeds):
            run = toy_run(n=args.n, m=args.steps, dt=args.dt, seed=seed)
            for kind in args.kinds:
                spec = MeasurementSpec(kind, args.p, args.n, seed=derive_seed(seed, KINDS.index(kind)))
                reports = run_theorem_suite(
                    run, spec, r, r_tilde,
                    k_max=args.k_max, horizon=args.horizon, eta=args.noise,
                )
                cases.append((kind, seed, reports))
        advisory = args.noise > 0.0

    _print_report_table(cases, advisory)
    total = sum(len(reports) for _, _, reports in cases)
    failed = sum(1 for _, _, reports in cases for r in reports if not r.passed)
    doc = {
        "advisory": advisory,
        "cases": [
            {
                "case": label,
                "seed": seed,
                "reports": [r.to_dict() for r in reports],
            }
            for label, seed, reports in cases
        ],
        "checks": total,
        "failed": failed,
    }
    report_path = out / "verify.json"
    report_path.write_text(json.dumps(doc, indent=2) + "\n")
    if advisory:
        print(f"advisory (noisy data): {total - failed}/{total} within the noiseless tolerance")
        print(f"wrote {report_path}")
        return EXIT_OK
    print(f"identities: {total - failed}/{total} within tolerance")
    print(f"wrote {report_path}")
    return EXIT_OK if failed == 0 else EXIT_VERIFY


# ---------------------------------------------------------------------------
# parser and entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dmdkit",
        description="model identification from compressed snapshot measurements",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="generate a synthetic forced experiment")
    synth.add_argument("--out", help="output directory (default $DMDKIT_OUTPUT_DIR or .)")
    synth.add_argument("--n", type=int, default=1024, help="state dimension")
    synth.add_argument("--steps", type=int, default=301, help="number of snapshot pairs")
    synth.add_argument("--dt", type=float, default=0.1)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--forcing-scale", type=float, default=1.0)
    synth.add_argument("--noise", type=float, default=0.0, help="measurement noise level")
    synth.add_argument("--format", choices=("binary", "csv"), default="binary")
    synth.set_defaults(func=cmd_synth)

    run = sub.add_parser("run", help="fit one model from files")
    run.add_argument("algorithm", choices=("dmd", "dmdc", "cdmd", "cdmdc"))
    run.add_argument("--snapshots", help="full-state snapshot manifest or directory")
    run.add_argument("--y", help="measured snapshots Y")
    run.add_argument("--yp", help="measured successors Y'")
    run.add_argument("--u", help="control record (with --y/--yp)")
    run.add_argument("--c-file", help="explicit measurement matrix")
    run.add_argument("--measurement", choices=KINDS, help="draw C of this kind")
    run.add_argument("--p", type=int, help="number of measurements for --measurement")
    run.add_argument("--c-seed", type=int, default=0, help="seed for --measurement")
    run.add_argument("--b-file", help="known actuation matrix")
    run.add_argument("--hide-full-state", action="store_true",
                     help="fit from measurements alone even when full state is on disk")
    run.add_argument("--r", type=int, help="model rank (default: numerical rank)")
    run.add_argument("--r-tilde", type=int, help="stacked-data rank (default: numerical rank)")
    run.add_argument("--sparsity", type=int, help="CoSaMP sparsity for recovery paths")
    run.add_argument("--max-iterations", type=int, default=10, help="CoSaMP iteration cap")
    run.add_argument("--dt", type=float, help="sampling interval (default: manifest dt or 1)")
    run.add_argument("--truth", help="truth manifest; attaches error metrics")
    run.add_argument("--out", help="output directory (default $DMDKIT_OUTPUT_DIR or .)")
    run.set_defaults(func=cmd_run)

    sweep = sub.add_parser("sweep", help="seeded ensemble over one parameter axis")
    sweep.add_argument("--config", required=True, help="JSON sweep configuration")
    sweep.add_argument("--workers", type=int, default=1, help="thread-pool size")
    sweep.add_argument("--out", help="output directory (default $DMDKIT_OUTPUT_DIR or .)")
    sweep.set_defaults(func=cmd_sweep)

    verify = sub.add_parser("verify", help="check the compression identities")
    verify.add_argument("--seeds", type=int, default=3, help="synthetic experiments per kind")
    verify.add_argument("--kinds", nargs="+", choices=KINDS, default=list(KINDS))
    verify.add_argument("--p", type=int, default=128, help="measurements per experiment")
    verify.add_argument("--n", type=int, default=1024)
    verify.add_argument("--steps", type=int, default=301)
    verify.add_argument("--dt", type=float, default=0.1)
    verify.add_argument("--r", type=int, help="model rank (default 2, the toy plant)")
    verify.add_argument("--r-tilde", type=int, help="stacked rank (default 3)")
    verify.add_argument("--noise", type=float, default=0.0,
                        help="noise the data first; reports become advisory")
    verify.add_argument("--k-max", type=int, default=5, help="Markov parameters checked")
    verify.add_argument("--horizon", type=int, default=8, help="controllability horizon")
    verify.add_argument("--snapshots", help="verify these snapshots instead of synthetic ones")
    verify.add_argument("--y", help="measured snapshots to validate against --c-file")
    verify.add_argument("--yp", help="measured successors to validate against --c-file")
    verify.add_argument("--c-file", help="measurement matrix for file mode")
    verify.add_argument("--out", help="output directory (default $DMDKIT_OUTPUT_DIR or .)")
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
