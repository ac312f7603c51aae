"""``qspectral`` command line."""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import sys
from pathlib import Path

import numpy as np

from ..block_encoding import arithmetic_pipeline, encoding_params, resource_estimate
from ..errors import QSpectralError, UsageError
from ..lattice import GridSpec, read_field_bin, read_field_csv, write_field_bin
from ..spectral import build_filter
from .config import load_config
from .experiments import SUITES, run_experiment, run_suite
from .render import emit_energy_trace, emit_heatmap


def run_dir(base: str | Path, command: str) -> Path:
    stamp = _dt.datetime.now().strftime("%Y%m%d-%H%M%S-%f")
    d = Path(base) / f"{stamp}-{command}"
    d.mkdir(parents=True, exist_ok=False)
    return d


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--convention", choices=["signed", "unsigned"])
    p.add_argument("--path", choices=["ideal", "arithmetic"])
    p.add_argument("--t", type=int, help="fixed-point magnitude bits for the arithmetic path")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", default="runs", help="parent directory for the timestamped run directory")


def _overrides(args) -> dict:
    return {"convention": args.convention, "path": args.path, "t": args.t, "seed": args.seed}


def _write_fields(report, out: Path) -> None:
    d = report.config["d"]
    for name, fld in report.fields.items():
        write_field_bin(fld, out / f"{name}.bin")
        if d in (2, 3):
            emit_heatmap(fld, out / f"{name}.svg", slice_index=0 if d == 3 else None, title=name)
    for name in ("u_num", "u_quant"):
        err = report.fields[name] - report.fields["u_true"]
        if d in (2, 3):
            emit_heatmap(err, out / f"abs_error_{name}.svg", 0 if d == 3 else None, "abs", f"|{name} - u_true|")
    if report.energies is not None:
        e = report.energies
        emit_energy_trace(e["classical"], e["E_inf"], out / "energy_trace.csv", overlay=e["quantum"])


def cmd_solve(args) -> int:
    cfg = load_config(args.config).with_overrides(**_overrides(args))
    report = run_experiment(cfg)
    out = run_dir(args.out, "solve")
    (out / "report.json").write_text(report.to_json())
    _write_fields(report, out)
    print(f"numerical_error={report.numerical_error:.3e} quantum_error={report.quantum_error:.3e} "
          f"success_prob={report.success_prob:.3e}")
    print(out)
    return 0


def cmd_suite(args) -> int:
    if args.table.upper() not in SUITES:
        raise UsageError(f"unknown table id {args.table!r}; known: {sorted(SUITES)}")
    out = run_dir(args.out, f"suite-{args.table.upper()}")
    rows = [int(r) for r in args.rows.split(",")] if args.rows else None
    res = run_suite(args.table, out, threads=args.threads, rows=rows, **_overrides(args))
    print(res.to_text(), end="")
    print(out)
    return 0 if not res.failures else 1


def cmd_sweep(args) -> int:
    if args.config:
        cfg = load_config(args.config)
        denoms = build_filter(cfg.kind, cfg.params, cfg.grid, args.convention or cfg.convention).denom.real
    else:
        rng = np.random.default_rng(args.seed if args.seed is not None else 0)
        denoms = rng.uniform(1.0, args.kappa, size=args.modes) * rng.choice([-1.0, 1.0], size=args.modes)
        denoms[0] = 1.0
    out = run_dir(args.out, "sweep-precision")
    rows = []
    for t in range(args.t_min, args.t_max + 1):
        be = arithmetic_pipeline(denoms, t=t)
        be.report.write_csv(out / f"modes_t{t}.csv")
        rows.append([t, be.info["max_abs_error"], be.report.bound, be.eps_bound, be.alpha,
                     be.info["alpha_inverse_cm"], be.info["registers_restored"]])
    with open(out / "sweep.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "max_abs_error", "bound_piM2^-t", "eps_bound", "alpha_eff", "alpha_1_over_cm", "restored"])
        for r in rows:
            w.writerow([repr(float(v)) if isinstance(v, float) else v for v in r])
    for r in rows:
        print(f"t={r[0]:2d} max_err={r[1]:.3e} bound={r[2]:.3e} alpha_eff={r[4]:.12g}")
    print(out)
    return 0


def cmd_resources(args) -> int:
    if args.config:
        cfg = load_config(args.config)
        filt = build_filter(cfg.kind, cfg.params, cfg.grid, args.convention or cfg.convention)
        M, m, grid = filt.M, filt.m, cfg.grid
        eps = cfg.eps
        t = args.t if args.t is not None else cfg.t
    else:
        M, m, grid = args.M, args.M / args.kappa, GridSpec(args.d, args.n)
        eps, t = args.eps, args.t
    params = encoding_params(M, m, eps=eps, t=t)
    print(json.dumps(resource_estimate(params, grid).to_dict(), indent=2, sort_keys=True))
    return 0


def cmd_render(args) -> int:
    out = run_dir(args.out, "render")
    if args.energy:
        with open(args.energy, newline="") as fh:
            energies = [float(r["energy"]) for r in csv.DictReader(fh)]
        if args.e_inf is None:
            raise UsageError("--energy needs --e-inf")
        pts = emit_energy_trace(energies, args.e_inf, out / "energy_trace.csv")
        print(f"{len(pts)} points")
    if args.field:
        src = Path(args.field)
        fld = read_field_bin(src) if src.suffix == ".bin" else read_field_csv(src)
        lo, hi = emit_heatmap(fld, out / f"{src.stem}.{args.format}", args.slice, args.part, src.stem)
        print(f"min={lo:.6g} max={hi:.6g}")
    print(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qspectral", description="Quantum spectral PDE solver experiments")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run one experiment from a JSON config")
    p.add_argument("config")
    _common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("suite", help="reproduce a table")
    p.add_argument("table", help=f"one of {', '.join(sorted(SUITES))}")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--rows", help="comma-separated row indices")
    _common(p)
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("sweep-precision", help="arithmetic-path error versus t")
    p.add_argument("--config")
    p.add_argument("--t-min", type=int, default=8)
    p.add_argument("--t-max", type=int, default=24)
    p.add_argument("--modes", type=int, default=16)
    p.add_argument("--kappa", type=float, default=100.0)
    _common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("resources", help="encoding parameters and gate counts")
    p.add_argument("--config")
    p.add_argument("--M", type=float, default=1.0)
    p.add_argument("--kappa", type=float, default=2.0)
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--n", type=int, default=6)
    _common(p)
    p.set_defaults(func=cmd_resources)

    p = sub.add_parser("render", help="heatmap of a saved field and/or an energy trace")
    p.add_argument("field", nargs="?")
    p.add_argument("--slice", type=int)
    p.add_argument("--part", choices=["real", "abs", "imag"], default="real")
    p.add_argument("--format", choices=["svg", "ppm"], default="svg")
    p.add_argument("--energy", help="energy CSV (step, energy)")
    p.add_argument("--e-inf", type=float)
    _common(p)
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except QSpectralError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
