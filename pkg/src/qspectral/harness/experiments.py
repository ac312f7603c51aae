"""Experiment runner and the table suites T1..T5."""
from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import _kernels
from ..errors import ConfigError, DegenerateInputError, UsageError
from ..lattice import Field, make_field
from ..quantum_solver import run_diffusion_quantum, solve_quantum
from ..spectral import (
    build_filter,
    coefficient_condition_number,
    energy,
    fft_reference_solve,
    relative_error,
    run_diffusion,
    solve_classical,
)
from .config import ExperimentConfig

SCHEMA_PATH = Path(__file__).with_name("error_report.schema.json")


@dataclass
class ErrorReport:
    config: dict
    cond_A: float | None
    cond_filter: float
    numerical_error: float
    quantum_error: float
    success_prob: float
    resources: dict
    wall_time: float
    alpha: float
    backend: str
    energies: dict | None = None
    fields: dict = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "cond_A": self.cond_A,
            "cond_filter": self.cond_filter,
            "numerical_error": self.numerical_error,
            "quantum_error": self.quantum_error,
            "success_prob": self.success_prob,
            "alpha": self.alpha,
            "energies": self.energies,
            "resources": self.resources,
            "backend": self.backend,
            "wall_time": self.wall_time,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, **kw)


def _field_or_config_error(cfg: ExperimentConfig, entry: str) -> Field:
    f = make_field(cfg.grid, entry)
    if f.norm() == 0.0:
        raise ConfigError(f"catalog field {entry!r} is identically zero") from DegenerateInputError(entry)
    return f


def run_experiment(cfg: ExperimentConfig) -> ErrorReport:
    t0 = time.perf_counter()
    grid = cfg.grid
    f = _field_or_config_error(cfg, cfg.source)
    cond_A = coefficient_condition_number(cfg.A) if cfg.A is not None else None
    filt = build_filter(cfg.kind, cfg.params, grid, cfg.convention)
    energies = None
    if cfg.kind == "diffusion":
        u0 = _field_or_config_error(cfg, cfg.u0)
        u_true = fft_reference_solve("elliptic", {"A": cfg.A}, f, cfg.convention)
        cl = run_diffusion(filt, u0, f, cfg.steps)
        qr = run_diffusion_quantum(cfg.A, cfg.dt, u0, f, cfg.steps, cfg.path, cfg.eps, cfg.convention,
                                   cfg.t, cfg.min_prob)
        qt = qr.trajectory
        u_num, u_quant = cl.final, qt.final
        e_inf = energy(u_true, f, cfg.A, cfg.convention)
        energies = {
            "E_inf": e_inf,
            "classical": [float(e) for e in cl.energies],
            "quantum": [float(e) for e in qt.energies],
            "success_probs": [float(p) for p in qt.success_probs],
        }
        prob = float(qt.success_probs[-1])
        alpha, res = qr.encoding.alpha, qr.resources
    else:
        u_true = fft_reference_solve(cfg.kind, filt, f)
        u_num = solve_classical(filt, f)
        r = solve_quantum(cfg.kind, filt, f, cfg.path, cfg.eps, cfg.convention, cfg.t, cfg.min_prob)
        u_quant, prob, alpha, res = r.u_quant, r.success_prob, r.encoding.alpha, r.resources
    return ErrorReport(
        config=cfg.to_dict(),
        cond_A=cond_A,
        cond_filter=filt.cond,
        numerical_error=relative_error(u_num, u_true),
        quantum_error=relative_error(u_quant, u_true),
        success_prob=prob,
        resources=_jsonable(res.to_dict()),
        wall_time=time.perf_counter() - t0,
        alpha=float(alpha),
        backend=_kernels.BACKEND_NAME,
        energies=energies,
        fields={"u_true": u_true, "u_num": u_num, "u_quant": u_quant, "f": f},
    )


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


# ---------------------------------------------------------------------------
# suites


@dataclass(frozen=True)
class SuiteRow:
    label: str
    value: object  # A matrix or lambda
    cond: float  # tabulated condition number
    numerical: float  # tabulated errors
    quantum: float


def _diag(*v):
    return np.diag(v).tolist()


_A2 = [
    ("I_2", _diag(1, 1)),
    ("[[3,1],[1,2]]", [[3, 1], [1, 2]]),
    ("diag(10,1)", _diag(10, 1)),
    ("diag(100,1)", _diag(100, 1)),
]
_A3_FULL = ("[[3,1,.5],[1,3,1],[.5,1,3]]", [[3, 1, 0.5], [1, 3, 1], [0.5, 1, 3]])

SUITES: dict[str, dict] = {
    "T1": {
        "title": "2D elliptic, N=64",
        "base": {"kind": "elliptic", "d": 2, "n": 6, "source": "cos2pix_sinm4piy"},
        "cond_column": "cond_A",
        "factor": 100.0,
        "rows": [
            SuiteRow(*_A2[0], 1, 1.77e-15, 2.32e-15),
            SuiteRow(*_A2[1], 2.62, 2.25e-15, 2.59e-15),
            SuiteRow(*_A2[2], 10, 2.87e-15, 3.21e-15),
            SuiteRow(*_A2[3], 1e2, 1.83e-14, 2.96e-14),
            SuiteRow("diag(100,0.1)", _diag(100, 0.1), 1e3, 1.96e-14, 6.29e-14),
            SuiteRow("diag(1e5,1)", _diag(1e5, 1), 1e5, 1.75e-11, 2.20e-11),
        ],
    },
    "T2": {
        "title": "3D elliptic, N=16",
        "base": {"kind": "elliptic", "d": 3, "n": 4, "source": "cos2pix_sinm4piy_cos2piz"},
        "cond_column": "cond_A",
        "factor": 100.0,
        "rows": [
            SuiteRow("I_3", _diag(1, 1, 1), 1, 2.24e-14, 2.93e-15),
            SuiteRow(*_A3_FULL, 2.58, 1.2232e-15, 3.12e-15),
            SuiteRow("diag(10,1,1)", _diag(10, 1, 1), 10, 2.95e-15, 6.27e-15),
            SuiteRow("diag(1,100,1)", _diag(1, 100, 1), 1e2, 8.38e-15, 3.47e-14),
            SuiteRow("diag(1,100,0.1)", _diag(1, 100, 0.1), 1e3, 2.65e-14, 3.72e-14),
            SuiteRow("diag(1,1,1e5)", _diag(1, 1, 1e5), 1e5, 2.10e-11, 2.80e-11),
        ],
    },
    "T3": {
        "title": "2D Helmholtz, N=64",
        "base": {"kind": "helmholtz", "d": 2, "n": 6, "source": "cos2pix_sinm4piy", "min_prob": 1e-24},
        "cond_column": "cond_filter",
        "factor": 100.0,
        "rows": [
            SuiteRow("2pi*0.5", 2 * np.pi * 0.5, 4.70e3, 1.35e-15, 1.96e-15),
            SuiteRow("2pi*1e-1", 2 * np.pi * 1e-1, 1.04e4, 1.97e-15, 2.04e-15),
            SuiteRow("2pi*1e-2", 2 * np.pi * 1e-2, 1.04e6, 3.29e-14, 1.16e-13),
            SuiteRow("2pi*1e-3", 2 * np.pi * 1e-3, 1.04e8, 3.30e-12, 1.13e-11),
            SuiteRow("2pi*1e-4", 2 * np.pi * 1e-4, 1.04e10, 3.30e-10, 1.10e-9),
        ],
    },
    "T4": {
        "title": "2D diffusion, dt=1e-3, N=64, T=300",
        "base": {"kind": "diffusion", "d": 2, "n": 6, "source": "cos2pix_sinm4piy", "u0": "u0_multimode",
                 "dt": 1e-3, "steps": 300},
        "cond_column": "cond_filter",
        "factor": 100.0,
        "rows": [
            SuiteRow(*_A2[0], 81.85, 4.60e-14, 5.27e-14),
            SuiteRow(*_A2[1], 283.98, 7.40e-14, 5.67e-14),
            SuiteRow(*_A2[2], 445.68, 1.59e-13, 1.23e-13),
            SuiteRow(*_A2[3], 4.08e3, 1.28e-12, 9.39e-13),
            SuiteRow("diag(1e3,1)", _diag(1e3, 1), 4.05e3, 1.01e-11, 8.74e-12),
            SuiteRow("diag(1e5,1)", _diag(1e5, 1), 4.04e6, 1.23e-9, 9.40e-10),
        ],
    },
    "T5": {
        "title": "3D diffusion, dt=1e-3, N=16, T=400",
        "base": {"kind": "diffusion", "d": 3, "n": 4, "source": "cos2pix_sinm4piy_cos2piz", "u0": "u0_multimode",
                 "dt": 1e-3, "steps": 400},
        "cond_column": "cond_filter",
        "factor": 10.0,
        "rows": [
            SuiteRow("I_3", _diag(1, 1, 1), 31.32, 3.62e-6, 3.22e-6),
            SuiteRow(*_A3_FULL, 142.49, 8.16e-6, 7.84e-6),
            SuiteRow("diag(10,1,1)", _diag(10, 1, 1), 122.28, 7.87e-6, 7.38e-6),
            SuiteRow("diag(1,100,1)", _diag(1, 100, 1), 1.03e3, 2.11e-4, 1.98e-4),
            SuiteRow("diag(1,1,1e3)", _diag(1, 1, 1e3), 1.02e3, 5.27e-4, 4.94e-4),
            SuiteRow("diag(1,1,1e5)", _diag(1, 1, 1e5), 1.01e6, 3.96e-2, 3.71e-2),
        ],
    },
}


def suite_config(table_id: str, index: int, **overrides) -> ExperimentConfig:
    suite = _suite(table_id)
    row = suite["rows"][index]
    base = dict(suite["base"])
    base["lam" if base["kind"] == "helmholtz" else "A"] = row.value
    base["label"] = f"{table_id}:{row.label}"
    base.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig.from_dict(base)


def _suite(table_id: str) -> dict:
    try:
        return SUITES[str(table_id).upper()]
    except KeyError:
        raise UsageError(f"unknown table id {table_id!r}; known: {sorted(SUITES)}") from None


def trend_holds(conds, errors, slack: float = 3.0) -> bool:
    """Errors nondecreasing in cond up to ``slack``: err_j >= err_i / slack whenever cond_i < cond_j."""
    pairs = sorted(zip(conds, errors))
    for j, (cj, ej) in enumerate(pairs):
        for ci, ei in pairs[:j]:
            if ci < cj and ej * slack < ei:
                return False
    return True


@dataclass
class SuiteResult:
    table_id: str
    title: str
    rows: list[SuiteRow]
    reports: list[ErrorReport | None]
    failures: dict[int, str]
    factor: float
    cond_column: str

    def row_cond(self, i: int) -> float | None:
        r = self.reports[i]
        return None if r is None else getattr(r, self.cond_column)

    def within_tolerance(self, i: int) -> bool:
        r = self.reports[i]
        row = self.rows[i]
        return (r is not None and r.numerical_error <= self.factor * row.numerical
                and r.quantum_error <= self.factor * row.quantum)

    @property
    def all_within_tolerance(self) -> bool:
        return all(self.within_tolerance(i) for i in range(len(self.rows)))

    @property
    def trend_ok(self) -> bool:
        idx = [i for i, r in enumerate(self.reports) if r is not None]
        return trend_holds([self.row_cond(i) for i in idx], [self.reports[i].numerical_error for i in idx])

    def records(self) -> list[dict]:
        out = []
        for i, row in enumerate(self.rows):
            r = self.reports[i]
            out.append({
                "row": i,
                "label": row.label,
                "cond_tabulated": row.cond,
                "cond_A": None if r is None else r.cond_A,
                "cond_filter": None if r is None else r.cond_filter,
                "numerical_error": None if r is None else r.numerical_error,
                "quantum_error": None if r is None else r.quantum_error,
                "success_prob": None if r is None else r.success_prob,
                "tabulated_numerical": row.numerical,
                "tabulated_quantum": row.quantum,
                "factor": self.factor,
                "pass": self.within_tolerance(i),
                "error": self.failures.get(i, ""),
            })
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        recs = self.records()
        w = csv.DictWriter(buf, fieldnames=list(recs[0]), lineterminator="\n")
        w.writeheader()
        for rec in recs:
            w.writerow({k: (repr(float(v)) if isinstance(v, float) else v) for k, v in rec.items()})
        return buf.getvalue()

    def to_text(self) -> str:
        head = ["label", "cond (tab)", "cond (ours)", "numerical", "quantum", f"tab num x{self.factor:g}",
                f"tab qnt x{self.factor:g}", "ok"]
        lines = [head]
        for rec in self.records():
            ours = rec[self.cond_column]

            def fmt(v):
                return "-" if v is None else f"{v:.3g}" if isinstance(v, float) else str(v)
            lines.append([
                rec["label"], fmt(float(rec["cond_tabulated"])), fmt(ours), fmt(rec["numerical_error"]),
                fmt(rec["quantum_error"]), fmt(self.factor * rec["tabulated_numerical"]),
                fmt(self.factor * rec["tabulated_quantum"]), "yes" if rec["pass"] else "NO",
            ])
        widths = [max(len(r[c]) for r in lines) for c in range(len(head))]
        out = [f"{self.table_id}: {self.title}"]
        for k, r in enumerate(lines):
            out.append("  ".join(s.ljust(w) for s, w in zip(r, widths)).rstrip())
            if k == 0:
                out.append("  ".join("-" * w for w in widths))
        out.append(f"trend (numerical error vs {self.cond_column}, slack 3): {'ok' if self.trend_ok else 'VIOLATED'}")
        return "\n".join(out) + "\n"

    def write(self, out_dir: str | Path) -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{self.table_id}.csv").write_text(self.to_csv())
        (out / f"{self.table_id}.txt").write_text(self.to_text())
        reports = [None if r is None else r.to_dict() for r in self.reports]
        (out / f"{self.table_id}_reports.json").write_text(json.dumps(reports, indent=2, sort_keys=True))


def run_suite(table_id: str, out_dir: str | Path | None = None, threads: int = 1, rows=None,
              **overrides) -> SuiteResult:
    """Run every row of a table (or the ``rows`` subset); failures are recorded per row."""
    suite = _suite(table_id)
    tid = str(table_id).upper()
    idx = list(range(len(suite["rows"]))) if rows is None else list(rows)

    def one(i):
        try:
            return i, run_experiment(suite_config(tid, i, **overrides)), None
        except Exception as exc:  # recorded, the suite continues
            return i, None, f"{type(exc).__name__}: {exc}"

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, idx))
    else:
        results = [one(i) for i in idx]
    results.sort(key=lambda r: r[0])
    res = SuiteResult(
        tid, suite["title"], [suite["rows"][i] for i in idx], [r[1] for r in results],
        {k: r[2] for k, r in enumerate(results) if r[2] is not None}, suite["factor"], suite["cond_column"],
    )
    if out_dir is not None:
        res.write(out_dir)
    return res
