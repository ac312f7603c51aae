"""Acceptance criteria 1-10. Each test records one PASS/FAIL line shown in the terminal summary."""
import math
import warnings

import numpy as np
import pytest

from conftest import random_field
from qspectral.block_encoding import (
    C_ARCSIN,
    arithmetic_pipeline,
    encode_filter,
    encoding_params,
    u_theta_action,
    u_theta_circuit,
)
from qspectral.fft import dft_kron, dft_matrix
from qspectral.harness import run_suite
from qspectral.lattice import GridSpec
from qspectral.quantum_solver import solve_quantum
from qspectral.spectral import build_filter, fft_reference_solve, filter_diffusion, relative_error, solve_classical
from qspectral.statevector import QubitState, qft_circuit, qft_tensor_circuit, resources, run_circuit

PI = math.pi


@pytest.fixture(scope="module")
def suites():
    return {t: run_suite(t, threads=1) for t in ("T1", "T2", "T3", "T4", "T5")}


def _row_lines(res):
    out = []
    for i, row in enumerate(res.rows):
        r = res.reports[i]
        if r is None:
            out.append(f"  {row.label}: failed ({res.failures[i]})")
            continue
        out.append(f"  {row.label}: num {r.numerical_error:.2e} <= {res.factor * row.numerical:.2e}, "
                   f"quant {r.quantum_error:.2e} <= {res.factor * row.quantum:.2e}, "
                   f"cond {res.row_cond(i):.4g} (tabulated {row.cond:.4g})"
                   f"{'' if res.within_tolerance(i) else '  <-- over'}")
    return out


def test_criterion_01_elliptic_2d(suites, criterion):
    res = suites["T1"]
    print("\n".join(_row_lines(res)))
    ok = res.all_within_tolerance and res.trend_ok
    criterion(1, ok, f"2-D elliptic, 6 rows within x100: {res.all_within_tolerance}, cond trend: {res.trend_ok}")


def test_criterion_02_elliptic_3d(suites, criterion):
    res = suites["T2"]
    print("\n".join(_row_lines(res)))
    criterion(2, res.all_within_tolerance, f"3-D elliptic, 6 rows within x100: {res.all_within_tolerance}")


def test_criterion_03_helmholtz(suites, criterion):
    res = suites["T3"]
    print("\n".join(_row_lines(res)))
    conds = ", ".join(f"{res.row_cond(i):.3g}/{row.cond:.3g}" for i, row in enumerate(res.rows)
                      if res.reports[i] is not None)
    criterion(3, res.all_within_tolerance,
              f"Helmholtz, 5 rows within x100: {res.all_within_tolerance}; cond computed/tabulated: {conds}")


def _energy_checks(res):
    mono, gap = True, 0.0
    for r in res.reports:
        if r is None:
            return False, float("inf")
        for key in ("classical", "quantum"):
            e = np.asarray(r.energies[key])
            mono &= bool(np.all(e[1:] <= e[:-1] + 1e-10))
        gap = max(gap, float(np.max(np.abs(np.subtract(r.energies["classical"], r.energies["quantum"])))))
    return mono, gap


def test_criterion_04_diffusion(suites, criterion):
    t4, t5 = suites["T4"], suites["T5"]
    print("\n".join(_row_lines(t4) + _row_lines(t5)))
    mono4, gap4 = _energy_checks(t4)
    mono5, gap5 = _energy_checks(t5)
    cond = filter_diffusion(np.eye(2), 1e-3, GridSpec(2, 6)).cond
    ok = (t4.all_within_tolerance and t5.all_within_tolerance and mono4 and mono5
          and max(gap4, gap5) <= 1e-9 and abs(cond - 81.85) <= 0.5)
    criterion(4, ok, f"2-D x100: {t4.all_within_tolerance}, 3-D x10: {t5.all_within_tolerance}, "
                     f"energies monotone: {mono4 and mono5}, classical/quantum energy gap {max(gap4, gap5):.1e}, "
                     f"cond(I_2, dt=1e-3, N=64) = {cond:.4f}")


def _random_params(kind, d, rng):
    if kind == "helmholtz":
        return {"lam": float(rng.uniform(0.3, 3.0))}
    B = rng.standard_normal((d, d))
    A = B @ B.T + d * np.eye(d)
    return {"A": A} if kind == "elliptic" else {"A": A, "dt": float(rng.uniform(1e-4, 1e-2))}


def test_criterion_05_oracle_equivalence(criterion):
    worst, cases = 0.0, 0
    for seed in range(50):
        rng = np.random.default_rng(seed)
        for kind in ("elliptic", "helmholtz", "diffusion"):
            for d in (1, 2, 3):
                n = int(rng.integers(1, 10 // d + 1))
                g = GridSpec(d, n)
                params = _random_params(kind, d, rng)
                f = random_field(g, rng, real=bool(seed % 2), zero_mean=True)
                conv = "signed" if seed % 3 else "unsigned"
                filt = build_filter(kind, params, g, conv)
                uq = solve_quantum(kind, filt, f).u_quant
                uc = solve_classical(filt, f)
                uf = fft_reference_solve(kind, filt, f)
                worst = max(worst, relative_error(uq, uc), relative_error(uq, uf), relative_error(uc, uf))
                cases += 1
    criterion(5, worst <= 1e-12, f"{cases} cases, worst pairwise relative difference {worst:.2e} (<= 1e-12)")


def test_criterion_06_qft(criterion):
    worst_qft = max(float(np.max(np.abs(qft_circuit(n).matrix() - dft_matrix(1 << n)))) for n in range(1, 7))
    rng = np.random.default_rng(6)
    worst_tensor = 0.0
    for d in (1, 2, 3):
        for n in range(1, 10 // d + 1):
            g = GridSpec(d, n)
            v = rng.standard_normal(g.size) + 1j * rng.standard_normal(g.size)
            v /= np.linalg.norm(v)
            out = run_circuit(qft_tensor_circuit(n, d), QubitState(d * n, v)).amps
            worst_tensor = max(worst_tensor, float(np.max(np.abs(out - dft_kron(v, g.shape)))))
            if d * n <= 6:
                F = dft_matrix(1 << n)
                K = F
                for _ in range(d - 1):
                    K = np.kron(K, F)
                worst_tensor = max(worst_tensor, float(np.max(np.abs(qft_tensor_circuit(n, d).matrix() - K))))
    ok = worst_qft <= 1e-11 and worst_tensor <= 1e-11
    criterion(6, ok, f"QFT vs F_N (n<=6) {worst_qft:.1e}; tensor QFT vs Kronecker power (n*d<=10) {worst_tensor:.1e}")


def test_criterion_07_binary_angle_rotation(criterion):
    worst, count = 0.0, 0
    for t in range(1, 9):
        U = u_theta_circuit(t).matrix()
        top = 1 << (t + 1)
        idx = np.arange(top)
        s, mag = idx >> t, idx & ((1 << t) - 1)
        th = mag / 2**t
        sign = (-1.0) ** s
        got0, got1 = U[idx, idx], U[top | idx, idx]
        worst = max(worst, float(np.max(np.abs(got0 - sign * np.cos(PI * th)))),
                    float(np.max(np.abs(got1 - sign * np.sin(PI * th)))))
        act = u_theta_action(u_theta_circuit(t), s, mag, t)
        worst = max(worst, float(np.max(np.abs(act[:, 1, 0] - sign * np.sin(PI * th)))))
        count += top
    criterion(7, worst <= 1e-12, f"{count} binary angles for t=1..8, worst deviation {worst:.1e} (<= 1e-12)")


def test_criterion_08_arithmetic_contract(criterion):
    rng = np.random.default_rng(8)
    ok_bound, restored, worst_alpha, stated_gap = True, True, 0.0, 0.0
    ts = np.arange(8, 25)
    errs = np.zeros(len(ts))
    for trial in range(12):
        N = int(rng.choice([1, 2, 4, 8, 16]))
        kappa = float(rng.uniform(1, 100))
        m = float(rng.uniform(0.1, 5))
        D = rng.uniform(m, m * kappa, N) * rng.choice([-1.0, 1.0], N)
        D[0] = math.copysign(m, D[0])
        for k, t in enumerate(ts):
            be = arithmetic_pipeline(D, t=int(t))
            M = float(np.abs(D).max())
            err = float(np.max(np.abs(be.encoded() - 1 / D)))
            ok_bound &= err <= PI * M * 2.0**-t
            restored &= bool(be.info["registers_restored"])
            worst_alpha = max(worst_alpha, abs(be.alpha - 1 / (C_ARCSIN * m)))
            stated_gap = max(stated_gap, abs(be.info["alpha_stated_c_over_m"] - be.alpha))
            errs[k] += np.mean(be.report.abs_error)
    rate = (errs[0] / errs[-1]) ** (1 / (len(ts) - 1))
    ok = ok_bound and restored and worst_alpha <= 1e-10 and rate >= 1.9
    criterion(8, ok, f"error <= pi*M*2^-t for t=8..24: {ok_bound}, registers restored: {restored}, "
                     f"|alpha_eff - 1/(c m)| {worst_alpha:.1e}, |c/m - alpha_eff| up to {stated_gap:.3g}, "
                     f"error shrink per bit {rate:.3f}")


def test_criterion_09_block_contract(criterion):
    worst, count, ok = 0.0, 0, True
    for d, n in [(1, 1), (1, 5), (1, 10), (2, 2), (2, 3), (2, 5), (3, 2), (3, 3)]:
        g = GridSpec(d, n)
        A = np.eye(d) + 0.3 * (np.ones((d, d)) - np.eye(d))
        for kind, params in (("elliptic", {"A": A}), ("helmholtz", {"lam": 1.7}), ("diffusion", {"A": A, "dt": 1e-3})):
            filt = build_filter(kind, params, g)
            for be in (encode_filter(filt, "ideal"), encode_filter(filt, "arithmetic", t=20)):
                e = be.contract_error(filt.diag, dense=True)
                ok &= e <= be.eps_bound
                worst = max(worst, e / be.eps_bound)
                count += 1
    criterion(9, ok, f"{count} encodings (ideal and arithmetic, d*n<=10), max error/eps_bound {worst:.3f}")


def test_criterion_10_resources(criterion):
    ns = np.arange(1, 11)
    counts = np.array([resources(qft_circuit(int(n))).gate_count for n in ns])
    exact = all(c == n * (n + 1) // 2 + n // 2 for n, c in zip(ns, counts))
    even = ns % 2 == 0
    a, b, c0 = np.polyfit(ns[even], counts[even], 2)
    fit = abs(a - 0.5) < 1e-9 and abs(b - 1.0) < 1e-9 and abs(c0) < 1e-9
    formulas = True
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for M in (1.0, 7.5, 300.0, 4.1e4):
            for kappa in (1.0, 2.0, 10.0, 99.0, 1e3):
                for eps in (1e-1, 1e-3, 1e-6, 1e-9):
                    t_want = max(1, math.ceil(math.log2(PI * M / eps)))
                    if t_want > 40:
                        continue
                    p = encoding_params(M, M / kappa, eps=eps)
                    formulas &= p.t == t_want and p.t_prime == t_want + math.ceil(math.log2(kappa))
    ok = exact and fit and formulas
    criterion(10, ok, f"QFT counts n(n+1)/2 + floor(n/2) for n=1..10: {exact}, quadratic fit 0.5n^2+n on even n: "
                      f"{fit}, t and t' formulas: {formulas}")
