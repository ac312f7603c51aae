"""Spectral filters for elliptic, Helmholtz and implicit-diffusion problems,
plus the classical solvers and diagnostics built on them.

Every filter is diagonal in the (unitary, ``+`` sign) Fourier basis of
:mod:`qspectral.fft`; the flat index of a mode is the same as the flat index
of a lattice point, so ``diag[flatten(j)]`` belongs to wavenumber ``k(j)``.
"""
from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .errors import ConfigError, DegenerateReferenceError, ShapeError, SingularFilterError
from .fft import dft_kron, fftn
from .lattice import Field, GridSpec, unflatten_index

TWO_PI = 2.0 * np.pi


class FrequencyConvention(str, enum.Enum):
    SIGNED = "signed"  # k_j = j for j < N/2, else j - N
    UNSIGNED = "unsigned"  # k_j = j, the literal diag(0, 1, ..., N-1)

    @classmethod
    def parse(cls, value) -> "FrequencyConvention":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ConfigError(f"unknown frequency convention {value!r}") from None


class FilterKind(str, enum.Enum):
    ELLIPTIC = "elliptic"
    HELMHOLTZ = "helmholtz"
    DIFFUSION = "diffusion"

    @classmethod
    def parse(cls, value) -> "FilterKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ConfigError(f"unknown problem kind {value!r}") from None


SIGNED = FrequencyConvention.SIGNED
UNSIGNED = FrequencyConvention.UNSIGNED


class CoefficientMatrix:
    """Symmetric positive-definite d x d diffusivity."""

    def __init__(self, A):
        a = np.atleast_2d(np.asarray(A, dtype=np.float64))
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ConfigError(f"coefficient matrix must be square, got shape {a.shape}")
        if np.max(np.abs(a - a.T)) > 1e-12:
            raise ConfigError("coefficient matrix is not symmetric")
        eig = np.linalg.eigvalsh(a)
        if eig[0] <= 0:
            raise ConfigError(f"coefficient matrix is not positive definite (eigenvalues {eig})")
        self.A = a
        self.eigenvalues = eig

    @property
    def d(self) -> int:
        return self.A.shape[0]

    @property
    def cond(self) -> float:
        return float(self.eigenvalues[-1] / self.eigenvalues[0])

    def tolist(self) -> list:
        return self.A.tolist()

    def __repr__(self):
        return f"CoefficientMatrix({self.A.tolist()})"


def as_coefficients(A) -> CoefficientMatrix:
    return A if isinstance(A, CoefficientMatrix) else CoefficientMatrix(A)


def wavenumbers(N: int, convention=SIGNED) -> np.ndarray:
    j = np.arange(N)
    if FrequencyConvention.parse(convention) is SIGNED:
        return np.where(j < N // 2, j, j - N)
    return j


def derivative_diagonal(n: int, convention=SIGNED) -> np.ndarray:
    """Diagonal of the 1-D spectral derivative ``D_N``: ``2 pi i k_j``."""
    if n < 1:
        raise ConfigError("n must be >= 1")
    return 2j * np.pi * wavenumbers(1 << n, convention)


def _axis_arrays(grid: GridSpec, vals: np.ndarray) -> list[np.ndarray]:
    out = []
    for i in range(grid.d):
        shp = [1] * grid.d
        shp[i] = grid.N
        out.append(vals.reshape(shp))
    return out


def _quadratic_form(A: CoefficientMatrix, grid: GridSpec, convention) -> np.ndarray:
    """``sum_ij A_ij D(k_i) D(k_j)`` at every mode, flat."""
    if A.d != grid.d:
        raise ShapeError(f"coefficient matrix is {A.d}x{A.d} but grid has d={grid.d}")
    D = _axis_arrays(grid, derivative_diagonal(grid.n, convention))
    acc = np.zeros(grid.shape, dtype=np.complex128)
    for i in range(grid.d):
        for j in range(grid.d):
            if A.A[i, j] != 0.0:
                acc = acc + A.A[i, j] * (D[i] * D[j])
    return acc.reshape(-1)


@dataclass
class SpectralFilter:
    grid: GridSpec
    diag: np.ndarray
    denom: np.ndarray
    kind: FilterKind
    params: dict[str, Any]
    convention: FrequencyConvention
    cond: float = field(init=False)
    m: float = field(init=False)
    M: float = field(init=False)

    def __post_init__(self):
        mag = np.abs(self.denom)
        self.m = float(mag.min())
        self.M = float(mag.max())
        dmag = np.abs(self.diag)
        self.cond = float(dmag.max() / dmag.min())

    @property
    def dt(self) -> float | None:
        return self.params.get("dt")

    def describe(self) -> dict:
        p = {k: (v.tolist() if isinstance(v, CoefficientMatrix) else v) for k, v in self.params.items()}
        return {
            "kind": self.kind.value,
            "d": self.grid.d,
            "n": self.grid.n,
            "convention": self.convention.value,
            "params": p,
            "cond": self.cond,
            "m": self.m,
            "M": self.M,
        }


def _finish(grid, denom, kind, params, convention) -> SpectralFilter:
    if not np.all(np.isfinite(denom)):
        raise SingularFilterError("non-finite filter denominator")
    scale = np.max(np.abs(denom))
    if np.any(np.abs(denom) <= 1e-14 * scale):
        bad = int(np.argmin(np.abs(denom)))
        raise SingularFilterError(f"filter denominator vanishes at mode {unflatten_index(bad, grid)}")
    return SpectralFilter(grid, 1.0 / denom, denom, kind, params, convention)


def filter_elliptic(A, grid: GridSpec, convention=SIGNED) -> SpectralFilter:
    """Inverse of ``sum A_ij D_i D_j`` regularized by +1 on the all-zero mode."""
    A = as_coefficients(A)
    convention = FrequencyConvention.parse(convention)
    denom = _quadratic_form(A, grid, convention)
    denom[0] += 1.0
    return _finish(grid, denom, FilterKind.ELLIPTIC, {"A": A}, convention)


def filter_helmholtz(lam: float, grid: GridSpec, convention=SIGNED) -> SpectralFilter:
    lam = float(lam)
    if not lam > 0:
        raise ConfigError(f"Helmholtz lambda must be positive, got {lam}")
    convention = FrequencyConvention.parse(convention)
    D = _axis_arrays(grid, derivative_diagonal(grid.n, convention))
    denom = np.full(grid.shape, lam * lam, dtype=np.complex128)
    for Di in D:
        denom = denom + Di * Di
    denom = denom.reshape(-1)
    near = np.abs(denom) < 1e-12 * lam * lam
    if np.any(near):
        bad = int(np.flatnonzero(near)[0])
        raise SingularFilterError(
            f"-lambda^2 = {-lam * lam:.6g} resonates with mode {unflatten_index(bad, grid)}"
        )
    return _finish(grid, denom, FilterKind.HELMHOLTZ, {"lam": lam}, convention)


def filter_diffusion(A, dt: float, grid: GridSpec, convention=SIGNED) -> SpectralFilter:
    """Implicit-Euler filter ``(1 - dt sum A_ij D_i D_j)^-1``."""
    A = as_coefficients(A)
    dt = float(dt)
    if not dt > 0:
        raise ConfigError(f"time step must be positive, got {dt}")
    convention = FrequencyConvention.parse(convention)
    denom = 1.0 - dt * _quadratic_form(A, grid, convention)
    return _finish(grid, denom, FilterKind.DIFFUSION, {"A": A, "dt": dt}, convention)


def build_filter(kind, params: dict, grid: GridSpec, convention=SIGNED) -> SpectralFilter:
    kind = FilterKind.parse(kind)
    try:
        if kind is FilterKind.ELLIPTIC:
            return filter_elliptic(params["A"], grid, convention)
        if kind is FilterKind.HELMHOLTZ:
            return filter_helmholtz(params["lam"], grid, convention)
        return filter_diffusion(params["A"], params["dt"], grid, convention)
    except KeyError as exc:
        raise ConfigError(f"{kind.value} filter needs parameter {exc.args[0]!r}") from None


# ---------------------------------------------------------------------------
# solvers


def _check_source(filt: SpectralFilter, f: Field) -> None:
    if f.grid != filt.grid:
        raise ShapeError(f"field grid {f.grid} does not match filter grid {filt.grid}")
    if filt.kind is FilterKind.ELLIPTIC:
        if abs(f.values.sum()) > 1e-10 * f.grid.size:
            raise ConfigError("elliptic source must be zero-mean on the lattice")


def apply_filter(filt: SpectralFilter, values: np.ndarray, route: str = "kron") -> np.ndarray:
    shape = filt.grid.shape
    if route == "kron":
        return dft_kron(filt.diag * dft_kron(values, shape), shape, inverse=True)
    if route == "fft":
        return fftn(filt.diag * fftn(values, shape), shape, inverse=True)
    raise ValueError(f"unknown route {route!r}")


def solve_classical(filt: SpectralFilter, f: Field) -> Field:
    """Kronecker-DFT solve ``u = F^-1 (G . F f)``; the additive constant is 0."""
    _check_source(filt, f)
    return Field(f.grid, apply_filter(filt, f.values, "kron"))


def fft_reference_solve(kind, params: dict | SpectralFilter, f: Field, convention=SIGNED) -> Field:
    """Same operator as :func:`solve_classical`, evaluated with radix-2 FFTs.

    ``params`` may be a parameter dict (``A``, ``lam``, ``dt``) or a prebuilt filter.
    """
    if isinstance(params, SpectralFilter):
        filt = params
    else:
        filt = build_filter(kind, params, f.grid, convention)
    _check_source(filt, f)
    return Field(f.grid, apply_filter(filt, f.values, "fft"))


def step_implicit(filt: SpectralFilter, u_n: Field, f: Field, dt: float, route: str = "kron") -> Field:
    if filt.kind is not FilterKind.DIFFUSION:
        raise ConfigError(f"implicit step needs a diffusion filter, got {filt.kind.value}")
    if not np.isclose(filt.dt, dt, rtol=1e-15, atol=0):
        raise ConfigError(f"filter built for dt={filt.dt}, step asked for dt={dt}")
    u_n.check_grid(f)
    if u_n.grid != filt.grid:
        raise ShapeError(f"field grid {u_n.grid} does not match filter grid {filt.grid}")
    return Field(u_n.grid, apply_filter(filt, u_n.values - dt * f.values, route))


@dataclass
class DiffusionTrajectory:
    states: list[Field]
    energies: list[float]
    dt: float
    steps: int
    success_probs: list[float] | None = None

    @property
    def final(self) -> Field:
        return self.states[-1]

    def energy_csv(self, path: str | Path) -> None:
        write_energy_csv(self.energies, path)


def run_diffusion(filt: SpectralFilter, u0: Field, f: Field, steps: int, route: str = "kron") -> DiffusionTrajectory:
    """``steps`` implicit-Euler updates; energies[t] = E(u_t) for t = 0..steps."""
    if steps < 1:
        raise ConfigError("steps must be >= 1")
    A = filt.params["A"]
    u = u0
    states = [u]
    energies = [energy(u, f, A, filt.convention)]
    for _ in range(steps):
        u = step_implicit(filt, u, f, filt.dt, route)
        states.append(u)
        energies.append(energy(u, f, A, filt.convention))
    return DiffusionTrajectory(states, energies, filt.dt, steps)


# ---------------------------------------------------------------------------
# diagnostics


def energy(u: Field, f: Field, A, convention=SIGNED) -> float:
    """Parseval evaluation of the integral of (1/2) A grad u . grad u + f u over [0,1)^d."""
    u.check_grid(f)
    A = as_coefficients(A)
    grid = u.grid
    if A.d != grid.d:
        raise ShapeError(f"coefficient matrix is {A.d}x{A.d} but grid has d={grid.d}")
    uh = fftn(u.values, grid.shape)
    fh = fftn(f.values, grid.shape)
    k = _axis_arrays(grid, wavenumbers(grid.N, convention).astype(np.float64))
    form = np.zeros(grid.shape)
    for i in range(grid.d):
        for j in range(grid.d):
            if A.A[i, j] != 0.0:
                form = form + A.A[i, j] * (k[i] * k[j])
    grad = 0.5 * (TWO_PI**2) * np.sum(form.reshape(-1) * np.abs(uh) ** 2)
    src = np.sum(fh * np.conj(uh)).real
    return float((grad + src) / grid.size)


def relative_error(u: Field, u_ref: Field) -> float:
    u.check_grid(u_ref)
    ref = np.linalg.norm(u_ref.values)
    if ref == 0.0:
        raise DegenerateReferenceError("reference field has zero norm")
    return float(np.linalg.norm(u.values - u_ref.values) / ref)


def condition_number(filt: SpectralFilter) -> float:
    d = np.abs(filt.diag)
    return float(d.max() / d.min())


def coefficient_condition_number(A) -> float:
    return as_coefficients(A).cond


# ---------------------------------------------------------------------------
# export


def write_filter_csv(filt: SpectralFilter, path: str | Path) -> None:
    grid = filt.grid
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"j{i + 1}" for i in range(grid.d)] + ["re", "im", "abs_denom"])
        for flat in range(grid.size):
            g = filt.diag[flat]
            w.writerow(unflatten_index(flat, grid) + [repr(float(g.real)), repr(float(g.imag)), repr(float(abs(filt.denom[flat])))])


def write_energy_csv(energies, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["step", "energy"])
        for t, e in enumerate(energies):
            w.writerow([t, repr(float(e))])
