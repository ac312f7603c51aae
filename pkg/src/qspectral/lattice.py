"""Periodic lattice on [0, 1)^d, index maps and the source/initial-condition catalog.

Flat ordering is row-major with axis 1 (x_1) most significant, which is the
Kronecker order ``D_N (x) I_N (x) ...`` and also the qubit order of the
x-register (qubit 0 = MSB).
"""
from __future__ import annotations

import csv
import re
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, ShapeError


@dataclass(frozen=True)
class GridSpec:
    """``d`` dimensions, ``2**n`` points per dimension."""

    d: int
    n: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ConfigError(f"d must be a positive integer, got {self.d!r}")
        if int(self.n) != self.n or self.n < 1:
            raise ConfigError(f"n must be a positive integer, got {self.n!r}")

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def size(self) -> int:
        return 1 << (self.d * self.n)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.d

    @property
    def qubits(self) -> int:
        return self.d * self.n

    def coords(self) -> list[np.ndarray]:
        """Sample coordinates x_i = j_i / N, each broadcast to ``shape``."""
        ax = np.arange(self.N) / self.N
        return list(np.meshgrid(*([ax] * self.d), indexing="ij"))


@dataclass
class Field:
    """Complex samples on the lattice, flat and row-major."""

    grid: GridSpec
    values: np.ndarray
    zero_mean: bool = False

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.complex128).reshape(-1)
        if self.values.size != self.grid.size:
            raise ShapeError(
                f"field has {self.values.size} samples, grid {self.grid} needs {self.grid.size}"
            )

    def as_array(self) -> np.ndarray:
        return self.values.reshape(self.grid.shape)

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def mean(self) -> complex:
        return complex(self.values.mean())

    def real(self) -> np.ndarray:
        return self.values.real.reshape(self.grid.shape)

    def check_grid(self, other: "Field") -> None:
        if self.grid != other.grid:
            raise ShapeError(f"grid mismatch: {self.grid} vs {other.grid}")

    def __add__(self, other: "Field") -> "Field":
        self.check_grid(other)
        return Field(self.grid, self.values + other.values)

    def __sub__(self, other: "Field") -> "Field":
        self.check_grid(other)
        return Field(self.grid, self.values - other.values)

    def scaled(self, s: complex) -> "Field":
        return Field(self.grid, self.values * s, self.zero_mean)


def flatten_index(multi: Sequence[int], grid: GridSpec) -> int:
    if len(multi) != grid.d:
        raise IndexError(f"expected {grid.d} indices, got {len(multi)}")
    flat = 0
    for j in multi:
        if not 0 <= j < grid.N:
            raise IndexError(f"index component {j} outside [0, {grid.N})")
        flat = flat * grid.N + int(j)
    return flat


def unflatten_index(flat: int, grid: GridSpec) -> list[int]:
    if not 0 <= flat < grid.size:
        raise IndexError(f"flat index {flat} outside [0, {grid.size})")
    out = []
    for _ in range(grid.d):
        flat, j = divmod(flat, grid.N)
        out.append(j)
    return out[::-1]


# ---------------------------------------------------------------------------
# catalog

_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class SourceCatalogEntry:
    id: str
    func: Callable[..., np.ndarray] = field(repr=False, compare=False)
    formula: str = ""
    dims: tuple[int, ...] | None = None  # None: any d
    zero_mean: bool = True


def _f2d(x, y, *rest):
    return np.cos(_TWO_PI * x) * np.sin(-2 * _TWO_PI * y)


def _f3d(x, y, z):
    return np.cos(_TWO_PI * x) * np.sin(-2 * _TWO_PI * y) * np.cos(_TWO_PI * z)


def _u0(x, y, *rest):
    return (
        np.cos(_TWO_PI * x) * np.sin(8 * np.pi * y)
        + 2 * np.sin(6 * np.pi * y)
        + 3 * np.sin(10 * np.pi * x) * np.cos(12 * np.pi * y) ** 2
    )


_STATIC: dict[str, SourceCatalogEntry] = {
    e.id: e
    for e in (
        SourceCatalogEntry("cos2pix_sinm4piy", _f2d, "cos(2 pi x) sin(-4 pi y)", (2,)),
        SourceCatalogEntry(
            "cos2pix_sinm4piy_cos2piz", _f3d, "cos(2 pi x) sin(-4 pi y) cos(2 pi z)", (3,)
        ),
        SourceCatalogEntry(
            "u0_multimode",
            _u0,
            "cos(2 pi x) sin(8 pi y) + 2 sin(6 pi y) + 3 sin(10 pi x) cos^2(12 pi y)",
            (2, 3),
        ),
        SourceCatalogEntry("zero", lambda *xs: np.zeros_like(xs[0]), "0"),
        SourceCatalogEntry("constant", lambda *xs: np.ones_like(xs[0]), "1", zero_mean=False),
    )
}

_MODE_RE = re.compile(r"^(cos|sin)\[(-?\d+(?:,-?\d+)*)\]$")


def _mode_entry(entry_id: str) -> SourceCatalogEntry | None:
    m = _MODE_RE.match(entry_id)
    if not m:
        return None
    kind = m.group(1)
    ks = tuple(int(s) for s in m.group(2).split(","))
    trig = np.cos if kind == "cos" else np.sin

    def func(*xs):
        phase = sum(k * x for k, x in zip(ks, xs))
        return trig(_TWO_PI * phase)

    formula = f"{kind}(2 pi ({' + '.join(f'{k} x{i + 1}' for i, k in enumerate(ks))}))"
    return SourceCatalogEntry(
        entry_id, func, formula, (len(ks),), zero_mean=kind == "sin" or any(ks)
    )


def catalog_ids() -> list[str]:
    """Static ids; single Fourier modes are addressed as ``cos[k1,...,kd]`` / ``sin[...]``."""
    return sorted(_STATIC)


def get_entry(entry_id: str) -> SourceCatalogEntry:
    if entry_id in _STATIC:
        return _STATIC[entry_id]
    entry = _mode_entry(entry_id)
    if entry is None:
        raise ConfigError(f"unknown catalog id {entry_id!r}; known: {catalog_ids()} or cos[k..]/sin[k..]")
    return entry


def make_field(grid: GridSpec, entry: SourceCatalogEntry | str) -> Field:
    if isinstance(entry, str):
        entry = get_entry(entry)
    if entry.dims is not None and grid.d not in entry.dims:
        raise ConfigError(f"catalog entry {entry.id!r} is defined for d in {entry.dims}, not {grid.d}")
    vals = np.asarray(entry.func(*grid.coords()), dtype=np.float64)
    return Field(grid, vals.astype(np.complex128), zero_mean=entry.zero_mean)


def mean_project(f: Field) -> Field:
    return Field(f.grid, f.values - f.values.mean(), zero_mean=True)


# ---------------------------------------------------------------------------
# serialization

_BIN_HEADER = struct.Struct("<qq")


def write_field_csv(f: Field, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"j{i + 1}" for i in range(f.grid.d)] + ["re", "im"])
        for flat, v in enumerate(f.values):
            w.writerow(unflatten_index(flat, f.grid) + [repr(float(v.real)), repr(float(v.imag))])


def read_field_csv(path: str | Path) -> Field:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    d = len(rows[0]) - 2
    body = rows[1:]
    N = round(len(body) ** (1.0 / d))
    grid = GridSpec(d, N.bit_length() - 1)
    if grid.N != N or grid.size != len(body):
        raise ShapeError(f"{path}: {len(body)} rows is not a power-of-two lattice in d={d}")
    vals = np.zeros(grid.size, dtype=np.complex128)
    for r in body:
        vals[flatten_index([int(s) for s in r[:d]], grid)] = complex(float(r[d]), float(r[d + 1]))
    return Field(grid, vals)


def write_field_bin(f: Field, path: str | Path) -> None:
    with open(path, "wb") as fh:
        fh.write(_BIN_HEADER.pack(f.grid.d, f.grid.n))
        fh.write(f.values.astype("<c16").tobytes())


def read_field_bin(path: str | Path) -> Field:
    raw = Path(path).read_bytes()
    d, n = _BIN_HEADER.unpack_from(raw)
    grid = GridSpec(d, n)
    vals = np.frombuffer(raw, dtype="<c16", offset=_BIN_HEADER.size)
    if vals.size != grid.size:
        raise ShapeError(f"{path}: expected {grid.size} samples, found {vals.size}")
    return Field(grid, vals.copy())
