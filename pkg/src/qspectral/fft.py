"""Unitary discrete Fourier transforms on the lattice.

Two independent routes to the same operator ``F_N^{(x)d}`` with entries
``exp(+2 pi i jk/N) / sqrt(N)`` (the QFT sign):

* ``dft_kron`` contracts the dense 1-D DFT matrix along each axis, i.e. applies
  the Kronecker product ``F_N (x) ... (x) F_N`` without materializing it;
* ``fftn`` runs the radix-2 decimation-in-time butterflies from the kernel backend.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import _kernels


@lru_cache(maxsize=32)
def _dft_matrix_cached(N: int, inverse: bool) -> np.ndarray:
    jk = np.outer(np.arange(N), np.arange(N)) % N
    sign = -1.0 if inverse else 1.0
    m = np.exp(sign * 2j * np.pi * jk / N) / np.sqrt(N)
    m.setflags(write=False)
    return m


def dft_matrix(N: int, inverse: bool = False) -> np.ndarray:
    """Dense unitary DFT matrix; the exponent is reduced mod N before evaluation."""
    return _dft_matrix_cached(int(N), bool(inverse))


def kron_apply(mats, values: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """``(mats[0] (x) mats[1] (x) ...) @ values`` for row-major ``values`` of ``shape``."""
    x = np.asarray(values, dtype=np.complex128).reshape(shape)
    for axis, m in enumerate(mats):
        x = np.moveaxis(np.tensordot(m, x, axes=([1], [axis])), 0, axis)
    return np.ascontiguousarray(x).reshape(-1)


def dft_kron(values: np.ndarray, shape: tuple[int, ...], inverse: bool = False) -> np.ndarray:
    return kron_apply([dft_matrix(N, inverse) for N in shape], values, shape)


def fft_axis(x: np.ndarray, axis: int, inverse: bool = False, backend=None) -> np.ndarray:
    be = backend if backend is not None else _kernels.backend
    moved = np.moveaxis(x, axis, -1)
    rows = np.array(moved, dtype=np.complex128, order="C").reshape(-1, x.shape[axis])  # never in place
    be.fft_rows(rows, inverse)
    return np.moveaxis(rows.reshape(moved.shape), -1, axis)


def fftn(values: np.ndarray, shape: tuple[int, ...], inverse: bool = False, backend=None) -> np.ndarray:
    """Radix-2 unitary transform over every axis of a flat row-major array."""
    for N in shape:
        if N & (N - 1):
            raise ValueError(f"radix-2 transform needs power-of-two sizes, got {N}")
    x = np.asarray(values, dtype=np.complex128).reshape(shape)
    for axis in range(len(shape)):
        x = fft_axis(x, axis, inverse, backend)
    return np.ascontiguousarray(x).reshape(-1)
