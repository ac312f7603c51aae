"""Pure numpy implementations of the hot kernels.

All state-vector kernels mutate ``amps`` in place. Qubit 0 is the most
significant bit of the basis index, so reshaping to ``(2,) * nq`` puts
qubit ``j`` on axis ``j``.
"""
from __future__ import annotations

import numpy as np


def _axes_view(amps: np.ndarray, nq: int) -> np.ndarray:
    return amps.reshape((2,) * nq)


def apply_1q(amps: np.ndarray, nq: int, target: int, m: np.ndarray) -> None:
    v = amps.reshape(1 << target, 2, 1 << (nq - target - 1))
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    v[:, 0, :] = m[0, 0] * a0 + m[0, 1] * a1
    v[:, 1, :] = m[1, 0] * a0 + m[1, 1] * a1


def apply_c1q(amps: np.ndarray, nq: int, control: int, target: int, m: np.ndarray) -> None:
    v = _axes_view(amps, nq)
    i0 = [slice(None)] * nq
    i1 = [slice(None)] * nq
    i0[control] = i1[control] = 1
    i0[target] = 0
    i1[target] = 1
    i0, i1 = tuple(i0), tuple(i1)
    a0 = v[i0].copy()
    a1 = v[i1].copy()
    v[i0] = m[0, 0] * a0 + m[0, 1] * a1
    v[i1] = m[1, 0] * a0 + m[1, 1] * a1


def apply_swap(amps: np.ndarray, nq: int, a: int, b: int) -> None:
    v = _axes_view(amps, nq)
    i01 = [slice(None)] * nq
    i10 = [slice(None)] * nq
    i01[a], i01[b] = 0, 1
    i10[a], i10[b] = 1, 0
    i01, i10 = tuple(i01), tuple(i10)
    tmp = v[i01].copy()
    v[i01] = v[i10]
    v[i10] = tmp


def apply_mux(amps: np.ndarray, nq: int, target: int, mats: np.ndarray) -> None:
    """Uniformly controlled 2x2: ``mats[r]`` acts on ``target`` where ``r`` is
    the value of the remaining qubits read MSB-first."""
    hi = 1 << target
    lo = 1 << (nq - target - 1)
    v = amps.reshape(hi, 2, lo)
    m = mats.reshape(hi, lo, 2, 2)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :].copy()
    v[:, 0, :] = m[..., 0, 0] * a0 + m[..., 0, 1] * a1
    v[:, 1, :] = m[..., 1, 0] * a0 + m[..., 1, 1] * a1


def _bitrev_perm(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def fft_rows(x: np.ndarray, inverse: bool = False) -> None:
    """Unitary radix-2 DIT transform of every row of a C-contiguous (B, N) array.

    Forward uses the ``exp(+2 pi i jk / N)`` kernel.
    """
    b, n = x.shape
    if n == 1:
        return
    sign = -1.0 if inverse else 1.0
    y = x[:, _bitrev_perm(n)]
    m = 2
    while m <= n:
        h = m // 2
        tw = np.exp(sign * 2j * np.pi * np.arange(h) / m)
        y = y.reshape(b, n // m, m)
        e = y[:, :, :h]
        o = y[:, :, h:] * tw
        y = np.concatenate((e + o, e - o), axis=2)
        m *= 2
    x[...] = y.reshape(b, n) / np.sqrt(n)
