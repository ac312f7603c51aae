"""Compiled and numpy kernels must agree gate by gate."""
import numpy as np
import pytest

from qspectral import _kernels
from qspectral.statevector import ry_matrix

pytestmark = pytest.mark.skipif("cython" not in _kernels.BACKENDS, reason="extension not built")

PY = _kernels.get_backend("python")


def _state(rng, nq):
    v = rng.standard_normal(1 << nq) + 1j * rng.standard_normal(1 << nq)
    return v / np.linalg.norm(v)


def _both(fn_name, rng, nq, *args):
    cy = _kernels.get_backend("cython")
    a = _state(rng, nq)
    b = a.copy()
    getattr(PY, fn_name)(a, nq, *args)
    getattr(cy, fn_name)(b, nq, *args)
    return a, b


@pytest.mark.parametrize("target", [0, 2, 4])
def test_apply_1q(rng, target):
    m = ry_matrix(0.7) @ np.diag([1, 1j])
    a, b = _both("apply_1q", rng, 5, target, m)
    np.testing.assert_allclose(a, b, atol=1e-15)


@pytest.mark.parametrize("control,target", [(0, 3), (3, 0), (1, 2)])
def test_apply_c1q(rng, control, target):
    a, b = _both("apply_c1q", rng, 5, control, target, ry_matrix(1.1))
    np.testing.assert_allclose(a, b, atol=1e-15)


def test_apply_swap(rng):
    a, b = _both("apply_swap", rng, 5, 1, 4)
    np.testing.assert_array_equal(a, b)


@pytest.mark.parametrize("target", [0, 3])
def test_apply_mux(rng, target):
    mats = np.stack([ry_matrix(t) for t in rng.uniform(0, 6, 16)]).astype(complex)
    a, b = _both("apply_mux", rng, 5, target, mats)
    np.testing.assert_allclose(a, b, atol=1e-15)


@pytest.mark.parametrize("inverse", [False, True])
def test_fft_rows(rng, inverse):
    cy = _kernels.get_backend("cython")
    x = rng.standard_normal((3, 64)) + 1j * rng.standard_normal((3, 64))
    y = x.copy()
    PY.fft_rows(x, inverse)
    cy.fft_rows(y, inverse)
    np.testing.assert_allclose(x, y, atol=1e-13)


def test_unknown_backend():
    with pytest.raises(ValueError):
        _kernels.get_backend("fortran")
