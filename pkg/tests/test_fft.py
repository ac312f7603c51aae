import numpy as np
import pytest

from qspectral import _kernels
from qspectral.fft import dft_kron, dft_matrix, fftn


@pytest.mark.parametrize("N", [2, 4, 8, 64])
def test_dft_matrix_is_unitary_plus_sign(N):
    F = dft_matrix(N)
    np.testing.assert_allclose(F.conj().T @ F, np.eye(N), atol=1e-13)
    assert F[1, 1] == pytest.approx(np.exp(2j * np.pi / N) / np.sqrt(N))


def test_two_point_fft_exact():
    x = np.array([3.0, -1.0], dtype=complex)
    np.testing.assert_array_equal(fftn(x, (2,)), np.array([2.0, 4.0]) / np.sqrt(2))


@pytest.mark.parametrize("shape", [(16,), (8, 4), (4, 4, 4), (64, 64)])
def test_fft_matches_numpy_oracle_and_kron(shape, rng):
    x = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    ref = np.fft.ifftn(x) * np.sqrt(x.size)  # + sign, unitary
    np.testing.assert_allclose(fftn(x.reshape(-1), shape), ref.reshape(-1), atol=1e-12)
    np.testing.assert_allclose(dft_kron(x.reshape(-1), shape), ref.reshape(-1), atol=1e-12)


def test_roundtrip(rng):
    x = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    np.testing.assert_allclose(fftn(fftn(x, (16,)), (16,), inverse=True), x, atol=1e-13)


def test_non_power_of_two_rejected():
    with pytest.raises(ValueError):
        fftn(np.zeros(6), (6,))


@pytest.mark.parametrize("name", sorted(_kernels.BACKENDS))
def test_each_backend_fft(name, rng):
    x = rng.standard_normal(32) + 1j * rng.standard_normal(32)
    got = fftn(x, (32,), backend=_kernels.get_backend(name))
    np.testing.assert_allclose(got, np.fft.ifft(x) * np.sqrt(32), atol=1e-13)
