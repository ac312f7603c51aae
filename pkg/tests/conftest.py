import numpy as np
import pytest

from qspectral.lattice import Field, GridSpec


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_field(grid: GridSpec, rng, real=True, zero_mean=True) -> Field:
    v = rng.standard_normal(grid.size)
    if not real:
        v = v + 1j * rng.standard_normal(grid.size)
    if zero_mean:
        v = v - v.mean()
    return Field(grid, v)


def nyquist_free(grid: GridSpec, rng) -> Field:
    """Real zero-mean field with no content on any Nyquist index."""
    from qspectral.fft import dft_kron

    f = random_field(grid, rng)
    fh = dft_kron(f.values, grid.shape).reshape(grid.shape)
    for ax in range(grid.d):
        idx = [slice(None)] * grid.d
        idx[ax] = grid.N // 2
        fh[tuple(idx)] = 0.0
    return Field(grid, dft_kron(fh.reshape(-1), grid.shape, inverse=True).real)


_CRITERIA: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(number: int, ok: bool, detail: str) -> None:
        _CRITERIA[number] = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(_CRITERIA[number])
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[k])
