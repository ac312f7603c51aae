import math

import numpy as np
import pytest

from qspectral.errors import ConfigError, DegenerateInputError, PostSelectionFailure
from qspectral.lattice import Field, GridSpec, make_field
from qspectral.quantum_solver import (
    expected_success_prob,
    postselect_ancilla0,
    run_diffusion_quantum,
    solve_quantum,
    solver_circuit,
)
from qspectral.spectral import (
    build_filter,
    fft_reference_solve,
    filter_diffusion,
    filter_elliptic,
    relative_error,
    run_diffusion,
    solve_classical,
)
from qspectral.statevector import QubitState

from conftest import random_field

PI = math.pi


def test_postselect_examples():
    v = np.array([0.6, 0.8])
    b, p = postselect_ancilla0(QubitState(2, np.concatenate([v, [0, 0]])))
    np.testing.assert_array_equal(b, v)
    assert p == pytest.approx(1.0)
    w = np.array([0.0, 1.0])
    b, p = postselect_ancilla0(QubitState(2, np.concatenate([v, w]) / math.sqrt(2)))
    np.testing.assert_allclose(b, v / math.sqrt(2))
    assert p == pytest.approx(0.5)
    with pytest.raises(PostSelectionFailure):
        postselect_ancilla0(QubitState(2, np.concatenate([[0, 0], w])))


def test_poisson_1d_single_mode():
    g = GridSpec(1, 2)
    x = np.arange(4) / 4
    f = Field(g, np.cos(2 * PI * x))
    r = solve_quantum("elliptic", {"A": [[1.0]]}, f)
    assert relative_error(r.u_quant, Field(g, -np.cos(2 * PI * x) / (4 * PI**2))) <= 1e-12
    assert r.scale_chain == (pytest.approx(f.norm()), pytest.approx(1.0))
    assert 0 < r.success_prob <= 1


def test_table1_first_row():
    g = GridSpec(2, 6)
    f = make_field(g, "cos2pix_sinm4piy")
    r = solve_quantum("elliptic", {"A": np.eye(2)}, f)
    assert relative_error(r.u_quant, fft_reference_solve("elliptic", {"A": np.eye(2)}, f)) <= 1e-13
    assert r.resources.extra["qubits"] == 13
    assert r.resources.gate_counts["MUX"] == 1


def test_identity_filter(rng):
    g = GridSpec(2, 2)
    f = random_field(g, rng, real=False, zero_mean=False)
    filt = build_filter("diffusion", {"A": np.eye(2), "dt": 1e-3}, g)
    filt.diag[:] = 1.0  # identity filter
    r = solve_quantum("diffusion", filt, f)
    np.testing.assert_allclose(r.u_quant.values, f.values, atol=1e-12)
    assert r.success_prob == pytest.approx(1 / r.encoding.alpha**2, abs=1e-12)


@pytest.mark.parametrize("kind,params", [
    ("elliptic", {"A": [[2.0, 0.3], [0.3, 1.0]]}),
    ("helmholtz", {"lam": 2.1}),
    ("diffusion", {"A": [[2.0, 0.3], [0.3, 1.0]], "dt": 1e-2}),
])
def test_success_probability_consistency(kind, params, rng):
    g = GridSpec(2, 3)
    f = random_field(g, rng)
    r = solve_quantum(kind, params, f)
    assert abs(r.success_prob - expected_success_prob(r.filter, r.encoding.alpha, f)) <= 1e-12
    assert abs(r.success_prob - np.sum(np.abs(r.u_quant.values) ** 2) / (r.encoding.alpha * f.norm()) ** 2) <= 1e-12


@pytest.mark.parametrize("conv", ["signed", "unsigned"])
@pytest.mark.parametrize("kind", ["elliptic", "helmholtz", "diffusion"])
@pytest.mark.parametrize("d,n", [(1, 1), (1, 5), (2, 3), (3, 2), (2, 6), (3, 4), (1, 13)])
def test_oracle_equivalence(kind, d, n, conv, rng):
    g = GridSpec(d, n)
    A = np.eye(d) * 1.5 + 0.25 * (np.ones((d, d)) - np.eye(d))
    params = {"elliptic": {"A": A}, "helmholtz": {"lam": 0.9}, "diffusion": {"A": A, "dt": 1e-3}}[kind]
    f = random_field(g, rng)
    filt = build_filter(kind, params, g, conv)
    r = solve_quantum(kind, filt, f)
    assert relative_error(r.u_quant, solve_classical(filt, f)) <= 1e-12


def test_arithmetic_path_solve():
    g = GridSpec(2, 2)
    f = make_field(g, "sin[1,1]")
    filt = filter_elliptic(np.diag([2.0, 1.0]), g)
    exact = solve_classical(filt, f)
    r = solve_quantum("elliptic", filt, f, path="arithmetic", t=30)
    # the encoding error is absolute in filter units, so it is bounded by eps_bound * ||f||
    assert np.linalg.norm(r.u_quant.values - exact.values) <= r.encoding.eps_bound * f.norm()
    assert relative_error(r.u_quant, exact) <= 1e-6
    assert "arithmetic" in r.resources.extra


def test_errors():
    g = GridSpec(2, 2)
    with pytest.raises(DegenerateInputError):
        solve_quantum("helmholtz", {"lam": 1.0}, Field(g, np.zeros(16)))
    with pytest.raises(ConfigError):
        solve_quantum("elliptic", {"A": np.eye(2)}, make_field(g, "constant"))
    with pytest.raises(PostSelectionFailure):
        solve_quantum("helmholtz", {"lam": 1e-5}, make_field(GridSpec(2, 3), "sin[1,1]"))
    with pytest.raises(ConfigError):
        solve_quantum("helmholtz", {"lam": 1.0}, Field(GridSpec(5, 5), np.ones(2**25)))


def test_solver_circuit_layout():
    g = GridSpec(2, 2)
    be = solve_quantum("helmholtz", {"lam": 1.0}, make_field(g, "sin[1,0]")).encoding
    c = solver_circuit(be, 2, 2)
    assert c.q == 5 and c.ancillas == 1
    qft_qubits = {q for gate in c.gates if gate.kind != "MUX" for q in gate.qubits}
    assert 0 not in qft_qubits


def test_diffusion_table4_row():
    g = GridSpec(2, 6)
    A = np.diag([10.0, 1.0])
    f = make_field(g, "cos2pix_sinm4piy")
    u0 = make_field(g, "u0_multimode")
    run = run_diffusion_quantum(A, 1e-3, u0, f, 300)
    traj = run.trajectory
    ustar = fft_reference_solve("elliptic", {"A": A}, f)
    assert relative_error(traj.final, ustar) <= 1e-11
    assert len(traj.success_probs) == 300 and all(0 < p <= 1 for p in traj.success_probs)
    cl = run_diffusion(filter_diffusion(A, 1e-3, g), u0, f, 300)
    assert np.max(np.abs(np.array(cl.energies) - np.array(traj.energies))) <= 1e-9
    assert np.all(np.diff(traj.energies) <= 1e-10)


def test_diffusion_fixed_point():
    g = GridSpec(2, 4)
    A = np.diag([3.0, 1.0])
    f = make_field(g, "cos[1,2]")
    ustar = fft_reference_solve("elliptic", {"A": A}, f)
    traj = run_diffusion_quantum(A, 1e-3, ustar, f, 10).trajectory
    for s in traj.states:
        assert relative_error(s, ustar) <= 1e-11
    assert np.ptp(traj.energies) <= 1e-12
    with pytest.raises(ConfigError):
        run_diffusion_quantum(A, 1e-3, ustar, f, 0)
