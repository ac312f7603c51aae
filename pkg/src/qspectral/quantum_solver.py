"""Full quantum spectral solver: amplitude state, QFT on every axis register,
block-encoded filter, inverse QFT, post-selection on the ancilla.

Layout: the single ancilla is qubit 0, followed by ``d`` registers of ``n``
qubits (axis 1 first). Amplitudes are rescaled back to physical units with
``alpha * ||f||`` after post-selection.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .block_encoding import BlockEncoding, encode_filter, resource_estimate
from .errors import ConfigError, PostSelectionFailure
from .lattice import Field
from .spectral import (
    SIGNED,
    DiffusionTrajectory,
    FilterKind,
    SpectralFilter,
    _check_source,
    build_filter,
    energy,
    filter_diffusion,
)
from .statevector import (
    Circuit,
    QubitState,
    ResourceReport,
    prepare_amplitude_state,
    qft_tensor_circuit,
    resources,
    run_circuit,
)

MAX_QUBITS = 24
MIN_PROB = 1e-14


def postselect_ancilla0(state: QubitState, min_prob: float = MIN_PROB) -> tuple[np.ndarray, float]:
    """Unnormalized ancilla-|0> block of ``state`` and its squared norm."""
    half = state.amps.size // 2
    branch = state.amps[:half].copy()
    prob = float(np.vdot(branch, branch).real)
    if prob < min_prob:
        raise PostSelectionFailure(f"ancilla |0> branch has probability {prob:.3e} < {min_prob:.1e}")
    return branch, prob


def solver_circuit(enc: BlockEncoding, n: int, d: int) -> Circuit:
    """QFT^d, the encoded filter, then the inverse QFT^d."""
    qft = qft_tensor_circuit(n, d, offset=1)
    c = Circuit(qft.q, label=f"spectral_solver[d={d},n={n},{enc.path}]", ancillas=1)
    c.compose(qft)
    c.add(enc.gate)
    c.compose(qft.inverse())
    return c


def _check_size(q: int) -> None:
    if q > MAX_QUBITS:
        raise ConfigError(f"solve needs {q} qubits; the simulator ceiling is {MAX_QUBITS}")


@dataclass
class QuantumSolveResult:
    u_quant: Field
    success_prob: float
    scale_chain: tuple[float, float]
    resources: ResourceReport
    encoding: BlockEncoding = field(repr=False, default=None)
    filter: SpectralFilter = field(repr=False, default=None)


def _resolve_filter(kind, params, grid, convention) -> SpectralFilter:
    if isinstance(params, SpectralFilter):
        if params.grid != grid:
            raise ConfigError(f"filter grid {params.grid} does not match field grid {grid}")
        return params
    return build_filter(kind, params, grid, convention)


def _report(circ: Circuit, enc: BlockEncoding, grid) -> ResourceReport:
    rep = resources(circ)
    rep.extra["qubits"] = circ.q
    rep.extra["path"] = enc.path
    if enc.params is not None:
        rep.extra["arithmetic"] = resource_estimate(enc.params, grid).to_dict()
    return rep


def _apply(circ: Circuit, enc: BlockEncoding, v: Field, min_prob: float, backend=None):
    state = prepare_amplitude_state(v, ancillas=1)
    out = run_circuit(circ, state, backend)
    branch, prob = postselect_ancilla0(out, min_prob)
    return Field(v.grid, branch * (enc.alpha * state.scale)), prob


def solve_quantum(kind, params, f: Field, path: str = "ideal", eps: float | None = None,
                  convention=SIGNED, t: int | None = None, min_prob: float = MIN_PROB,
                  backend=None) -> QuantumSolveResult:
    """``params`` is a parameter dict (``A``, ``lam``) or a prebuilt filter."""
    grid = f.grid
    _check_size(grid.qubits + 1)
    filt = _resolve_filter(kind, params, grid, convention)
    _check_source(filt, f)
    enc = encode_filter(filt, path, eps, t)
    circ = solver_circuit(enc, grid.n, grid.d)
    u, prob = _apply(circ, enc, f, min_prob, backend)
    return QuantumSolveResult(u, prob, (f.norm(), enc.alpha), _report(circ, enc, grid), enc, filt)


@dataclass
class QuantumDiffusionRun:
    trajectory: DiffusionTrajectory
    encoding: BlockEncoding
    filter: SpectralFilter
    resources: ResourceReport


def run_diffusion_quantum(A, dt: float, u0: Field, f: Field, steps: int, path: str = "ideal",
                          eps: float | None = None, convention=SIGNED, t: int | None = None,
                          min_prob: float = MIN_PROB, backend=None) -> QuantumDiffusionRun:
    """Implicit-Euler loop; ``u_n - dt f`` is formed classically before every
    quantum filter application (reading ``u_n`` out of a device would need
    tomography, which is not modelled)."""
    if steps < 1:
        raise ConfigError("steps must be >= 1")
    u0.check_grid(f)
    grid = u0.grid
    _check_size(grid.qubits + 1)
    filt = filter_diffusion(A, dt, grid, convention)
    enc = encode_filter(filt, path, eps, t)
    circ = solver_circuit(enc, grid.n, grid.d)
    A = filt.params["A"]
    u = u0
    states = [u]
    energies = [energy(u, f, A, filt.convention)]
    probs = []
    for _ in range(steps):
        u, p = _apply(circ, enc, Field(grid, u.values - dt * f.values), min_prob, backend)
        states.append(u)
        energies.append(energy(u, f, A, filt.convention))
        probs.append(p)
    traj = DiffusionTrajectory(states, energies, dt, steps, probs)
    return QuantumDiffusionRun(traj, enc, filt, _report(circ, enc, grid))


def expected_success_prob(filt: SpectralFilter, alpha: float, f: Field) -> float:
    """||(G/alpha) f_hat||^2 / ||f_hat||^2."""
    from .fft import dft_kron

    fh = dft_kron(f.values, f.grid.shape)
    return float(np.sum(np.abs(filt.diag / alpha * fh) ** 2) / np.sum(np.abs(fh) ** 2))


__all__ = [
    "FilterKind",
    "MAX_QUBITS",
    "QuantumDiffusionRun",
    "QuantumSolveResult",
    "expected_success_prob",
    "postselect_ancilla0",
    "run_diffusion_quantum",
    "solve_quantum",
    "solver_circuit",
]
