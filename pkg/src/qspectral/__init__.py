"""Quantum spectral solvers for constant-coefficient PDEs on the periodic unit torus.

Classical Kronecker/FFT solvers, a state-vector simulator with QFT synthesis,
diagonal block encodings (ideal dilation and a fixed-point arithmetic
pipeline) and the composed quantum solver.
"""
from ._kernels import BACKEND_NAME
from .block_encoding import (
    BinaryAngle,
    BlockEncoding,
    EncodingParams,
    arithmetic_pipeline,
    encode_angle,
    encode_filter,
    encoding_params,
    ideal_dilation,
    resource_estimate,
    u_theta_circuit,
)
from .errors import *  # noqa: F401,F403
from .fft import dft_kron, dft_matrix, fftn
from .lattice import Field, GridSpec, catalog_ids, flatten_index, get_entry, make_field, unflatten_index
from .quantum_solver import (
    QuantumSolveResult,
    postselect_ancilla0,
    run_diffusion_quantum,
    solve_quantum,
)
from .spectral import (
    SIGNED,
    UNSIGNED,
    CoefficientMatrix,
    DiffusionTrajectory,
    FilterKind,
    FrequencyConvention,
    SpectralFilter,
    build_filter,
    condition_number,
    derivative_diagonal,
    energy,
    fft_reference_solve,
    filter_diffusion,
    filter_elliptic,
    filter_helmholtz,
    relative_error,
    run_diffusion,
    solve_classical,
    step_implicit,
)
from .statevector import Circuit, QubitState, prepare_amplitude_state, qft_circuit, qft_tensor_circuit, run_circuit

__version__ = "0.1.0"
