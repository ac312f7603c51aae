import math

import numpy as np
import pytest

from qspectral.errors import DegenerateInputError, ValidationError
from qspectral.fft import dft_kron, dft_matrix
from qspectral.lattice import Field, GridSpec, make_field
from qspectral.statevector import (
    CP,
    CRY,
    RY,
    SWAP,
    Circuit,
    H,
    Mux,
    P,
    QubitState,
    Unitary,
    X,
    Z,
    apply_gate,
    circuit_depth,
    prepare_amplitude_state,
    qft_circuit,
    qft_tensor_circuit,
    resources,
    ry_matrix,
    run_circuit,
)


def test_basic_gates():
    s = apply_gate(QubitState.zero(1), H(0))
    np.testing.assert_allclose(s.amps, [1 / math.sqrt(2)] * 2)
    np.testing.assert_array_equal(apply_gate(QubitState.basis(1, 1), Z(0)).amps, [0, -1])
    np.testing.assert_array_equal(apply_gate(QubitState.basis(2, 0b01), SWAP(0, 1)).amps, [0, 0, 1, 0])
    np.testing.assert_array_equal(apply_gate(QubitState.basis(2, 0), X(0)).amps, [0, 0, 1, 0])


def test_qubit0_is_msb():
    s = apply_gate(QubitState.zero(3), X(0))
    assert np.argmax(np.abs(s.amps)) == 0b100


def test_controlled_gates():
    U = Circuit(2).add(CRY(0, 1, 0.8)).matrix()
    want = np.eye(4, dtype=complex)
    want[2:, 2:] = ry_matrix(0.8)
    np.testing.assert_allclose(U, want, atol=1e-15)
    U = Circuit(2).add(CP(1, 0, 0.3)).matrix()
    np.testing.assert_allclose(U, np.diag([1, 1, 1, np.exp(0.3j)]), atol=1e-15)


def test_validation():
    with pytest.raises(ValidationError):
        Unitary(np.array([[1, 1], [0, 1]]), [0])
    with pytest.raises(ValidationError):
        Circuit(2).add(H(2))
    with pytest.raises(ValidationError):
        CP(1, 1, 0.1)
    with pytest.raises(ValidationError):
        Mux(0, np.ones((2, 2, 2)))
    with pytest.raises(ValidationError):
        Circuit(3).add(Mux(0, np.stack([np.eye(2)] * 2)))
    with pytest.raises(ValidationError):
        run_circuit(Circuit(2), QubitState.zero(3))


def test_unitary_block_and_mux():
    rng = np.random.default_rng(5)
    q, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
    c = Circuit(3).add(Unitary(q, [2, 0]))
    U = c.matrix()
    # oracle: q (x) I acts on qubit order (2, 0, 1); move the axes back to (0, 1, 2)
    want = np.kron(q, np.eye(2)).reshape((2,) * 6).transpose(1, 2, 0, 4, 5, 3).reshape(8, 8)
    np.testing.assert_allclose(U, want, atol=1e-14)
    mats = np.stack([ry_matrix(a) for a in (0.1, 0.2, 0.3, 0.4)])
    M = Circuit(3).add(Mux(1, mats)).matrix()
    for r in range(4):
        hi, lo = r >> 1, r & 1
        i0, i1 = (hi << 2) | lo, (hi << 2) | 2 | lo
        np.testing.assert_allclose(M[np.ix_([i0, i1], [i0, i1])], mats[r], atol=1e-15)


@pytest.mark.parametrize("n", range(1, 7))
def test_qft_equals_dft(n):
    np.testing.assert_allclose(qft_circuit(n).matrix(), dft_matrix(1 << n), atol=1e-11)


def test_qft_counts():
    assert [g.kind for g in qft_circuit(1).gates] == ["H"]
    c = resources(qft_circuit(3)).gate_counts
    assert c == {"H": 3, "CP": 3, "SWAP": 1}
    r = resources(qft_circuit(4))
    assert r.gate_counts == {"H": 4, "CP": 6, "SWAP": 2} and r.gate_count == 12
    assert r.depth <= r.gate_count
    t = resources(qft_tensor_circuit(4, 2))
    assert t.gate_count == 24 and t.depth == r.depth
    assert resources(Circuit(1)).gate_count == 0 and resources(Circuit(1)).depth == 0


def test_qft_tensor():
    F4 = dft_matrix(4)
    np.testing.assert_allclose(qft_tensor_circuit(2, 2).matrix(), np.kron(F4, F4), atol=1e-12)
    Hm = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    np.testing.assert_allclose(qft_tensor_circuit(1, 3).matrix(), np.kron(np.kron(Hm, Hm), Hm), atol=1e-14)
    assert circuit_depth(qft_tensor_circuit(4, 2)) == circuit_depth(qft_circuit(4))


def test_prepare_amplitude_state():
    g = GridSpec(2, 1)
    np.testing.assert_array_equal(prepare_amplitude_state(Field(g, [1, 0, 0, 0])).amps, [1, 0, 0, 0])
    np.testing.assert_allclose(prepare_amplitude_state(Field(g, [1, 1, 1, 1])).amps, [0.5] * 4)
    f = make_field(GridSpec(2, 2), "cos2pix_sinm4piy")
    s = prepare_amplitude_state(f)
    np.testing.assert_allclose(s.amps, f.values / np.linalg.norm(f.values), atol=1e-15)
    assert s.scale == pytest.approx(f.norm())
    with pytest.raises(DegenerateInputError):
        prepare_amplitude_state(Field(g, np.zeros(4)))
    a = prepare_amplitude_state(Field(g, [0, 1, 0, 0]), ancillas=1)
    assert a.q == 3 and a.amps[1] == 1


def test_parseval_consistency(rng):
    g = GridSpec(2, 3)
    f = Field(g, rng.standard_normal(64) + 1j * rng.standard_normal(64))
    s = run_circuit(qft_tensor_circuit(3, 2), prepare_amplitude_state(f))
    np.testing.assert_allclose(s.amps, dft_kron(f.values, g.shape) / f.norm(), atol=1e-12)


def test_norm_and_unitarity(rng):
    c = qft_tensor_circuit(2, 3, offset=1)
    c.add(Mux(0, np.stack([ry_matrix(a) for a in rng.uniform(0, 6, 64)])))
    c.add(P(3, 0.4)).add(RY(2, 0.9)).add(CRY(1, 0, 0.2))
    U = c.matrix()
    assert np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))) <= 1e-11
    v = rng.standard_normal(128) + 1j * rng.standard_normal(128)
    out = run_circuit(c, QubitState(7, v / np.linalg.norm(v)))
    assert abs(out.norm() - 1) <= 1e-12
    np.testing.assert_allclose(c.compose(c.inverse()).matrix(), np.eye(128), atol=1e-12)


def test_text_roundtrip():
    c = qft_circuit(3).add(RY(0, 0.25)).add(CRY(2, 1, -1.5)).add(Z(1)).add(X(2))
    text = c.to_text()
    assert "CP 0 1 1.5707963267948966" in text
    back = Circuit.from_text(text)
    assert back.to_text() == text
    np.testing.assert_allclose(back.matrix(), c.matrix(), atol=0)
    with pytest.raises(ValidationError):
        Circuit.from_text("# qubits=1\nMUX 0 U\n")
