"""Dense state-vector simulator with a flat gate-list circuit IR.

Qubit 0 is the most significant bit of the basis index (the top wire of a
circuit diagram). Circuits carry only gates; simulation goes through the kernel
backend selected in :mod:`qspectral._kernels`.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels
from .errors import DegenerateInputError, ValidationError
from .lattice import Field

UNITARY_TOL = 1e-12

_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def _phase(theta: float) -> np.ndarray:
    return np.array([[1, 0], [0, np.exp(1j * theta)]], dtype=np.complex128)


def ry_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def is_unitary(m: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    m = np.asarray(m)
    if m.ndim == 2:
        return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol)
    # batch of square matrices
    prod = np.einsum("rji,rjk->rik", m.conj(), m)
    return bool(np.max(np.abs(prod - np.eye(m.shape[-1]))) <= tol)


ONE_QUBIT = {"H", "P", "RY", "Z", "X"}
CONTROLLED = {"CP", "CRY"}
KINDS = ONE_QUBIT | CONTROLLED | {"SWAP", "UNITARY", "MUX"}


@dataclass(frozen=True, eq=False)
class Gate:
    kind: str
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    angle: float | None = None
    matrix: np.ndarray | None = field(default=None, repr=False)
    label: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown gate kind {self.kind!r}")
        if set(self.targets) & set(self.controls):
            raise ValidationError(f"{self.kind}: controls {self.controls} overlap targets {self.targets}")
        if len(set(self.targets)) != len(self.targets):
            raise ValidationError(f"{self.kind}: repeated target in {self.targets}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + self.targets

    def matrix2(self) -> np.ndarray:
        """2x2 matrix of single-target kinds (the target action for controlled kinds)."""
        k = self.kind
        if k == "H":
            return _H
        if k == "X":
            return _X
        if k == "Z":
            return _Z
        if k in ("P", "CP"):
            return _phase(self.angle)
        if k in ("RY", "CRY"):
            return ry_matrix(self.angle)
        raise ValidationError(f"{k} has no 2x2 matrix")

    def inverse(self) -> "Gate":
        k = self.kind
        if k in ("H", "X", "Z", "SWAP"):
            return self
        if k in ("P", "CP", "RY", "CRY"):
            return Gate(k, self.targets, self.controls, -self.angle, label=self.label)
        if k == "UNITARY":
            return Gate(k, self.targets, matrix=self.matrix.conj().T, label=self.label + "^dg")
        return Gate(k, self.targets, matrix=np.conj(np.swapaxes(self.matrix, 1, 2)), label=self.label + "^dg")


def H(q: int) -> Gate:
    return Gate("H", (q,))


def X(q: int) -> Gate:
    return Gate("X", (q,))


def Z(q: int) -> Gate:
    return Gate("Z", (q,))


def P(q: int, theta: float) -> Gate:
    return Gate("P", (q,), angle=float(theta))


def RY(q: int, theta: float) -> Gate:
    return Gate("RY", (q,), angle=float(theta))


def CP(control: int, target: int, theta: float) -> Gate:
    return Gate("CP", (target,), (control,), float(theta))


def CRY(control: int, target: int, theta: float) -> Gate:
    return Gate("CRY", (target,), (control,), float(theta))


def SWAP(a: int, b: int) -> Gate:
    return Gate("SWAP", (a, b))


def Unitary(matrix, targets, label: str = "U") -> Gate:
    m = np.asarray(matrix, dtype=np.complex128)
    targets = tuple(int(t) for t in targets)
    if m.shape != (1 << len(targets),) * 2:
        raise ValidationError(f"unitary block shape {m.shape} does not match {len(targets)} targets")
    if not is_unitary(m):
        raise ValidationError(f"block {label!r} is not unitary")
    return Gate("UNITARY", targets, matrix=m, label=label)


def Mux(target: int, mats, label: str = "MUX") -> Gate:
    """Uniformly controlled 2x2 on ``target``; every other qubit of the circuit is a control.

    ``mats[r]`` acts when the remaining qubits, read MSB-first, spell ``r``.
    """
    m = np.ascontiguousarray(mats, dtype=np.complex128)
    if m.ndim != 3 or m.shape[1:] != (2, 2):
        raise ValidationError(f"multiplexed block needs shape (R, 2, 2), got {m.shape}")
    if not is_unitary(m):
        raise ValidationError(f"multiplexed block {label!r} is not unitary")
    return Gate("MUX", (int(target),), matrix=m, label=label)


@dataclass
class Circuit:
    q: int
    gates: list[Gate] = field(default_factory=list)
    label: str = ""
    ancillas: int = 0

    def add(self, gate: Gate) -> "Circuit":
        for qb in gate.qubits:
            if not 0 <= qb < self.q:
                raise ValidationError(f"{gate.kind} touches qubit {qb} outside [0, {self.q})")
        if gate.kind == "MUX" and gate.matrix.shape[0] != 1 << (self.q - 1):
            raise ValidationError(
                f"MUX on {self.q} qubits needs {1 << (self.q - 1)} blocks, got {gate.matrix.shape[0]}"
            )
        self.gates.append(gate)
        return self

    def extend(self, gates) -> "Circuit":
        for g in gates:
            self.add(g)
        return self

    def compose(self, other: "Circuit") -> "Circuit":
        if other.q != self.q:
            raise ValidationError(f"cannot compose {other.q}-qubit circuit onto {self.q} qubits")
        return self.extend(other.gates)

    def inverse(self) -> "Circuit":
        return Circuit(self.q, [g.inverse() for g in reversed(self.gates)], self.label + "^dg", self.ancillas)

    def __len__(self) -> int:
        return len(self.gates)

    def matrix(self) -> np.ndarray:
        """Dense unitary, obtained by running the circuit on the identity as a 2q-qubit vector."""
        dim = 1 << self.q
        buf = np.eye(dim, dtype=np.complex128).reshape(-1)
        _run(self, buf, 2 * self.q, extra=self.q)
        return buf.reshape(dim, dim)

    def to_text(self) -> str:
        lines = [f"# qubits={self.q} ancillas={self.ancillas} label={self.label}"]
        for g in self.gates:
            if g.kind == "SWAP":
                lines.append(f"SWAP {g.targets[0]} {g.targets[1]}")
            elif g.kind in CONTROLLED:
                lines.append(f"{g.kind} {g.targets[0]} {g.controls[0]} {g.angle!r}")
            elif g.kind in ("P", "RY"):
                lines.append(f"{g.kind} {g.targets[0]} {g.angle!r}")
            elif g.kind in ONE_QUBIT:
                lines.append(f"{g.kind} {g.targets[0]}")
            else:
                lines.append(f"{g.kind} {','.join(map(str, g.targets))} {g.label or '-'}")
        return "\n".join(lines) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def from_text(cls, text: str) -> "Circuit":
        q = ancillas = 0
        label = ""
        gates = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    key, _, val = tok.partition("=")
                    if key == "qubits":
                        q = int(val)
                    elif key == "ancillas":
                        ancillas = int(val)
                    elif key == "label":
                        label = val
                continue
            parts = line.split()
            kind = parts[0]
            if kind in ("UNITARY", "MUX"):
                raise ValidationError(f"{kind} lines carry no matrix data and cannot be parsed back")
            if kind == "SWAP":
                gates.append(SWAP(int(parts[1]), int(parts[2])))
            elif kind in CONTROLLED:
                gates.append(Gate(kind, (int(parts[1]),), (int(parts[2]),), float(parts[3])))
            elif kind in ("P", "RY"):
                gates.append(Gate(kind, (int(parts[1]),), angle=float(parts[2])))
            elif kind in ONE_QUBIT:
                gates.append(Gate(kind, (int(parts[1]),)))
            else:
                raise ValidationError(f"unknown gate line {line!r}")
        return cls(q, label=label, ancillas=ancillas).extend(gates)


# ---------------------------------------------------------------------------
# simulation


@dataclass
class QubitState:
    q: int
    amps: np.ndarray
    scale: float = 1.0  # classical norm divided out at preparation

    def __post_init__(self):
        self.amps = np.ascontiguousarray(self.amps, dtype=np.complex128)
        if self.amps.shape != (1 << self.q,):
            raise ValidationError(f"{self.q} qubits need {1 << self.q} amplitudes, got {self.amps.shape}")

    @classmethod
    def zero(cls, q: int) -> "QubitState":
        a = np.zeros(1 << q, dtype=np.complex128)
        a[0] = 1.0
        return cls(q, a)

    @classmethod
    def basis(cls, q: int, index: int) -> "QubitState":
        a = np.zeros(1 << q, dtype=np.complex128)
        a[index] = 1.0
        return cls(q, a)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


def _apply_raw(be, buf: np.ndarray, nq: int, gate: Gate, extra: int = 0) -> None:
    k = gate.kind
    if k in ONE_QUBIT:
        be.apply_1q(buf, nq, gate.targets[0], gate.matrix2())
    elif k in CONTROLLED:
        be.apply_c1q(buf, nq, gate.controls[0], gate.targets[0], gate.matrix2())
    elif k == "SWAP":
        be.apply_swap(buf, nq, gate.targets[0], gate.targets[1])
    elif k == "MUX":
        mats = gate.matrix
        if extra:
            mats = np.ascontiguousarray(np.repeat(mats, 1 << extra, axis=0))
        be.apply_mux(buf, nq, gate.targets[0], mats)
    else:  # UNITARY: dense k-qubit block, not a hot path
        t = list(gate.targets)
        kq = len(t)
        v = buf.reshape((2,) * nq)
        blk = gate.matrix.reshape((2,) * (2 * kq))
        out = np.tensordot(blk, v, axes=(list(range(kq, 2 * kq)), t))
        v[...] = np.moveaxis(out, list(range(kq)), t)


def _run(circuit: Circuit, buf: np.ndarray, nq: int, extra: int = 0, backend=None) -> None:
    be = backend if backend is not None else _kernels.backend
    for g in circuit.gates:
        _apply_raw(be, buf, nq, g, extra)


def apply_gate(state: QubitState, gate: Gate, backend=None) -> QubitState:
    for qb in gate.qubits:
        if not 0 <= qb < state.q:
            raise ValidationError(f"{gate.kind} touches qubit {qb} outside [0, {state.q})")
    if gate.kind == "UNITARY" and not is_unitary(gate.matrix):
        raise ValidationError("non-unitary block")
    buf = state.amps.copy()
    _apply_raw(backend if backend is not None else _kernels.backend, buf, state.q, gate)
    return QubitState(state.q, buf, state.scale)


def run_circuit(circuit: Circuit, state: QubitState, backend=None) -> QubitState:
    if circuit.q != state.q:
        raise ValidationError(f"circuit has {circuit.q} qubits, state has {state.q}")
    buf = state.amps.copy()
    _run(circuit, buf, state.q, backend=backend)
    return QubitState(state.q, buf, state.scale)


# ---------------------------------------------------------------------------
# synthesis


def qft_gates(n: int, offset: int = 0) -> list[Gate]:
    """H / controlled-phase ladder with the closing swap layer, on qubits offset..offset+n-1."""
    if n < 1:
        raise ValidationError("QFT needs n >= 1")
    gates = []
    for i in range(n):
        gates.append(H(offset + i))
        for j in range(i + 1, n):
            gates.append(CP(offset + j, offset + i, math.pi / (1 << (j - i))))
    for i in range(n // 2):
        gates.append(SWAP(offset + i, offset + n - 1 - i))
    return gates


def qft_circuit(n: int) -> Circuit:
    return Circuit(n, label=f"QFT_{n}").extend(qft_gates(n))


def qft_tensor_circuit(n: int, d: int, offset: int = 0) -> Circuit:
    """``d`` QFTs on disjoint n-qubit registers after ``offset`` leading (ancilla) qubits."""
    if d < 1:
        raise ValidationError("need d >= 1")
    c = Circuit(offset + n * d, label=f"QFT_{n}^{d}", ancillas=offset)
    for r in range(d):
        c.extend(qft_gates(n, offset + r * n))
    return c


def prepare_amplitude_state(f: Field, ancillas: int = 0) -> QubitState:
    """|0..0>_anc (x) f/||f||; the discarded norm is kept in ``scale``."""
    nrm = f.norm()
    if nrm == 0.0:
        raise DegenerateInputError("cannot amplitude-encode a zero field")
    q = f.grid.qubits + ancillas
    amps = np.zeros(1 << q, dtype=np.complex128)
    amps[: f.grid.size] = f.values / nrm
    return QubitState(q, amps, scale=nrm)


@dataclass
class ResourceReport:
    gate_counts: dict[str, int]
    depth: int
    ancilla_count: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def gate_count(self) -> int:
        return sum(self.gate_counts.values())

    def to_dict(self) -> dict:
        return {
            "gate_counts": dict(sorted(self.gate_counts.items())),
            "gate_count": self.gate_count,
            "depth": self.depth,
            "ancilla_count": self.ancilla_count,
            **self.extra,
        }


def circuit_depth(c: Circuit) -> int:
    """Greedy layering: a gate lands one layer above the latest gate on any of its qubits.
    MUX touches every qubit."""
    level = [0] * c.q
    depth = 0
    for g in c.gates:
        qs = range(c.q) if g.kind == "MUX" else g.qubits
        lv = 1 + max(level[x] for x in qs)
        for x in qs:
            level[x] = lv
        depth = max(depth, lv)
    return depth


def resources(c: Circuit) -> ResourceReport:
    return ResourceReport(dict(Counter(g.kind for g in c.gates)), circuit_depth(c), c.ancillas)
