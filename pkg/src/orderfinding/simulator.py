"""Dense state-vector and density-operator simulation of the five-spin register.

Basis convention, used everywhere in this package: a basis state is labeled
b1 b2 b3 b4 b5 with spin 1 the most significant bit, i.e. |b1..b5> lives at
index 16*b1 + 8*b2 + 4*b3 + 2*b4 + b5.  Gate angles are in degrees.  A
conditional z-rotation puts the phase on the |11> component of the
control/target pair, so it is symmetric in control and target.

All operations are pure functions; values are never mutated after
construction and are safe to share across threads.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

N_SPINS = 5
DIM = 2**N_SPINS

NORM_ATOL = 1e-12
UNITARY_ATOL = 1e-10

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
_X = np.array([[0, 1], [1, 0]], dtype=complex)


def bit_of(index: int, spin: int) -> int:
    """Bit of basis label `index` carried by `spin` (1 = most significant)."""
    return (index >> (N_SPINS - spin)) & 1


def flip_bit(index: int, spin: int) -> int:
    return index ^ (1 << (N_SPINS - spin))


def _check_spin(q: int) -> None:
    if not 1 <= q <= N_SPINS:
        raise ValueError(f"spin index {q} out of range 1..{N_SPINS}")


def _check_distinct(*qs: int) -> None:
    for q in qs:
        _check_spin(q)
    if len(set(qs)) != len(qs):
        raise ValueError(f"spin indices must be distinct, got {qs}")


@dataclass(frozen=True)
class Hadamard:
    spin: int


@dataclass(frozen=True)
class NotGate:
    spin: int


@dataclass(frozen=True)
class ZRotation:
    spin: int
    angle_deg: float


@dataclass(frozen=True)
class ConditionalZRotation:
    """Phase diag(1, e^{i*angle}) on `target`, applied only when `control` is |1>."""

    control: int
    target: int
    angle_deg: float
    dagger: bool = False


@dataclass(frozen=True)
class ControlledNot:
    control: int
    target: int


@dataclass(frozen=True, eq=False)
class ControlledTargetUnitary:
    """A 4x4 unitary on a pair of target spins, applied when `control` is |1>."""

    control: int
    targets: tuple[int, int]
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError("embedded block must be 4x4")
        if not np.allclose(m.conj().T @ m, np.eye(4), atol=1e-12):
            raise ValueError("embedded block is not unitary")
        object.__setattr__(self, "matrix", m)


GateOp = Union[
    Hadamard,
    NotGate,
    ZRotation,
    ConditionalZRotation,
    ControlledNot,
    ControlledTargetUnitary,
]


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list; the first op acts first in time."""

    ops: tuple[GateOp, ...] = ()
    n_spins: int = N_SPINS

    def __post_init__(self) -> None:
        object.__setattr__(self, "ops", tuple(self.ops))
        for op in self.ops:
            for q in _op_spins(op):
                if not 1 <= q <= self.n_spins:
                    raise ValueError(f"op {op!r} touches spin {q} outside 1..{self.n_spins}")

    def __add__(self, other: "Circuit") -> "Circuit":
        return Circuit(self.ops + other.ops, self.n_spins)


def _op_spins(op: GateOp) -> tuple[int, ...]:
    if isinstance(op, (Hadamard, NotGate, ZRotation)):
        _check_spin(op.spin)
        return (op.spin,)
    if isinstance(op, (ConditionalZRotation, ControlledNot)):
        _check_distinct(op.control, op.target)
        return (op.control, op.target)
    if isinstance(op, ControlledTargetUnitary):
        _check_distinct(op.control, *op.targets)
        return (op.control, *op.targets)
    raise TypeError(f"not a gate op: {op!r}")


@dataclass(frozen=True)
class QuantumState:
    """Pure state of the five-spin register: 32 complex amplitudes."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.amplitudes, dtype=complex).reshape(DIM)
        norm = np.linalg.norm(a)
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"state norm {norm} is not 1")
        object.__setattr__(self, "amplitudes", a)

    def density(self) -> "DensityOperator":
        a = self.amplitudes
        return DensityOperator(np.outer(a, a.conj()), kind="normalized")


def basis_state(index: int) -> QuantumState:
    if not 0 <= index < DIM:
        raise ValueError(f"basis index {index} out of range")
    a = np.zeros(DIM, dtype=complex)
    a[index] = 1.0
    return QuantumState(a)


@dataclass(frozen=True)
class DensityOperator:
    """32x32 Hermitian operator; `kind` is "normalized" (unit trace) or "deviation" (traceless)."""

    matrix: np.ndarray
    kind: str = "normalized"

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (DIM, DIM):
            raise ValueError("density operator must be 32x32")
        if not np.allclose(m, m.conj().T, atol=1e-9):
            raise ValueError("density operator must be Hermitian")
        tr = np.trace(m)
        if self.kind == "normalized":
            if abs(tr - 1.0) > 1e-9:
                raise ValueError(f"normalized density operator has trace {tr}")
        elif self.kind == "deviation":
            if abs(tr) > 1e-9 * max(1.0, np.abs(m).max()):
                raise ValueError(f"deviation density operator has trace {tr}")
        else:
            raise ValueError(f"unknown kind {self.kind!r}")
        object.__setattr__(self, "matrix", m)


def _phase(angle_deg: float, dagger: bool = False) -> complex:
    sign = -1.0 if dagger else 1.0
    return np.exp(1j * sign * np.deg2rad(angle_deg))


def _apply_single(amps: np.ndarray, u: np.ndarray, spin: int) -> np.ndarray:
    t = amps.reshape([2] * N_SPINS)
    t = np.moveaxis(t, spin - 1, 0)
    t = np.tensordot(u, t, axes=([1], [0]))
    return np.moveaxis(t, 0, spin - 1).reshape(DIM)


def apply_gate(state: QuantumState, op: GateOp) -> QuantumState:
    """Apply one gate to a pure state.  Norm is preserved exactly by construction."""
    _op_spins(op)  # validates indices
    amps = state.amplitudes
    if isinstance(op, Hadamard):
        out = _apply_single(amps, _H, op.spin)
    elif isinstance(op, NotGate):
        out = _apply_single(amps, _X, op.spin)
    elif isinstance(op, ZRotation):
        u = np.diag([1.0, _phase(op.angle_deg)])
        out = _apply_single(amps, u, op.spin)
    elif isinstance(op, ConditionalZRotation):
        t = amps.reshape([2] * N_SPINS).copy()
        t = np.moveaxis(t, (op.control - 1, op.target - 1), (0, 1))
        t[1, 1] = t[1, 1] * _phase(op.angle_deg, op.dagger)
        out = np.moveaxis(t, (0, 1), (op.control - 1, op.target - 1)).reshape(DIM)
    elif isinstance(op, ControlledNot):
        t = amps.reshape([2] * N_SPINS).copy()
        t = np.moveaxis(t, (op.control - 1, op.target - 1), (0, 1))
        t[1] = t[1, ::-1]
        out = np.moveaxis(t, (0, 1), (op.control - 1, op.target - 1)).reshape(DIM)
    elif isinstance(op, ControlledTargetUnitary):
        t1, t2 = op.targets
        t = amps.reshape([2] * N_SPINS).copy()
        t = np.moveaxis(t, (op.control - 1, t1 - 1, t2 - 1), (0, 1, 2))
        block = t[1].reshape(4, -1)
        t[1] = (op.matrix @ block).reshape(t[1].shape)
        out = np.moveaxis(t, (0, 1, 2), (op.control - 1, t1 - 1, t2 - 1)).reshape(DIM)
    else:
        raise TypeError(f"not a gate op: {op!r}")
    return QuantumState(out)


def run_circuit(circuit: Circuit, state: QuantumState) -> QuantumState:
    for op in circuit.ops:
        state = apply_gate(state, op)
    return state


def gate_unitary(op: GateOp) -> np.ndarray:
    """Full 32x32 unitary of one gate, built by direct embedding.

    Independent of the tensor-contraction path in apply_gate, so the two
    can be cross-checked against each other.
    """
    _op_spins(op)
    if isinstance(op, (Hadamard, NotGate, ZRotation)):
        if isinstance(op, Hadamard):
            u2 = _H
        elif isinstance(op, NotGate):
            u2 = _X
        else:
            u2 = np.diag([1.0, _phase(op.angle_deg)])
        u = np.eye(1, dtype=complex)
        for q in range(1, N_SPINS + 1):
            u = np.kron(u, u2 if q == op.spin else np.eye(2))
        return u
    if isinstance(op, ConditionalZRotation):
        diag = np.ones(DIM, dtype=complex)
        for b in range(DIM):
            if bit_of(b, op.control) and bit_of(b, op.target):
                diag[b] = _phase(op.angle_deg, op.dagger)
        return np.diag(diag)
    if isinstance(op, ControlledNot):
        u = np.zeros((DIM, DIM), dtype=complex)
        for b in range(DIM):
            b2 = flip_bit(b, op.target) if bit_of(b, op.control) else b
            u[b2, b] = 1.0
        return u
    if isinstance(op, ControlledTargetUnitary):
        t1, t2 = op.targets
        u = np.zeros((DIM, DIM), dtype=complex)
        for b in range(DIM):
            if not bit_of(b, op.control):
                u[b, b] = 1.0
                continue
            y = 2 * bit_of(b, t1) + bit_of(b, t2)
            base = b & ~(1 << (N_SPINS - t1)) & ~(1 << (N_SPINS - t2))
            for y2 in range(4):
                amp = op.matrix[y2, y]
                if amp != 0:
                    b2 = base | ((y2 >> 1) << (N_SPINS - t1)) | ((y2 & 1) << (N_SPINS - t2))
                    u[b2, b] = amp
        return u
    raise TypeError(f"not a gate op: {op!r}")


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Product of the gate unitaries in time order (first op rightmost)."""
    u = np.eye(DIM, dtype=complex)
    for op in circuit.ops:
        u = gate_unitary(op) @ u
    return u


def evolve_density(rho: DensityOperator, u: np.ndarray) -> DensityOperator:
    return DensityOperator(u @ rho.matrix @ u.conj().T, kind=rho.kind)


def expectation_Iz(rho: DensityOperator, spin: int) -> float:
    """O_i = 2 Tr(rho I_zi), with I_z eigenvalue +1/2 on |0>.

    For a deviation operator the result is in the same arbitrary units as
    the operator itself.
    """
    _check_spin(spin)
    signs = np.array([1.0 if bit_of(b, spin) == 0 else -1.0 for b in range(DIM)])
    return float(np.real(np.sum(signs * np.diag(rho.matrix))))


def maximally_mixed() -> DensityOperator:
    return DensityOperator(np.eye(DIM, dtype=complex) / DIM, kind="normalized")


def register_probabilities(state: QuantumState) -> np.ndarray:
    """Marginal probabilities of the first register (spins 1-3), indexed by b1b2b3."""
    p = np.abs(state.amplitudes) ** 2
    return p.reshape(8, 4).sum(axis=1)


def states_equal_up_to_phase(a: np.ndarray, b: np.ndarray, atol: float = 1e-9) -> bool:
    """True if complex vectors a, b agree up to one global phase, entry-wise within atol."""
    a = np.asarray(a, dtype=complex).reshape(-1)
    b = np.asarray(b, dtype=complex).reshape(-1)
    k = int(np.argmax(np.abs(b)))
    if abs(b[k]) < atol:
        return bool(np.all(np.abs(a) <= atol))
    phase = a[k] / b[k]
    if abs(abs(phase) - 1.0) > atol:
        return False
    return bool(np.max(np.abs(a - phase * b)) <= atol)
