"""Dense statevector simulator.

Wire-to-bit convention is big-endian: wire 0 is the most significant bit of
the basis index, so for an n-qubit state, index i assigns wire k the bit
(i >> (n-1-k)) & 1. Equivalently, reshaping amplitudes to [2]*n puts wire k
on axis k. All output orderings (probs, state dumps) follow this convention.

Matrix conventions:
    rx(t) = exp(-i t X / 2), likewise ry/rz
    cnot/cz: control is the first wire, target the second
    toffoli: two controls then target

Terminal measurements (expval, probs, state) are analytic; only measure_mid
consumes randomness.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .rng import RngState, next_uniform

QUBIT_CAP = 20  # dense amplitudes: 2^20 complex doubles = 16 MiB


class SimError(Exception):
    """Raised for wire-range, arity, and configuration violations."""


@dataclass(frozen=True)
class Statevector:
    num_qubits: int
    amplitudes: np.ndarray  # shape (2**num_qubits,), complex128

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape([2] * self.num_qubits)


@dataclass(frozen=True)
class GateOp:
    name: str
    wires: tuple[int, ...]
    params: tuple[float, ...] = ()
    # Source provenance for trace events; never part of gate identity.
    line: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Observable:
    factors: tuple[tuple[str, int], ...]  # (pauli letter, wire), distinct wires


def init_state(num_qubits: int) -> Statevector:
    if num_qubits > QUBIT_CAP:
        raise SimError(f"wire count exceeds cap {QUBIT_CAP}")
    if num_qubits < 1:
        raise SimError("wire count must be at least 1")
    amps = np.zeros(2**num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return Statevector(num_qubits, amps)


_INV_SQRT2 = 1.0 / math.sqrt(2.0)

_FIXED_MATRICES: dict[str, np.ndarray] = {
    "h": np.array([[_INV_SQRT2, _INV_SQRT2], [_INV_SQRT2, -_INV_SQRT2]], dtype=np.complex128),
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    "s": np.array([[1, 0], [0, 1j]], dtype=np.complex128),
    "t": np.array([[1, 0], [0, cmath.exp(1j * math.pi / 4)]], dtype=np.complex128),
    "cnot": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
    ),
    "cz": np.diag([1, 1, 1, -1]).astype(np.complex128),
    "swap": np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
    ),
}

_PAULI_MATRICES = {"X": _FIXED_MATRICES["x"], "Y": _FIXED_MATRICES["y"], "Z": _FIXED_MATRICES["z"]}

_toffoli = np.eye(8, dtype=np.complex128)
_toffoli[[6, 7]] = _toffoli[[7, 6]]
_FIXED_MATRICES["toffoli"] = _toffoli


def gate_matrix(name: str, params: tuple[float, ...] = ()) -> np.ndarray:
    """Unitary for a named gate; basis ordered with the first wire as the
    most significant bit."""
    if name in _FIXED_MATRICES:
        if params:
            raise SimError(f"gate '{name}' takes no parameters")
        return _FIXED_MATRICES[name]
    if name in ("rx", "ry", "rz"):
        if len(params) != 1:
            raise SimError(f"gate '{name}' takes exactly one angle")
        (theta,) = params
        c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
        if name == "rx":
            return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
        if name == "ry":
            return np.array([[c, -s], [s, c]], dtype=np.complex128)
        return np.array(
            [[cmath.exp(-0.5j * theta), 0], [0, cmath.exp(0.5j * theta)]], dtype=np.complex128
        )
    raise SimError(f"unknown gate '{name}'")


def _check_wires(state: Statevector, wires: tuple[int, ...], what: str) -> None:
    for w in wires:
        if not (0 <= w < state.num_qubits):
            raise SimError(f"wire {w} out of range for device with {state.num_qubits} wire(s)")
    if len(set(wires)) != len(wires):
        raise SimError(f"{what} wires must be distinct, got {list(wires)}")


def apply_gate(state: Statevector, op: GateOp) -> Statevector:
    _check_wires(state, op.wires, f"gate '{op.name}'")
    mat = gate_matrix(op.name, op.params)
    k = len(op.wires)
    if mat.shape != (2**k, 2**k):
        raise SimError(f"gate '{op.name}' expects {int(math.log2(mat.shape[0]))} wire(s), got {k}")
    psi = state.tensor()
    # Contract the gate tensor's input legs against the target wire axes,
    # then move the output legs back into place.
    tensor = mat.reshape([2] * (2 * k))
    psi = np.tensordot(tensor, psi, axes=(list(range(k, 2 * k)), list(op.wires)))
    psi = np.moveaxis(psi, list(range(k)), list(op.wires))
    return Statevector(state.num_qubits, np.ascontiguousarray(psi.reshape(-1)))


def measure_mid(state: Statevector, wire: int, rng: RngState) -> tuple[int, Statevector, RngState]:
    """Projective measurement of one wire in the computational basis."""
    _check_wires(state, (wire,), "measure")
    p = np.abs(state.tensor()) ** 2
    p1 = float(p.sum(axis=tuple(a for a in range(state.num_qubits) if a != wire))[1])
    if not (-1e-10 <= p1 <= 1.0 + 1e-10):
        raise SimError(f"internal consistency: P(1) = {p1} outside [0, 1]")
    p1 = min(max(p1, 0.0), 1.0)
    u, rng = next_uniform(rng)
    bit = 1 if u < p1 else 0
    keep = p1 if bit == 1 else 1.0 - p1
    if keep < 1e-15:
        # The draw rule makes this unreachable (bit follows the mass), but a
        # silent divide-by-~0 would corrupt the state, so fail loudly.
        raise SimError(f"internal consistency: outcome {bit} drawn with probability {keep}")
    psi = state.tensor().copy()
    index = [slice(None)] * state.num_qubits
    index[wire] = 1 - bit
    psi[tuple(index)] = 0.0
    psi /= math.sqrt(keep)
    return bit, Statevector(state.num_qubits, psi.reshape(-1)), rng


def expval(state: Statevector, obs: Observable) -> float:
    wires = tuple(w for _, w in obs.factors)
    _check_wires(state, wires, "observable")
    phi = state
    for pauli, wire in obs.factors:
        phi = apply_gate(phi, GateOp(pauli.lower(), (wire,)))
    value = complex(np.vdot(state.amplitudes, phi.amplitudes))
    if abs(value.imag) > 1e-10:
        raise SimError(f"internal consistency: expectation value {value} not real")
    return value.real


def probs(state: Statevector, wires: tuple[int, ...]) -> np.ndarray:
    """Marginal distribution over the listed wires, in listed order."""
    _check_wires(state, wires, "probs")
    p = np.abs(state.tensor()) ** 2
    other = tuple(a for a in range(state.num_qubits) if a not in wires)
    marg = p.sum(axis=other) if other else p
    # Summation leaves surviving axes in increasing wire order; restore the
    # caller's order.
    ordered = sorted(wires)
    marg = marg.transpose([ordered.index(w) for w in wires])
    return np.ascontiguousarray(marg.reshape(-1))
