"""Dense state-vector simulator with exactly the gates the SWAP test needs.

Conventions, fixed once and tested:

* Qubit ``k`` corresponds to bit ``k`` of the basis index; qubit 0 is the
  least-significant bit.
* ``tensor_product(a, b)`` places ``a`` in the high-significance bits: the
  amplitude at composite index ``i_a * 2**b.num_qubits + i_b`` is
  ``a[i_a] * b[i_b]``.
* Gates are pure: they return a new register and never mutate their input.
* Norm drift beyond 1e-9 after a gate raises :class:`NormDriftError` instead
  of silently renormalizing, so gate bugs cannot hide.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import NormDriftError

MAX_QUBITS = 24  # 2**24 complex amplitudes ~ 256 MB
NORM_TOL = 1e-9

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass
class QuantumRegister:
    """An ``num_qubits``-qubit pure state as a dense array of 2**n amplitudes.

    Treated as immutable: operations in this module return fresh registers.
    """

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValueError(
                f"num_qubits must be in [1, {MAX_QUBITS}], got {self.num_qubits}"
            )
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (2**self.num_qubits,):
            raise ValueError(
                f"expected {2**self.num_qubits} amplitudes, got shape {amps.shape}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes contain non-finite entries")
        self.amplitudes = amps

    @property
    def dim(self) -> int:
        return self.amplitudes.size


def _norm_sq(amps: np.ndarray) -> float:
    return float(np.vdot(amps, amps).real)


def _check_qubit(reg: QuantumRegister, qubit: int, name: str = "qubit") -> int:
    qubit = int(qubit)
    if not 0 <= qubit < reg.num_qubits:
        raise ValueError(
            f"{name} index {qubit} out of range for {reg.num_qubits}-qubit register"
        )
    return qubit


def _guard_norm(amps: np.ndarray) -> None:
    drift = abs(_norm_sq(amps) - 1.0)
    if drift > NORM_TOL:
        raise NormDriftError(f"state norm drifted by {drift:.3e} after gate")


def new_register(num_qubits: int) -> QuantumRegister:
    """The all-zeros state |0...0>."""
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise ValueError(f"num_qubits must be in [1, {MAX_QUBITS}], got {num_qubits}")
    amps = np.zeros(2**num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return QuantumRegister(num_qubits, amps)


def from_amplitudes(amplitudes) -> QuantumRegister:
    """Register from an explicit unit-norm amplitude array of power-of-two length."""
    amps = np.asarray(amplitudes, dtype=np.complex128).ravel()
    n = amps.size
    if n < 2 or (n & (n - 1)) != 0:
        raise ValueError(f"amplitude count must be a power of two >= 2, got {n}")
    num_qubits = n.bit_length() - 1
    if num_qubits > MAX_QUBITS:
        raise ValueError(f"register of {num_qubits} qubits exceeds cap {MAX_QUBITS}")
    if abs(_norm_sq(amps) - 1.0) > NORM_TOL:
        raise ValueError("amplitudes are not unit-norm")
    return QuantumRegister(num_qubits, amps)


def tensor_product(a: QuantumRegister, b: QuantumRegister) -> QuantumRegister:
    """Kronecker product |a>|b| with ``a`` in the high bits."""
    total = a.num_qubits + b.num_qubits
    if total > MAX_QUBITS:
        raise ValueError(f"combined register of {total} qubits exceeds cap {MAX_QUBITS}")
    return QuantumRegister(total, np.kron(a.amplitudes, b.amplitudes))


def apply_hadamard(reg: QuantumRegister, qubit: int) -> QuantumRegister:
    """Hadamard on one qubit: (a0, a1) -> ((a0+a1)/sqrt2, (a0-a1)/sqrt2)."""
    qubit = _check_qubit(reg, qubit)
    n = reg.num_qubits
    # View as (high bits, target bit, low bits); axis 1 is the target.
    view = reg.amplitudes.reshape(2 ** (n - qubit - 1), 2, 2**qubit)
    a0 = view[:, 0, :]
    a1 = view[:, 1, :]
    out = np.empty_like(view)
    out[:, 0, :] = (a0 + a1) * _INV_SQRT2
    out[:, 1, :] = (a0 - a1) * _INV_SQRT2
    flat = out.reshape(-1)
    _guard_norm(flat)
    return QuantumRegister(n, flat)


def apply_controlled_swap(
    reg: QuantumRegister, control: int, target_a: int, target_b: int
) -> QuantumRegister:
    """Fredkin gate: swap the two target qubits where the control bit is 1."""
    control = _check_qubit(reg, control, "control")
    target_a = _check_qubit(reg, target_a, "target_a")
    target_b = _check_qubit(reg, target_b, "target_b")
    if len({control, target_a, target_b}) != 3:
        raise ValueError("control and target qubits must be distinct")
    n = reg.num_qubits
    view = reg.amplitudes.reshape([2] * n)
    # Axis j of the view holds qubit n-1-j (C order puts the MSB first).
    ax_c, ax_a, ax_b = (n - 1 - q for q in (control, target_a, target_b))
    idx = [slice(None)] * n
    idx[ax_c] = 1
    sub = view[tuple(idx)]
    # Swapping the two target axes within the control=1 slice permutes exactly
    # the amplitude pairs whose target bits differ.
    a_adj = ax_a - (1 if ax_c < ax_a else 0)
    b_adj = ax_b - (1 if ax_c < ax_b else 0)
    out = view.copy()
    out[tuple(idx)] = np.swapaxes(sub, a_adj, b_adj)
    flat = out.reshape(-1)
    _guard_norm(flat)
    return QuantumRegister(n, flat)


def probability_zero(reg: QuantumRegister, qubit: int) -> float:
    """Probability of measuring the given qubit as 0; the state is untouched."""
    qubit = _check_qubit(reg, qubit)
    n = reg.num_qubits
    view = reg.amplitudes.reshape(2 ** (n - qubit - 1), 2, 2**qubit)
    zeros = view[:, 0, :]
    return float(np.vdot(zeros, zeros).real)


def sample_ancilla(reg: QuantumRegister, qubit: int, shots: int, seed=None) -> int:
    """Count of 0-outcomes over ``shots`` measurements of one qubit.

    Draws a single binomial sample with success probability
    ``probability_zero(reg, qubit)``; deterministic for a fixed seed.
    """
    shots = int(shots)
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    p0 = min(1.0, max(0.0, probability_zero(reg, qubit)))
    rng = np.random.default_rng(seed)
    return int(rng.binomial(shots, p0))
