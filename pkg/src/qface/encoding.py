"""Classical-to-quantum encodings and circuit sizing.

Amplitude encoding stores a normalized D-dimensional vector as the amplitudes
of a log2(D)-qubit register; basis encoding maps a bit string to the matching
computational basis state. Non-power-of-two dimensions are rejected rather
than padded (padding would silently change fidelity semantics).
"""
from __future__ import annotations

import numpy as np

from . import qsim
from .validation import check_power_of_two, check_unit_vector, check_vector

ZERO_NORM_TOL = 1e-12


def normalize(x) -> np.ndarray:
    """Scale to unit Euclidean norm: X = x / ||x||.

    Raises ValueError for (near-)zero input; an all-black image has no
    direction and cannot be encoded.
    """
    arr = check_vector(x)
    norm = float(np.linalg.norm(arr))
    if norm <= ZERO_NORM_TOL:
        raise ValueError("cannot normalize a vector with (near-)zero norm")
    return arr / norm


def amplitude_encode(x) -> qsim.QuantumRegister:
    """Unit vector of dimension D -> log2(D)-qubit state with amplitudes X_i."""
    arr = check_unit_vector(x)
    check_power_of_two(arr.size, "dimension")
    return qsim.from_amplitudes(arr.astype(np.complex128))


def basis_encode(bits: str) -> qsim.QuantumRegister:
    """Bit string -> computational basis state, leftmost character most significant."""
    if not isinstance(bits, str) or not bits:
        raise ValueError("bits must be a non-empty string over {0, 1}")
    if len(bits) > qsim.MAX_QUBITS:
        raise ValueError(f"bit string longer than {qsim.MAX_QUBITS} qubits")
    if any(c not in "01" for c in bits):
        raise ValueError(f"invalid character in bit string {bits!r}")
    amps = np.zeros(2 ** len(bits), dtype=np.complex128)
    amps[int(bits, 2)] = 1.0
    return qsim.QuantumRegister(len(bits), amps)


def required_qubits(dim: int) -> int:
    """Total circuit width for one comparison: 2*log2(D) data qubits + 1 ancilla."""
    dim = check_power_of_two(dim)
    return 2 * (dim.bit_length() - 1) + 1
