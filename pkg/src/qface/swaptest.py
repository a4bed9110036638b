"""Three-stage SWAP test and fidelity estimation.

The circuit is: assemble |0> (x) |psi> (x) |phi|, Hadamard on the ancilla,
one controlled-SWAP per qubit pair (all controlled on the ancilla), Hadamard
on the ancilla. The ancilla then measures 0 with probability

    P(0) = 1/2 + 1/2 * |<psi|phi>|^2

so the fidelity F = |<psi|phi>|^2 is recovered as 2*P(0) - 1. An analytic
inner-product oracle is kept alongside the circuit path for cross-validation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import encoding, qsim
from .validation import check_probability, check_unit_vector

CIRCUIT_EXACT = "circuit_exact"
ANALYTIC = "analytic"
SAMPLED = "sampled"
MODES = (CIRCUIT_EXACT, ANALYTIC, SAMPLED)

DEFAULT_SHOTS = 8192


@dataclass(frozen=True)
class FidelityEstimate:
    """An overlap estimate in [0, 1] with its provenance.

    ``shots`` is 0 unless the estimate was sampled; ``std_error`` is the
    propagated standard error of the fidelity (0 for exact methods).
    """

    value: float
    method: str
    shots: int = 0
    std_error: float = 0.0

    def __post_init__(self):
        if self.method not in MODES:
            raise ValueError(f"method must be one of {MODES}, got {self.method!r}")
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"fidelity must lie in [0, 1], got {self.value}")
        if (self.shots == 0) != (self.method != SAMPLED):
            raise ValueError("shots must be 0 exactly when the method is not sampled")
        if self.std_error < 0:
            raise ValueError("std_error must be >= 0")


def derive_seed(base_seed, index: int):
    """Stable per-sample seed so parallel estimates are schedule-independent."""
    if base_seed is None:
        return None
    return int(np.random.SeedSequence([int(base_seed), int(index)]).generate_state(1)[0])


def build_swap_test_state(
    psi: qsim.QuantumRegister, phi: qsim.QuantumRegister
) -> qsim.QuantumRegister:
    """Run the SWAP test circuit; returns the full (2m+1)-qubit output state.

    The ancilla is the top qubit (index 2m). Qubit i of |psi> pairs with
    qubit i of |phi> in ascending i; any pairing order yields the same state
    because the controlled swaps are commuting permutations.
    """
    m = psi.num_qubits
    if phi.num_qubits != m:
        raise ValueError(
            f"register sizes differ: {m} vs {phi.num_qubits} qubits"
        )
    if 2 * m + 1 > qsim.MAX_QUBITS:
        raise ValueError(f"swap test needs {2 * m + 1} qubits, cap is {qsim.MAX_QUBITS}")
    ancilla = 2 * m
    state = qsim.tensor_product(qsim.new_register(1), qsim.tensor_product(psi, phi))
    state = qsim.apply_hadamard(state, ancilla)
    for i in range(m):
        state = qsim.apply_controlled_swap(state, ancilla, m + i, i)
    return qsim.apply_hadamard(state, ancilla)


def ancilla_index(num_data_qubits: int) -> int:
    """Ancilla position in the state built by :func:`build_swap_test_state`."""
    return 2 * num_data_qubits


def fidelity_analytic(psi, phi) -> FidelityEstimate:
    """Ground-truth oracle: F = (sum_i psi_i phi_i)^2 for real unit vectors."""
    a = check_unit_vector(psi, "psi")
    b = check_unit_vector(phi, "phi")
    if a.size != b.size:
        raise ValueError(f"dimension mismatch: {a.size} vs {b.size}")
    value = float(np.dot(a, b)) ** 2
    return FidelityEstimate(value=min(value, 1.0), method=ANALYTIC)


def fidelity_from_p0(p0: float) -> float:
    """Invert the measurement law: F = 2*P(0) - 1, clamped into [0, 1].

    Clamping at 0 absorbs sampling noise that drives the raw estimate
    negative; the true quantity cannot be.
    """
    p0 = check_probability(p0, "p0")
    return min(1.0, max(0.0, 2.0 * p0 - 1.0))


def estimate_fidelity(
    psi,
    phi,
    mode: str = CIRCUIT_EXACT,
    shots: int = DEFAULT_SHOTS,
    seed=None,
) -> FidelityEstimate:
    """Estimate |<psi|phi>|^2 between two unit feature vectors.

    ``circuit_exact`` runs the SWAP test and reads the exact ancilla
    marginal; ``sampled`` measures the ancilla ``shots`` times and reports
    ``std_error = 2*sqrt(p0*(1-p0)/shots)``; ``analytic`` bypasses the
    circuit entirely.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == ANALYTIC:
        return fidelity_analytic(psi, phi)

    state = build_swap_test_state(encoding.amplitude_encode(psi), encoding.amplitude_encode(phi))
    ancilla = state.num_qubits - 1
    if mode == CIRCUIT_EXACT:
        # probability_zero can land an ulp outside [0, 1]; trim before inverting.
        p0 = min(1.0, max(0.0, qsim.probability_zero(state, ancilla)))
        return FidelityEstimate(value=fidelity_from_p0(p0), method=CIRCUIT_EXACT)
    shots = int(shots)
    if shots < 1:
        raise ValueError(f"sampled mode needs shots >= 1, got {shots}")
    zeros = qsim.sample_ancilla(state, ancilla, shots, seed)
    p0_hat = zeros / shots
    return FidelityEstimate(
        value=fidelity_from_p0(p0_hat),
        method=SAMPLED,
        shots=shots,
        std_error=2.0 * float(np.sqrt(p0_hat * (1.0 - p0_hat) / shots)),
    )
