"""Quantum Fourier transform, its inverse, and binary-fraction encoding.

The QFT maps amplitudes by output_k = 2^(-n/2) * sum_j e^(2*i*pi*j*k/2^n)
input_j. Whole-state transforms go through the FFT, which evaluates that
exact sum; small dense matrices are exposed as gates so the transform can
be embedded into wider circuits (ancilla registers).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .statevec import (
    CircuitOp,
    QuantumCircuit,
    StateVector,
    UnitaryGate,
    crz,
    hadamard,
    swap,
)

# Dense transform matrices above this width are refused; registers that
# large should not go through an explicit gate embedding.
_MAX_GATE_QUBITS = 12


@lru_cache(maxsize=None)
def qft_matrix(num_qubits: int) -> np.ndarray:
    """Dense QFT matrix F[k, j] = e^(2*i*pi*j*k/2^n) / sqrt(2^n)."""
    if not 1 <= num_qubits <= _MAX_GATE_QUBITS:
        raise ValueError(f"dense QFT matrix limited to {_MAX_GATE_QUBITS} qubits")
    dim = 2**num_qubits
    jk = np.outer(np.arange(dim), np.arange(dim))
    mat = np.exp(2j * np.pi * jk / dim) / np.sqrt(dim)
    mat.flags.writeable = False
    return mat


def qft_gate(num_qubits: int) -> UnitaryGate:
    """The QFT on `num_qubits` qubits as a dense gate."""
    return UnitaryGate(num_qubits, qft_matrix(num_qubits))


def inverse_qft_gate(num_qubits: int) -> UnitaryGate:
    """The inverse QFT on `num_qubits` qubits as a dense gate."""
    return UnitaryGate(num_qubits, qft_matrix(num_qubits).conj().T)


def qft(state: StateVector) -> StateVector:
    """Apply the QFT to a whole state."""
    # ifft with orthonormal scaling evaluates 2^(-n/2) sum_j e^(+2 i pi jk/N).
    return StateVector(state.num_qubits, np.fft.ifft(state.amps, norm="ortho"))


def inverse_qft(state: StateVector) -> StateVector:
    """Apply the inverse QFT to a whole state."""
    return StateVector(state.num_qubits, np.fft.fft(state.amps, norm="ortho"))


def qft_circuit(num_qubits: int) -> QuantumCircuit:
    """Gate-level QFT: Hadamards, controlled phases, and a bit reversal.

    Provided for inspection alongside the dense transform; produces the
    same unitary as qft_gate(num_qubits).
    """
    ops = []
    for q in range(num_qubits):
        ops.append(CircuitOp(hadamard(), (q,)))
        for t in range(q + 1, num_qubits):
            # Phase 2*pi/2^(t-q+1) on |1>|1> of (control t, target q).
            ops.append(CircuitOp(crz(2.0 ** -(t - q + 1)), (q, t)))
    for q in range(num_qubits // 2):
        ops.append(CircuitOp(swap(), (q, num_qubits - 1 - q)))
    return QuantumCircuit(num_qubits, tuple(ops))


@dataclass(frozen=True)
class BinaryFraction:
    """Bits (j1, ..., jm) of the fraction value = sum_i j_i / 2^i in [0, 1)."""

    bits: tuple
    value: float

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0 or 1")
        recon = sum(b / 2 ** (i + 1) for i, b in enumerate(self.bits))
        if recon != self.value:
            raise ValueError("value does not match bits")


def encode_fraction(x: float, bits: int) -> BinaryFraction:
    """Best `bits`-bit binary fraction below or equal to x.

    x = 1.0 is clamped to the largest representable fraction so that
    inputs from the closed interval [0, 1] are accepted.
    """
    if bits < 1:
        raise ValueError("bits must be at least 1")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must be in [0, 1], got {x}")
    scaled = min(int(np.floor(x * 2**bits)), 2**bits - 1)
    bit_tuple = tuple((scaled >> (bits - 1 - i)) & 1 for i in range(bits))
    return BinaryFraction(bit_tuple, scaled / 2**bits)
