"""Quantum neuron primitives: input encoding, phase-encoded inner
products, and a diagonal activation stage.

The inner-product kernel U_wm phase-tags an m-qubit ancilla register so
that, after Hadamards, the joint state carries e^(2*i*pi*j*t/2^m) on
ancilla value j, where t = x~ . w is the dot product of the truncated
input with the weights. An inverse QFT then concentrates the register on
t. Halving the weights doubles the register's period, which frees the
upper half of the register to represent negative products in two's
complement (even values only, so the resolution is 2).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, log2

import numpy as np

from .fourier import encode_fraction, inverse_qft_gate
from .statevec import (
    CircuitOp,
    QuantumCircuit,
    StateVector,
    basis_ket,
    crz,
    diagonal,
    hadamard,
    register_distribution,
    run_circuit,
    shift_circuit,
    tensor,
)


@dataclass(frozen=True)
class WeightVector:
    """Weights w in [-1, 1]^n."""

    w: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.w, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("weights must be a nonempty 1-d array")
        if not np.all(np.isfinite(arr)):
            raise ValueError("weights must be finite")
        if np.max(np.abs(arr)) > 1.0:
            raise ValueError("every |w_j| must be at most 1")
        arr.flags.writeable = False
        object.__setattr__(self, "w", arr)


@dataclass(frozen=True)
class EncodedInput:
    """Input vector x in [0,1]^n held as the basis state of its p-bit digits."""

    values: tuple
    precision: int
    register: StateVector


@dataclass(frozen=True)
class ActivationFn:
    """Named real function mapping register values into [0, 1)."""

    name: str
    fn: object

    def __post_init__(self):
        if self.name not in ("sigmoid", "identity", "custom"):
            raise ValueError("name must be sigmoid, identity, or custom")


def sigmoid_activation() -> ActivationFn:
    """Logistic sigmoid 1 / (1 + e^-t); range (0, 1) on all reals."""
    return ActivationFn("sigmoid", lambda t: 1.0 / (1.0 + np.exp(-t)))


def scaled_identity_activation(input_qubits: int) -> ActivationFn:
    """t / 2^q, the identity scaled into [0, 1) on {0, ..., 2^q - 1}."""
    scale = 2.0**input_qubits
    return ActivationFn("identity", lambda t: t / scale)


def custom_activation(fn) -> ActivationFn:
    """Wrap an arbitrary callable; outputs are validated at circuit build."""
    return ActivationFn("custom", fn)


def encode_input(x, precision: int) -> EncodedInput:
    """Basis state |x_{0,1} ... x_{n-1,p}> of the p-bit digits of each x_j."""
    values = tuple(float(v) for v in x)
    if not values:
        raise ValueError("input vector must be nonempty")
    all_bits = []
    for v in values:
        all_bits.extend(encode_fraction(v, precision).bits)
    index = 0
    for b in all_bits:
        index = (index << 1) | b
    register = basis_ket(len(all_bits), index)
    return EncodedInput(values, precision, register)


def truncated(x, precision: int) -> np.ndarray:
    """The p-bit truncations x~ actually seen by the quantum circuits."""
    return np.array([encode_fraction(float(v), precision).value for v in x])


def build_u_wm(w: WeightVector, ancillas: int, precision: int) -> QuantumCircuit:
    """Controlled-phase block tagging ancilla value j with e^(2*i*pi*j*t/2^m).

    For each ancilla l (1-based from the most significant), data component
    j, and digit k, a crz(w_j / 2^(m+k)) couples the pair; the block for
    ancilla l is repeated 2^(m-l) times so the phase matches the ancilla's
    bit weight.
    """
    if ancillas < 1:
        raise ValueError("ancillas must be at least 1")
    if precision < 1:
        raise ValueError("precision must be at least 1")
    m = ancillas
    n = w.w.size
    width = m + n * precision
    ops = []
    for l in range(1, m + 1):
        for _ in range(2 ** (m - l)):
            for j in range(n):
                for k in range(1, precision + 1):
                    data_qubit = m + j * precision + (k - 1)
                    ops.append(
                        CircuitOp(crz(w.w[j] / 2 ** (m + k)), (l - 1, data_qubit))
                    )
    return QuantumCircuit(width, tuple(ops))


def _ancilla_distribution(w: WeightVector, encoded: EncodedInput, m: int) -> np.ndarray:
    """Run H's, U_wm, inverse QFT; return the ancilla outcome distribution."""
    n_data = encoded.register.num_qubits
    width = m + n_data
    ops = [CircuitOp(hadamard(), (s,)) for s in range(m)]
    ops.extend(build_u_wm(w, m, encoded.precision).ops)
    ops.append(CircuitOp(inverse_qft_gate(m), tuple(range(m))))
    circuit = QuantumCircuit(width, tuple(ops))
    initial = tensor(basis_ket(m, 0), encoded.register)
    final = run_circuit(circuit, initial)
    return register_distribution(final, m)


def qip(x, w: WeightVector, ancillas: int, precision: int):
    """Estimate the nonnegative inner product x~ . w on an m-bit register.

    Returns (estimate, distribution): the modal register outcome (lowest
    index on ties) and the exact outcome distribution. Integer products
    below 2^m are recovered with probability 1.
    """
    encoded = encode_input(x, precision)
    dist = _ancilla_distribution(w, encoded, ancillas)
    return int(np.argmax(dist)), dist


def signed_decode(outcome: int, ancillas: int) -> int:
    """Two's-complement style decode of a halved-weight register outcome."""
    half = 2 ** (ancillas - 1)
    if outcome < half:
        return 2 * outcome
    return 2 * (outcome - 2**ancillas)


def qip_signed(x, w: WeightVector, ancillas: int, precision: int) -> float:
    """Estimate a signed inner product via the halved-weight scheme.

    Requires ancillas >= ceil(log2(n)) + 1 so that |x~ . w| < 2^m and the
    register's positive and negative halves cannot collide. The returned
    estimate lives on the even grid, so it matches the true product only
    up to the register resolution of 2.
    """
    n = len(tuple(x))
    required = ceil(log2(n)) + 1
    if ancillas < required:
        raise ValueError(f"need ancillas >= {required} for n = {n} inputs")
    halved = WeightVector(np.asarray(w.w) / 2.0)
    encoded = encode_input(x, precision)
    dist = _ancilla_distribution(halved, encoded, ancillas)
    return float(signed_decode(int(np.argmax(dist)), ancillas))


def build_activation(fn: ActivationFn, input_qubits: int, ancillas: int) -> QuantumCircuit:
    """Phase-estimation circuit writing the m1-bit fraction of fn(x).

    The unitary under estimation is Diag(e^(2*i*pi*fn(x))) over the input
    register, whose eigenphase on basis input |x> is exactly fn(x).
    """
    q = input_qubits
    m1 = ancillas
    if q < 1 or m1 < 1:
        raise ValueError("register widths must be at least 1")
    sigma = np.array([float(fn.fn(x)) for x in range(2**q)])
    if np.any(sigma < 0.0) or np.any(sigma >= 1.0):
        raise ValueError("activation values must lie in [0, 1)")
    width = m1 + q
    input_targets = tuple(range(m1, width))
    ops = [CircuitOp(hadamard(), (s,)) for s in range(m1)]
    for s in range(m1):
        # Ancilla s controls the 2^(m1-1-s) power, a diagonal with the
        # phases scaled by that bit weight.
        ops.append(
            CircuitOp(diagonal(sigma * 2 ** (m1 - 1 - s)), input_targets, (s,))
        )
    ops.append(CircuitOp(inverse_qft_gate(m1), tuple(range(m1))))
    return QuantumCircuit(width, tuple(ops))


def neuron_forward(
    x, w: WeightVector, fn: ActivationFn, m1: int, m2: int, precision: int
) -> np.ndarray:
    """Exact outcome distribution of the activation register.

    Pipeline on [m1 activation | m2 inner product | data] qubits: encode
    the input, estimate the (nonnegative) inner product on the m2
    register, then estimate fn of that register's value on the m1
    register. Only the activation register is measured.
    """
    encoded = encode_input(x, precision)
    n_data = encoded.register.num_qubits
    width = m1 + m2 + n_data
    ops = [CircuitOp(hadamard(), (m1 + s,)) for s in range(m2)]
    u_wm = shift_circuit(build_u_wm(w, m2, precision), m1, width)
    ops.extend(u_wm.ops)
    ops.append(CircuitOp(inverse_qft_gate(m2), tuple(range(m1, m1 + m2))))
    ops.extend(build_activation(fn, m2, m1).ops)
    circuit = QuantumCircuit(width, tuple(ops))
    initial = tensor(basis_ket(m1 + m2, 0), encoded.register)
    final = run_circuit(circuit, initial)
    return register_distribution(final, m1)
