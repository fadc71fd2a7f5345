"""Quantum perceptron discriminator.

Register layout, most significant first: [m1 activation | m2 inner
product | n data]. Each data qubit is one input feature (bit precision
1), so a basis state |j> presents its bit vector to the weights. At
precision 1 a bit enters the accumulated phase as b/2, which is exactly
the halved-phase signed encoding: the doubling decode recovers the raw
dot product bits . w on the even integer grid. A second phase
estimation writes the activation of that estimate onto the m1 register.
Measuring the most significant activation qubit as |1> is the label
"Real" (activation at least one half).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil, log2

import numpy as np

from .fourier import inverse_qft_gate, qft_matrix
from .qneuron import ActivationFn, WeightVector, build_u_wm, build_activation, signed_decode, sigmoid_activation
from .statevec import (
    CircuitOp,
    Projector,
    QuantumCircuit,
    StateVector,
    basis_ket,
    hadamard,
    outcome_probability,
    run_circuit,
    shift_circuit,
    tensor,
)

DiscriminatorWeights = WeightVector


def threshold_activation(m1: int, bound: float) -> ActivationFn:
    """Affine activation centred between two activation registers.

    Values of 1/2 (or any cell boundary) are exactly representable on
    the activation register, so the estimation leaves them there with
    probability 1 and the label probability develops a flat spot; a zero
    inner product would then always be labelled Real. Centring sigma(0)
    on the midpoint of the cell just below the Real/Fake boundary makes
    the label probability cross one half at t = 0 with the steepest
    slope the register resolves. The slope keeps sigma within [0, 1)
    over decoded products in [-bound, bound).
    """
    if m1 < 1 or bound <= 0.0:
        raise ValueError("need m1 >= 1 and positive bound")
    offset = 0.5 - 2.0 ** -(m1 + 1)
    slope = offset / bound
    return ActivationFn("custom", lambda t: offset + slope * t)


@dataclass(frozen=True)
class DiscriminatorConfig:
    """Ancilla budget and activation of the perceptron."""

    m1: int = 1
    m2: int = 1
    activation: ActivationFn = field(default_factory=sigmoid_activation)

    def __post_init__(self):
        if self.m1 < 1 or self.m2 < 1:
            raise ValueError("m1 and m2 must be at least 1")

    def min_m2(self, n: int) -> int:
        # The register sees bits.w / 2 in [-n/2, n/2]; both endpoints must
        # decode distinctly, so 2^(m2-1) > n/2 - 1, i.e. m2 > log2(n).
        return ceil(log2(n)) + 1 if n > 1 else 1

    @classmethod
    def for_width(cls, n: int) -> "DiscriminatorConfig":
        """Smallest sigmoid perceptron accepting n data qubits."""
        return cls(m1=1, m2=ceil(log2(n)) + 1 if n > 1 else 1)


def _signed_activation(cfg: DiscriminatorConfig) -> ActivationFn:
    """Activation composed with the signed decode of the m2 register."""
    base = cfg.activation.fn
    m2 = cfg.m2
    return ActivationFn("custom", lambda r: base(signed_decode(int(r), m2)))


def build_discriminator(
    w: DiscriminatorWeights, cfg: DiscriminatorConfig, n: int
) -> QuantumCircuit:
    """The full perceptron circuit on m1 + m2 + n qubits."""
    if w.w.size != n:
        raise ValueError(f"need one weight per data qubit ({n}), got {w.w.size}")
    if cfg.m2 < cfg.min_m2(n):
        raise ValueError(
            f"m2 = {cfg.m2} cannot hold signed products of {n} features; "
            f"need m2 >= {cfg.min_m2(n)}"
        )
    m1, m2 = cfg.m1, cfg.m2
    width = m1 + m2 + n
    ops = [CircuitOp(hadamard(), (m1 + s,)) for s in range(m2)]
    # Precision-1 inputs already halve the phase; weights pass unscaled.
    ops.extend(shift_circuit(build_u_wm(w, m2, 1), m1, width).ops)
    ops.append(CircuitOp(inverse_qft_gate(m2), tuple(range(m1, m1 + m2))))
    ops.extend(build_activation(_signed_activation(cfg), m2, m1).ops)
    return QuantumCircuit(width, tuple(ops))


def label_real_probability(
    w: DiscriminatorWeights, cfg: DiscriminatorConfig, input: StateVector
) -> float:
    """P(first activation qubit measures 1) = P(label Real)."""
    circuit = build_discriminator(w, cfg, input.num_qubits)
    initial = tensor(basis_ket(cfg.m1 + cfg.m2, 0), input)
    final = run_circuit(circuit, initial)
    return outcome_probability(final, Projector(0, 1))


class FastDiscriminator:
    """Vectorized evaluator computing the same label probability.

    The circuit's structure is fixed per (cfg, n): the weight-dependent
    part is one diagonal phase profile, everything else is precomputed.
    Used by the trainer, where the circuit would be rebuilt per gradient
    probe; agreement with the circuit path is covered by tests.
    """

    def __init__(self, cfg: DiscriminatorConfig, n: int):
        if cfg.m2 < cfg.min_m2(n):
            raise ValueError(
                f"m2 = {cfg.m2} cannot hold signed products of {n} features; "
                f"need m2 >= {cfg.min_m2(n)}"
            )
        self.cfg = cfg
        self.n = n
        m1, m2 = cfg.m1, cfg.m2
        # Bit matrix of the data register, most significant bit first.
        self._bits = (
            (np.arange(2**n)[:, None] >> np.arange(n - 1, -1, -1)[None, :]) & 1
        ).astype(np.float64)
        self._anc = np.arange(2**m2, dtype=np.float64)[:, None]
        self._iqft2 = qft_matrix(m2).conj().T
        self._iqft1 = qft_matrix(m1).conj().T
        sigma = np.array(
            [float(cfg.activation.fn(signed_decode(r, m2))) for r in range(2**m2)]
        )
        if np.any(sigma < 0.0) or np.any(sigma >= 1.0):
            raise ValueError("activation values must lie in [0, 1)")
        # Phase accumulated by activation estimation: ancilla value times sigma.
        self._act_phase = np.exp(
            2j * np.pi * np.arange(2**m1)[:, None] * sigma[None, :]
        )

    def p_real(self, w: np.ndarray, data_amps: np.ndarray) -> float:
        m1, m2 = self.cfg.m1, self.cfg.m2
        # Phase value per basis state: bits enter at half scale (p = 1).
        t = self._bits @ (np.asarray(w, dtype=np.float64) / 2.0)
        # After H's on the m2 register, each ancilla value a tags phase
        # e^(2 i pi a t / 2^m2); then the register is Fourier-inverted.
        psi = np.exp(2j * np.pi * self._anc * t[None, :] / 2**m2)
        psi *= data_amps[None, :] / np.sqrt(2.0**m2)
        psi = self._iqft2 @ psi
        # H's on the m1 register spread psi evenly; the controlled powers
        # multiply by the activation phase profile, then invert again.
        psi = psi[None, :, :] * self._act_phase[:, :, None] / np.sqrt(2.0**m1)
        psi = self._iqft1 @ psi.reshape(2**m1, -1)
        half = 2 ** (m1 - 1)
        return float(np.sum(np.abs(psi[half:, :]) ** 2))
