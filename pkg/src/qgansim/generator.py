"""Generator circuits producing real-amplitude wave functions.

Two constructions share the conditional-Bernoulli picture, where the
amplitude of basis state x factors into chained conditionals and the
angle for a prefix satisfies cos(theta/2) = sqrt(P[next bit 0 | prefix]):

* the exact circuit conditions every rotation on the full prefix and can
  load any distribution, and
* the parametric ansatz truncates the conditioning to the previous qubit
  (plus a mixing layer), giving 3n - 3 trainable angles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .statevec import (
    CircuitOp,
    QuantumCircuit,
    StateVector,
    basis_ket,
    cry,
    pauli_x,
    ry,
    run_circuit,
)
from .svi import DiscreteDistribution


@dataclass(frozen=True)
class GeneratorParams:
    """Rotation angles (radians) for the parametric ansatz."""

    thetas: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.thetas, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("thetas must be a nonempty 1-d array")
        if not np.all(np.isfinite(arr)):
            raise ValueError("thetas must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "thetas", arr)


@dataclass(frozen=True)
class ConditionalAngles:
    """Per-prefix angles; key () is the root, key (b1, ..., bk) a prefix."""

    n_qubits: int
    angles: dict


def num_params(n: int) -> int:
    """Parameter count of the ansatz: 1 for n = 1, else 3n - 3."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return 1 if n == 1 else 3 * n - 3


def param_kinds(n: int) -> tuple:
    """Gate kind ('ry' or 'cry') behind each ansatz parameter."""
    if n == 1:
        return ("ry",)
    kinds = ["ry"]
    for _ in range(2, n + 1):
        kinds.extend(["cry", "cry"])
    kinds.extend(["ry"] * (n - 2))
    return tuple(kinds)


def exact_angles(target: DiscreteDistribution) -> ConditionalAngles:
    """Conditional-Bernoulli angles loading the target exactly.

    q = P[bit k = 0 | prefix] and cos(theta/2) = sqrt(q). Prefixes with
    zero mass are unobservable and get q = 1 (angle 0).
    """
    n = target.n_qubits
    masses = target.masses
    angles = {}
    for k in range(n):
        # Mass of each (k+1)-bit prefix: fold the tail qubits away.
        prefix_mass = masses.reshape(2 ** (k + 1), -1).sum(axis=1)
        for prefix_index in range(2**k):
            mass = prefix_mass[2 * prefix_index] + prefix_mass[2 * prefix_index + 1]
            if mass > 0.0:
                q = prefix_mass[2 * prefix_index] / mass
            else:
                q = 1.0
            q = min(max(q, 0.0), 1.0)
            prefix_bits = tuple((prefix_index >> (k - 1 - i)) & 1 for i in range(k))
            angles[prefix_bits] = 2.0 * np.arccos(np.sqrt(q))
    return ConditionalAngles(n, angles)


def build_exact_circuit(angles: ConditionalAngles) -> QuantumCircuit:
    """Multi-controlled RY chain realizing the conditional construction.

    The rotation for prefix b acts on qubit len(b) controlled on the
    prefix pattern; zero bits of the pattern are handled by X dressing
    around the controls.
    """
    n = angles.n_qubits
    ops = []
    for k in range(n):
        for prefix_index in range(2**k):
            prefix_bits = tuple((prefix_index >> (k - 1 - i)) & 1 for i in range(k))
            theta = angles.angles[prefix_bits]
            zero_positions = tuple(i for i, b in enumerate(prefix_bits) if b == 0)
            for q in zero_positions:
                ops.append(CircuitOp(pauli_x(), (q,)))
            ops.append(CircuitOp(ry(theta), (k,), tuple(range(k))))
            for q in zero_positions:
                ops.append(CircuitOp(pauli_x(), (q,)))
    return QuantumCircuit(n, tuple(ops))


def build_parametric_circuit(n: int, params: GeneratorParams) -> QuantumCircuit:
    """Fixed RY/CRY/X ansatz with 3n - 3 angles (1 angle at n = 1).

    Layout: RY(t1) on qubit 0; for each stage k = 2..n a pair of CRYs on
    qubit k-1 controlled by qubit k-2, the second conditioned on control
    value 0 via an X sandwich; then a mixing RY layer on qubits 2..n-1.
    """
    thetas = params.thetas
    if thetas.size != num_params(n):
        raise ValueError(
            f"ansatz for n = {n} needs {num_params(n)} parameters, got {thetas.size}"
        )
    ops = [CircuitOp(ry(thetas[0]), (0,))]
    idx = 1
    for k in range(2, n + 1):
        control, target = k - 2, k - 1
        ops.append(CircuitOp(cry(thetas[idx]), (control, target)))
        ops.append(CircuitOp(pauli_x(), (control,)))
        ops.append(CircuitOp(cry(thetas[idx + 1]), (control, target)))
        ops.append(CircuitOp(pauli_x(), (control,)))
        idx += 2
    for j in range(n - 2):
        ops.append(CircuitOp(ry(thetas[idx]), (j + 2,)))
        idx += 1
    return QuantumCircuit(n, tuple(ops))


def generate_state(n: int, params: GeneratorParams) -> StateVector:
    """Run the ansatz on |0...0>."""
    return run_circuit(build_parametric_circuit(n, params), basis_ket(n, 0))


def exact_params_2q(target: DiscreteDistribution) -> GeneratorParams:
    """Ansatz parameters reproducing any 2-qubit target exactly.

    At n = 2 the ansatz subsumes the exact construction: the CRY pair
    plays the two prefix angles (control value 1 first, then 0).
    """
    if target.n_qubits != 2:
        raise ValueError("only defined for 2-qubit targets")
    angles = exact_angles(target).angles
    return GeneratorParams(np.array([angles[()], angles[(1,)], angles[(0,)]]))
