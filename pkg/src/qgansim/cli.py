"""Command line interface.

Subcommands: `target` writes the discretized distribution and density
curve, `train` runs the adversarial loop and writes per-epoch metrics,
`demo` prints exact outcome distributions of the circuit primitives as
JSON lines. All randomness flows from the configured seed; repeated runs
with the same seed produce byte-identical artifacts.
"""

from __future__ import annotations

import json
from pathlib import Path

import click
import numpy as np

from .adversarial import TrainConfig, train
from .discriminator import DiscriminatorConfig, threshold_activation
from .fourier import qft
from .generator import GeneratorParams, generate_state
from .phase_estimation import qpe_distribution
from .qneuron import (
    WeightVector,
    neuron_forward,
    qip,
    scaled_identity_activation,
    sigmoid_activation,
)
from .statevec import basis_ket, diagonal
from .svi import DEFAULT_SMILE_PARAMS, SviParams, density, discretize

_TRAIN_KEYS = {
    "n_qubits",
    "epochs",
    "n_d",
    "n_g",
    "lr_d",
    "lr_g",
    "shots",
    "seed",
    "fd_step",
}
_SVI_KEYS = {"a", "b", "rho", "m", "xi", "T"}
_DISC_KEYS = {"m1", "m2", "activation"}
_TOP_KEYS = _TRAIN_KEYS | {"svi", "discriminator", "out_dir"}

_PROB_FLOOR = 1e-12  # demo output omits outcomes below this


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path) as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise click.UsageError("config must be a JSON object")
    _reject_unknown(raw, _TOP_KEYS, "config")
    _reject_unknown(raw.get("svi", {}), _SVI_KEYS, "config.svi")
    _reject_unknown(raw.get("discriminator", {}), _DISC_KEYS, "config.discriminator")
    return raw


def _reject_unknown(section: dict, allowed: set, where: str) -> None:
    unknown = sorted(set(section) - allowed)
    if unknown:
        raise click.UsageError(f"unknown {where} keys: {', '.join(unknown)}")


def _svi_params(raw: dict) -> SviParams:
    section = raw.get("svi")
    if section is None:
        return DEFAULT_SMILE_PARAMS
    merged = {
        "a": DEFAULT_SMILE_PARAMS.a,
        "b": DEFAULT_SMILE_PARAMS.b,
        "rho": DEFAULT_SMILE_PARAMS.rho,
        "m": DEFAULT_SMILE_PARAMS.m,
        "xi": DEFAULT_SMILE_PARAMS.xi,
        "T": DEFAULT_SMILE_PARAMS.T,
    }
    merged.update(section)
    try:
        return SviParams(**merged)
    except ValueError as exc:
        raise click.ClickException(f"invalid SVI parameters: {exc}")


def _activation(name: str, m1: int, m2: int):
    if name == "sigmoid":
        return sigmoid_activation()
    if name == "threshold":
        return threshold_activation(m1, 2.0**m2)
    if name == "identity":
        return scaled_identity_activation(m2)
    raise click.UsageError(f"unknown activation {name!r}")


def _discriminator(raw: dict, n: int) -> DiscriminatorConfig | None:
    section = raw.get("discriminator")
    if section is None:
        return None
    m1 = int(section.get("m1", 2))
    m2 = int(section.get("m2", DiscriminatorConfig.for_width(n).m2))
    act = _activation(section.get("activation", "sigmoid"), m1, m2)
    try:
        return DiscriminatorConfig(m1=m1, m2=m2, activation=act)
    except ValueError as exc:
        raise click.ClickException(f"invalid discriminator config: {exc}")


def _train_config(raw: dict, seed: int | None) -> TrainConfig:
    kwargs = {k: raw[k] for k in _TRAIN_KEYS if k in raw}
    if seed is not None:
        kwargs["seed"] = seed
    kwargs.setdefault("n_qubits", 4)
    kwargs.setdefault("epochs", 300)
    try:
        return TrainConfig(**kwargs)
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _dump_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _echo_line(payload: dict) -> None:
    click.echo(json.dumps(payload, sort_keys=True))


def _parse_vector(text: str, name: str) -> np.ndarray:
    try:
        return np.array([float(part) for part in text.split(",")])
    except ValueError:
        raise click.UsageError(f"{name} must be comma-separated numbers")


@click.group()
def main() -> None:
    """Quantum GAN simulator: targets, training, circuit demos."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--out-dir", type=click.Path(file_okay=False), default=".")
def target(config_path: str | None, out_dir: str) -> None:
    """Write the discretized target (JSON) and density curve (CSV)."""
    raw = _load_config(config_path)
    params = _svi_params(raw)
    n = int(raw.get("n_qubits", 4))
    try:
        dist = discretize(params, n)
    except ValueError as exc:
        raise click.ClickException(str(exc))

    out = Path(raw.get("out_dir", out_dir))
    out.mkdir(parents=True, exist_ok=True)
    _dump_json(
        out / "target.json",
        {
            "n_qubits": dist.n_qubits,
            "bin_edges": dist.bin_edges().tolist(),
            "masses": dist.masses.tolist(),
            "truncated_mass": dist.truncated_mass,
        },
    )
    ks = np.linspace(-1.0, 1.0, 401)
    lines = ["k,density"]
    # repr of the builtin float is the shortest round-trip form
    lines += [f"{float(k)!r},{float(density(params, k))!r}" for k in ks]
    (out / "density.csv").write_text("\n".join(lines) + "\n")
    click.echo(f"wrote {out / 'target.json'} and {out / 'density.csv'}")


@main.command(name="train")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--seed", type=int, default=None, help="overrides the config seed")
@click.option("--out-dir", type=click.Path(file_okay=False), default=".")
def train_cmd(config_path: str | None, seed: int | None, out_dir: str) -> None:
    """Run adversarial training; write trace.csv and train.json."""
    raw = _load_config(config_path)
    cfg = _train_config(raw, seed)
    params = _svi_params(raw)
    try:
        dist = discretize(params, cfg.n_qubits)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    disc = _discriminator(raw, cfg.n_qubits)

    trace = train(cfg, dist, disc)

    out = Path(raw.get("out_dir", out_dir))
    out.mkdir(parents=True, exist_ok=True)
    lines = ["epoch,score,fidelity,kl,trace_distance"]
    for epoch in range(trace.num_epochs):
        cells = (
            trace.scores[epoch],
            trace.fidelities[epoch],
            trace.kls[epoch],
            trace.trace_distances[epoch],
        )
        lines.append(f"{epoch}," + ",".join(repr(float(c)) for c in cells))
    (out / "trace.csv").write_text("\n".join(lines) + "\n")

    final_theta = trace.thetas[-1]
    generated = generate_state(cfg.n_qubits, GeneratorParams(final_theta))
    _dump_json(
        out / "train.json",
        {
            "theta": final_theta.tolist(),
            "w": trace.ws[-1].tolist(),
            "generated_masses": generated.probabilities().tolist(),
            "target_masses": dist.masses.tolist(),
            "final": {
                "score": float(trace.scores[-1]),
                "fidelity": float(trace.fidelities[-1]),
                "kl": float(trace.kls[-1]),
                "trace_distance": float(trace.trace_distances[-1]),
            },
        },
    )
    click.echo(f"wrote {out / 'trace.csv'} and {out / 'train.json'}")


@main.group()
def demo() -> None:
    """Print exact outcome distributions of the circuit primitives."""


@demo.command(name="qft")
@click.option("--n", type=int, default=1)
@click.option("--basis", type=int, default=0)
def demo_qft(n: int, basis: int) -> None:
    """Amplitudes of the Fourier transform of a basis state."""
    if n < 1 or not 0 <= basis < 2**n:
        raise click.UsageError("need n >= 1 and 0 <= basis < 2^n")
    state = qft(basis_ket(n, basis))
    for outcome, amp in enumerate(state.amps):
        _echo_line(
            {
                "outcome": outcome,
                "amplitude": [amp.real, amp.imag],
                "prob": abs(amp) ** 2,
            }
        )


@demo.command(name="qpe")
@click.option("--phi", type=float, required=True)
@click.option("--m", "ancillas", type=int, default=3)
def demo_qpe(phi: float, ancillas: int) -> None:
    """Phase estimation of diag(1, e^{2 pi i phi}) on eigenstate |1>."""
    if ancillas < 1:
        raise click.UsageError("need m >= 1")
    unitary = diagonal([0.0, phi])
    dist = qpe_distribution(unitary, basis_ket(1, 1), ancillas)
    for outcome, prob in enumerate(dist):
        if prob > _PROB_FLOOR:
            _echo_line({"outcome": outcome, "prob": float(prob)})


@demo.command(name="qip")
@click.option("--x", "x_text", type=str, required=True, help="comma-separated in [0,1)")
@click.option("--w", "w_text", type=str, required=True, help="comma-separated in [-1,1]")
@click.option("--precision", "-p", type=int, default=2)
@click.option("--m", "ancillas", type=int, default=3)
def demo_qip(x_text: str, w_text: str, precision: int, ancillas: int) -> None:
    """Inner-product register estimate and its outcome distribution."""
    x = _parse_vector(x_text, "--x")
    w = _parse_vector(w_text, "--w")
    if x.size != w.size:
        raise click.UsageError("--x and --w must have equal length")
    try:
        estimate, dist = qip(x, WeightVector(w), ancillas, precision)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    _echo_line({"estimate": int(estimate)})
    for outcome, prob in enumerate(dist):
        if prob > _PROB_FLOOR:
            _echo_line({"outcome": outcome, "prob": float(prob)})


@demo.command(name="neuron")
@click.option("--x", "x_text", type=str, required=True)
@click.option("--w", "w_text", type=str, required=True)
@click.option(
    "--activation",
    type=click.Choice(["sigmoid", "identity", "threshold"]),
    default="sigmoid",
)
@click.option("--m1", type=int, default=2)
@click.option("--m2", type=int, default=3)
@click.option("--precision", "-p", type=int, default=2)
def demo_neuron(
    x_text: str, w_text: str, activation: str, m1: int, m2: int, precision: int
) -> None:
    """Activation-register distribution of the quantum neuron."""
    x = _parse_vector(x_text, "--x")
    w = _parse_vector(w_text, "--w")
    if x.size != w.size:
        raise click.UsageError("--x and --w must have equal length")
    fn = _activation(activation, m1, m2)
    try:
        dist = neuron_forward(x, WeightVector(w), fn, m1, m2, precision)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    for outcome, prob in enumerate(dist):
        if prob > _PROB_FLOOR:
            _echo_line({"outcome": outcome, "prob": float(prob)})


if __name__ == "__main__":
    main()
