"""Adversarial objective, gradients, and the alternating training loop.

The score S(theta, w) is the probability gap between labelling the
target Real and labelling the generated state Real. The discriminator
ascends it, the generator descends it; at the (unique pure-state)
equilibrium the generated state equals the target and the score is 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .discriminator import (
    DiscriminatorConfig,
    DiscriminatorWeights,
    FastDiscriminator,
    threshold_activation,
)
from .generator import GeneratorParams, generate_state, num_params, param_kinds
from .metrics import fidelity, kl_divergence, trace_distance_pure
from .statevec import StateVector
from .svi import DiscreteDistribution, target_state

# Shift-rule coefficients for controlled rotations, whose score is a
# trigonometric polynomial in the angle with frequencies 1/2 and 1.
_CRY_SHIFT_PLUS = (np.sqrt(2.0) + 1.0) / (4.0 * np.sqrt(2.0))
_CRY_SHIFT_MINUS = (np.sqrt(2.0) - 1.0) / (4.0 * np.sqrt(2.0))


@dataclass(frozen=True)
class ScoreValue:
    """Difference of two labelling probabilities, so always in [-1, 1]."""

    value: float

    def __post_init__(self):
        if not np.isfinite(self.value) or abs(self.value) > 1.0 + 1e-9:
            raise ValueError(f"score {self.value} outside [-1, 1]")

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters of the alternating gradient game."""

    n_qubits: int
    epochs: int
    n_d: int = 9
    n_g: int = 1
    lr_d: float = 0.05
    lr_g: float = 0.05
    shots: int = 0
    seed: int = 0
    fd_step: float = 1e-5

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be at least 1")
        if self.epochs < 1 or self.n_d < 1 or self.n_g < 1:
            raise ValueError("epochs, n_d and n_g must be at least 1")
        if self.lr_d <= 0.0 or self.lr_g <= 0.0:
            raise ValueError("learning rates must be positive")
        if self.shots < 0:
            raise ValueError("shots must be nonnegative (0 = exact)")
        if self.fd_step <= 0.0:
            raise ValueError("fd_step must be positive")


@dataclass(frozen=True)
class TrainTrace:
    """One row per epoch, recorded after that epoch's updates."""

    scores: np.ndarray
    fidelities: np.ndarray
    kls: np.ndarray
    trace_distances: np.ndarray
    thetas: np.ndarray
    ws: np.ndarray

    def __post_init__(self):
        e = self.scores.shape[0]
        if e < 1:
            raise ValueError("trace must contain at least one epoch")
        for name in ("fidelities", "kls", "trace_distances", "thetas", "ws"):
            if getattr(self, name).shape[0] != e:
                raise ValueError(f"{name} disagrees with scores on epoch count")

    @property
    def num_epochs(self) -> int:
        return self.scores.shape[0]


def _gen_amps(n: int, thetas: np.ndarray) -> np.ndarray:
    return generate_state(n, GeneratorParams(thetas)).amps


def _check_instance(theta, w, target, cfg):
    n = target.num_qubits
    if theta.thetas.size != num_params(n):
        raise ValueError(
            f"{theta.thetas.size} angles do not fit the {n}-qubit ansatz "
            f"({num_params(n)} expected)"
        )
    if w.w.size != n:
        raise ValueError(f"need {n} weights, got {w.w.size}")
    return n


def _exact_score(fast, wvec, target_amps, gen_amps) -> float:
    return fast.p_real(wvec, target_amps) - fast.p_real(wvec, gen_amps)


def score(
    theta: GeneratorParams,
    w: DiscriminatorWeights,
    target: StateVector,
    cfg: DiscriminatorConfig,
) -> ScoreValue:
    """S = P(label target Real) - P(label generated Real), exact."""
    n = _check_instance(theta, w, target, cfg)
    fast = FastDiscriminator(cfg, n)
    return ScoreValue(_exact_score(fast, w.w, target.amps, _gen_amps(n, theta.thetas)))


def score_sampled(
    theta: GeneratorParams,
    w: DiscriminatorWeights,
    target: StateVector,
    cfg: DiscriminatorConfig,
    shots: int,
    seed: int,
) -> ScoreValue:
    """Monte Carlo estimate of the score from `shots` labelling rounds each."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    n = _check_instance(theta, w, target, cfg)
    fast = FastDiscriminator(cfg, n)
    p_t = fast.p_real(w.w, target.amps)
    p_g = fast.p_real(w.w, _gen_amps(n, theta.thetas))
    rng = np.random.default_rng(seed)
    real_hits = rng.random(shots) < p_t
    fake_hits = rng.random(shots) < p_g
    return ScoreValue(float(real_hits.mean() - fake_hits.mean()))


def _grad_theta_raw(fast, n, thetas, wvec, target_amps) -> np.ndarray:
    # P(label target Real) is constant in theta and cancels from every
    # shifted difference, so only the generated term is evaluated.
    kinds = param_kinds(n)
    grad = np.empty(thetas.size)

    def p_g(i, delta):
        probe = thetas.copy()
        probe[i] += delta
        return fast.p_real(wvec, _gen_amps(n, probe))

    half = np.pi / 2.0
    for i, kind in enumerate(kinds):
        if kind == "ry":
            grad[i] = -0.5 * (p_g(i, half) - p_g(i, -half))
        else:
            grad[i] = -(
                _CRY_SHIFT_PLUS * (p_g(i, half) - p_g(i, -half))
                - _CRY_SHIFT_MINUS * (p_g(i, 3 * half) - p_g(i, -3 * half))
            )
    return grad


def grad_theta(
    theta: GeneratorParams,
    w: DiscriminatorWeights,
    target: StateVector,
    cfg: DiscriminatorConfig,
) -> np.ndarray:
    """dS/dtheta by the shift rule, exact per gate kind.

    Plain RY angles use the two-point rule at +-pi/2; CRY angles carry
    the extra half frequency and use the four-point rule.
    """
    n = _check_instance(theta, w, target, cfg)
    fast = FastDiscriminator(cfg, n)
    return _grad_theta_raw(fast, n, theta.thetas, w.w, target.amps)


def _grad_w_raw(fast, wvec, target_amps, gen_amps, fd_step) -> np.ndarray:
    grad = np.empty(wvec.size)
    for i in range(wvec.size):
        up = wvec.copy()
        up[i] += fd_step
        down = wvec.copy()
        down[i] -= fd_step
        grad[i] = (
            _exact_score(fast, up, target_amps, gen_amps)
            - _exact_score(fast, down, target_amps, gen_amps)
        ) / (2.0 * fd_step)
    return grad


def grad_w(
    theta: GeneratorParams,
    w: DiscriminatorWeights,
    target: StateVector,
    cfg: DiscriminatorConfig,
    fd_step: float = 1e-5,
) -> np.ndarray:
    """dS/dw by central finite differences.

    Each weight enters many controlled phase gates at different scales,
    so no small shift-rule stencil is exact; finite differences are.
    """
    if fd_step <= 0.0:
        raise ValueError("fd_step must be positive")
    n = _check_instance(theta, w, target, cfg)
    fast = FastDiscriminator(cfg, n)
    return _grad_w_raw(fast, w.w, target.amps, _gen_amps(n, theta.thetas), fd_step)


def minmax_gap(
    theta: GeneratorParams,
    target: StateVector,
    cfg: DiscriminatorConfig,
    w_grid: np.ndarray,
) -> float:
    """Best score any discriminator on the grid achieves against theta.

    Bounded above by half the trace distance between the target and the
    generated state, whatever the grid.
    """
    grid = np.asarray(w_grid, dtype=np.float64)
    if grid.ndim != 2 or grid.shape[1] != target.num_qubits:
        raise ValueError(f"w_grid must have shape (k, {target.num_qubits})")
    n = target.num_qubits
    fast = FastDiscriminator(cfg, n)
    gen = _gen_amps(n, theta.thetas)
    return max(_exact_score(fast, row, target.amps, gen) for row in grid)


def training_discriminator(n: int) -> DiscriminatorConfig:
    """Discriminator configuration train() falls back to.

    Any activation that sends a zero inner product to an exactly
    representable register value (the sigmoid midpoint does, for every
    register size) labels the all-zero-bits basis state Real with
    probability 1 under every weight vector; once the generator
    overloads that state the game has no ascent direction left and
    freezes at w = 0. The mid-cell threshold activation dodges the
    representable values, so the label probability crosses one half at
    t = 0 with nonzero slope and the weight gradient stays alive.
    """
    m2 = DiscriminatorConfig.for_width(n).m2 + 1
    return DiscriminatorConfig(
        m1=2, m2=m2, activation=threshold_activation(2, 2.0**m2)
    )


def train(
    cfg: TrainConfig,
    target: DiscreteDistribution,
    disc: DiscriminatorConfig | None = None,
    theta_init: np.ndarray | None = None,
) -> TrainTrace:
    """Alternating SGD: n_d ascent steps on w, then n_g descent on theta.

    Weights are clipped back into [-1, 1]^n after every ascent step.
    Random draws (initialization, restarts, and labelling rounds when
    shots > 0) come from one seeded generator in a fixed order, so equal
    seeds give bitwise-equal traces.

    Angles start at a uniform draw from [0, pi] that is resampled until
    every generated amplitude is nonnegative like the target's. The
    label probability is blind to amplitude signs (the discriminator
    never mixes data basis states), so a sign mismatch could never be
    trained away; starting aligned keeps the fidelity target reachable.
    At n = 2 the first draw always qualifies; with the mixing layer
    present a draw qualifies about one time in ten.

    When an ascent phase ends without a separating witness (score not
    above zero), the next phase starts from a fresh uniform weight draw
    instead of the dead chain. Local ascent likes to retreat to w = 0,
    where every basis state is labelled Real with probability 1/2 and
    both gradients vanish identically; a restarted chain escapes that
    trap whenever any separating weights exist. Once the distributions
    match, no weights separate them, so restarts fire every epoch and
    change nothing.
    """
    n = cfg.n_qubits
    if target.n_qubits != n:
        raise ValueError(
            f"target has {target.n_qubits} qubits, config says {n}"
        )
    if disc is None:
        disc = training_discriminator(n)
    fast = FastDiscriminator(disc, n)
    rng = np.random.default_rng(cfg.seed)
    thetas = rng.uniform(0.0, np.pi, num_params(n))
    while (_gen_amps(n, thetas).real < -1e-12).any():
        thetas = rng.uniform(0.0, np.pi, num_params(n))
    if theta_init is not None:
        thetas = np.array(theta_init, dtype=float)
        if thetas.size != num_params(n):
            raise ValueError(
                f"theta_init has {thetas.size} angles, ansatz takes {num_params(n)}"
            )
    wvec = rng.uniform(-1.0, 1.0, n)

    target_sv = target_state(target)
    t_amps = target_sv.amps

    def sampled(exact_p: float) -> float:
        return float((rng.random(cfg.shots) < exact_p).mean())

    def score_of(wv, gen) -> float:
        p_t = fast.p_real(wv, t_amps)
        p_g = fast.p_real(wv, gen)
        if cfg.shots == 0:
            return p_t - p_g
        return sampled(p_t) - sampled(p_g)

    e = cfg.epochs
    scores = np.empty(e)
    fids = np.empty(e)
    kls = np.empty(e)
    tds = np.empty(e)
    theta_rows = np.empty((e, thetas.size))
    w_rows = np.empty((e, n))

    needs_restart = False
    for epoch in range(e):
        gen = _gen_amps(n, thetas)
        if needs_restart:
            wvec = rng.uniform(-1.0, 1.0, n)
        for _ in range(cfg.n_d):
            if cfg.shots == 0:
                gw = _grad_w_raw(fast, wvec, t_amps, gen, cfg.fd_step)
            else:
                gw = np.empty(n)
                for i in range(n):
                    up = wvec.copy()
                    up[i] += cfg.fd_step
                    down = wvec.copy()
                    down[i] -= cfg.fd_step
                    gw[i] = (score_of(up, gen) - score_of(down, gen)) / (
                        2.0 * cfg.fd_step
                    )
            wvec = np.clip(wvec + cfg.lr_d * gw, -1.0, 1.0)
        needs_restart = score_of(wvec, gen) <= 0.0
        for _ in range(cfg.n_g):
            if cfg.shots == 0:
                gt = _grad_theta_raw(fast, n, thetas, wvec, t_amps)
            else:
                kinds = param_kinds(n)
                gt = np.empty(thetas.size)
                half = np.pi / 2.0
                for i, kind in enumerate(kinds):
                    def s_at(delta):
                        probe = thetas.copy()
                        probe[i] += delta
                        return score_of(wvec, _gen_amps(n, probe))

                    if kind == "ry":
                        gt[i] = 0.5 * (s_at(half) - s_at(-half))
                    else:
                        gt[i] = _CRY_SHIFT_PLUS * (
                            s_at(half) - s_at(-half)
                        ) - _CRY_SHIFT_MINUS * (s_at(3 * half) - s_at(-3 * half))
            thetas = thetas - cfg.lr_g * gt

        gen_sv = StateVector(n, _gen_amps(n, thetas))
        scores[epoch] = _exact_score(fast, wvec, t_amps, gen_sv.amps)
        fids[epoch] = fidelity(target_sv, gen_sv)
        kls[epoch] = kl_divergence(target, gen_sv)
        tds[epoch] = trace_distance_pure(target_sv, gen_sv)
        theta_rows[epoch] = thetas
        w_rows[epoch] = wvec

    return TrainTrace(scores, fids, kls, tds, theta_rows, w_rows)
