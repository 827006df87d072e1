"""Distributional adversarial network on numpy with hand-written backpropagation.

Four small fully-connected nets take part:

* generator ``G``: Gaussian noise -> (0, 1)^D
* discriminator ``Dnet``: point -> probability the point is real
* encoder ``enc``: point -> embedding; averaging it over a set gives the
  deep mean embedding of that set
* two-sample head ``head``: |embedding(A) - embedding(B)| -> probability that
  A and B come from the same distribution

All arithmetic is float64 so gradients can be checked against finite
differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .core import Bounds, ContractError, Population

EPS = 1e-7
BLOCKS = ("G", "Dnet", "enc", "head")

_ACT = {
    "tanh": (np.tanh, lambda y: 1.0 - y**2),
    "sigmoid": (lambda a: 0.5 * (1.0 + np.tanh(0.5 * a)), lambda y: y * (1.0 - y)),
    "linear": (lambda a: a, lambda y: np.ones_like(y)),
}


class TrainingError(ArithmeticError):
    """A gradient or parameter became non-finite."""

    def __init__(self, message: str, block: str):
        super().__init__(message)
        self.block = block


@dataclass
class MlpParams:
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    activations: tuple[str, ...]

    def __post_init__(self):
        if not len(self.weights) == len(self.biases) == len(self.activations):
            raise ContractError("one weight, bias and activation per layer")
        for i, (W, b) in enumerate(zip(self.weights, self.biases)):
            if b.shape != (W.shape[1],):
                raise ContractError(f"layer {i}: bias {b.shape} for weight {W.shape}")
            if i and self.weights[i - 1].shape[1] != W.shape[0]:
                raise ContractError(f"layer {i} input does not match layer {i - 1} output")
            if self.activations[i] not in _ACT:
                raise ContractError(f"unknown activation {self.activations[i]!r}")

    @classmethod
    def init(cls, sizes: list[int], activations: tuple[str, ...],
             rng: np.random.Generator) -> MlpParams:
        """Glorot-uniform weights, zero biases."""
        Ws, bs = [], []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            limit = np.sqrt(6.0 / (fan_in + fan_out))
            Ws.append(rng.uniform(-limit, limit, (fan_in, fan_out)))
            bs.append(np.zeros(fan_out))
        return cls(Ws, bs, tuple(activations))

    def copy(self) -> MlpParams:
        return MlpParams([W.copy() for W in self.weights], [b.copy() for b in self.biases],
                         self.activations)

    @property
    def in_dim(self) -> int:
        return self.weights[0].shape[0]

    @property
    def out_dim(self) -> int:
        return self.weights[-1].shape[1]

    def arrays(self) -> list[np.ndarray]:
        return [a for pair in zip(self.weights, self.biases) for a in pair]


def forward(params: MlpParams, x: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """Output and the per-layer activations needed for backward."""
    acts = [np.asarray(x, dtype=np.float64)]
    for W, b, tag in zip(params.weights, params.biases, params.activations):
        acts.append(_ACT[tag][0](acts[-1] @ W + b))
    return acts[-1], acts


def backward(params: MlpParams, acts: list[np.ndarray],
             d_out: np.ndarray) -> tuple[list[np.ndarray], np.ndarray]:
    """Parameter gradients (flattened like ``MlpParams.arrays``) and the input gradient."""
    grads: list[np.ndarray] = []
    delta = d_out
    for i in reversed(range(len(params.weights))):
        delta = delta * _ACT[params.activations[i]][1](acts[i + 1])
        grads[:0] = [acts[i].T @ delta, delta.sum(axis=0)]
        delta = delta @ params.weights[i].T
    return grads, delta


def apply_update(params: MlpParams, grads: list[np.ndarray], step: float) -> MlpParams:
    """``params + step * grads``; negative ``step`` descends."""
    new = params.copy()
    for i in range(len(new.weights)):
        new.weights[i] += step * grads[2 * i]
        new.biases[i] += step * grads[2 * i + 1]
    return new


@dataclass(frozen=True)
class DanConfig:
    hidden: int = 64
    embed_dim: int = 32
    noise_dim: int = 30
    learning_rate: float = 0.05
    steps_per_generation: int = 20
    k2s: int = 5
    lambda1: float = 1.0
    lambda2: float = 1.0

    def __post_init__(self):
        for name in ("hidden", "embed_dim", "noise_dim", "steps_per_generation", "k2s"):
            if getattr(self, name) < 1:
                raise ContractError(f"{name} must be >= 1")
        if self.learning_rate < 0 or self.lambda1 < 0 or self.lambda2 < 0:
            raise ContractError("learning rate and loss weights must be nonnegative")


@dataclass
class DanModel:
    G: MlpParams
    Dnet: MlpParams
    enc: MlpParams
    head: MlpParams
    noise_dim: int
    lambda1: float = 1.0
    lambda2: float = 1.0
    step: int = 0

    def block(self, name: str) -> MlpParams:
        return getattr(self, name)

    @property
    def data_dim(self) -> int:
        return self.G.out_dim


def init_model(data_dim: int, config: DanConfig, rng: np.random.Generator) -> DanModel:
    h, e, z = config.hidden, config.embed_dim, config.noise_dim
    return DanModel(
        G=MlpParams.init([z, h, data_dim], ("tanh", "sigmoid"), rng),
        Dnet=MlpParams.init([data_dim, h, 1], ("tanh", "sigmoid"), rng),
        enc=MlpParams.init([data_dim, h, e], ("tanh", "linear"), rng),
        head=MlpParams.init([e, 1], ("sigmoid",), rng),
        noise_dim=z,
        lambda1=config.lambda1,
        lambda2=config.lambda2,
    )


def _clamped(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Probabilities clamped to [EPS, 1 - EPS] and the mask where the clamp is inactive."""
    return np.clip(p, EPS, 1.0 - EPS), (p > EPS) & (p < 1.0 - EPS)


def dme_encode(encoder: MlpParams, samples: np.ndarray) -> np.ndarray:
    """Mean of the pointwise embedding over a sample set."""
    S = np.atleast_2d(np.asarray(samples, dtype=np.float64))
    if len(S) == 0:
        raise ContractError("cannot embed an empty sample set")
    return forward(encoder, S)[0].mean(axis=0)


def two_sample_confidence(model: DanModel, A: np.ndarray, B: np.ndarray) -> float:
    gap = np.abs(dme_encode(model.enc, A) - dme_encode(model.enc, B))
    return float(forward(model.head, gap[None])[0][0, 0])


@dataclass(frozen=True)
class HalfSplit:
    """Row orders used to cut the real and generated batches into halves."""

    real: np.ndarray
    fake: np.ndarray

    @classmethod
    def draw(cls, n_real: int, n_fake: int, rng: np.random.Generator) -> HalfSplit:
        return cls(rng.permutation(n_real), rng.permutation(n_fake))

    @staticmethod
    def halves(order: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        h = len(order) // 2
        return order[:h], order[h:2 * h]


@dataclass
class Gradients:
    """Gradients of a scalar objective for every network, plus d/d(generated rows)."""

    blocks: dict[str, list[np.ndarray]] = field(default_factory=dict)
    fake: np.ndarray | None = None

    def add(self, name: str, grads: list[np.ndarray]):
        if name in self.blocks:
            self.blocks[name] = [a + b for a, b in zip(self.blocks[name], grads)]
        else:
            self.blocks[name] = grads


# (first set, second set, same distribution?) for the four two-sample terms
_PAIRS = (("X1", "X2", True), ("Y1", "Y2", True), ("X1", "Y2", False), ("Y1", "X2", False))


def _two_sample(model: DanModel, real: np.ndarray, fake: np.ndarray, split: HalfSplit,
                weight: float = 1.0, grads: Gradients | None = None) -> float:
    """Cross-entropy two-sample objective; accumulates ``weight``-scaled gradients."""
    if len(real) < 2 or len(fake) < 2:
        raise ContractError("two-sample loss needs at least two real and two generated rows")
    x1, x2 = HalfSplit.halves(split.real)
    y1, y2 = HalfSplit.halves(split.fake)
    rows = {"X1": (real, x1), "X2": (real, x2), "Y1": (fake, y1), "Y2": (fake, y2)}
    enc_out = {k: forward(model.enc, src[idx]) for k, (src, idx) in rows.items()}
    emb = {k: out.mean(axis=0) for k, (out, _) in enc_out.items()}
    d_emb = {k: np.zeros_like(e) for k, e in emb.items()}

    value = 0.0
    for a, b, same in _PAIRS:
        diff = emb[a] - emb[b]
        p_raw, head_acts = forward(model.head, np.abs(diff)[None])
        p, active = _clamped(p_raw)
        value += float(np.log(p if same else 1.0 - p)[0, 0])
        if grads is None:
            continue
        d_p = weight * active * (1.0 / p if same else -1.0 / (1.0 - p))
        g_head, d_gap = backward(model.head, head_acts, d_p)
        grads.add("head", g_head)
        d_diff = d_gap[0] * np.sign(diff)
        d_emb[a] += d_diff
        d_emb[b] -= d_diff

    if grads is not None:
        if grads.fake is None:
            grads.fake = np.zeros_like(fake)
        for k, (src, idx) in rows.items():
            out, acts = enc_out[k]
            d_rows = np.broadcast_to(d_emb[k] / len(idx), out.shape)
            g_enc, d_in = backward(model.enc, acts, d_rows)
            grads.add("enc", g_enc)
            if k.startswith("Y"):
                np.add.at(grads.fake, idx, d_in)
    return value


def _disc_bracket(model: DanModel, real: np.ndarray, fake: np.ndarray,
                  weight: float = 1.0, grads: Gradients | None = None) -> float:
    """mean log Dnet(real) + mean log(1 - Dnet(fake))."""
    p_real_raw, acts_real = forward(model.Dnet, real)
    p_fake_raw, acts_fake = forward(model.Dnet, fake)
    p_real, act_real = _clamped(p_real_raw)
    p_fake, act_fake = _clamped(p_fake_raw)
    value = float(np.mean(np.log(p_real)) + np.mean(np.log(1.0 - p_fake)))
    if grads is not None:
        g_r, _ = backward(model.Dnet, acts_real, weight * act_real / (len(real) * p_real))
        g_f, d_fake = backward(model.Dnet, acts_fake,
                               -weight * act_fake / (len(fake) * (1.0 - p_fake)))
        grads.add("Dnet", [a + b for a, b in zip(g_r, g_f)])
        grads.fake = d_fake if grads.fake is None else grads.fake + d_fake
    return value


def _generate(model: DanModel, noise: np.ndarray):
    return forward(model.G, noise)


def adversarial_objective(model: DanModel, real: np.ndarray, noise: np.ndarray,
                          split: HalfSplit, with_grads: bool = True,
                          lambda1: float | None = None, lambda2: float | None = None):
    """Weighted adversarial value and its gradients for all four networks.

    ``lambda1`` and ``lambda2`` default to the model's own weights.
    """
    lam1 = model.lambda1 if lambda1 is None else lambda1
    lam2 = model.lambda2 if lambda2 is None else lambda2
    real = np.asarray(real, dtype=np.float64)
    fake, g_acts = _generate(model, noise)
    grads = Gradients() if with_grads else None
    value = 0.0
    if lam1:
        value += lam1 * _disc_bracket(model, real, fake, lam1, grads)
    if lam2:
        value += lam2 * _two_sample(model, real, fake, split, lam2, grads)
    if grads is not None:
        d_fake = np.zeros_like(fake) if grads.fake is None else grads.fake
        grads.add("G", backward(model.G, g_acts, d_fake)[0])
    return value, grads


def two_sample_loss(model: DanModel, real: np.ndarray, fake: np.ndarray,
                    rng: np.random.Generator | None = None,
                    split: HalfSplit | None = None) -> float:
    """Four-term two-sample log-likelihood over a random halving of both sets."""
    real = np.atleast_2d(np.asarray(real, dtype=np.float64))
    fake = np.atleast_2d(np.asarray(fake, dtype=np.float64))
    if split is None:
        if rng is None:
            raise ContractError("pass either rng or an explicit split")
        split = HalfSplit.draw(len(real), len(fake), rng)
    return _two_sample(model, real, fake, split)


def adversarial_value(model: DanModel, real: np.ndarray, noise: np.ndarray,
                      rng: np.random.Generator | None = None,
                      split: HalfSplit | None = None) -> float:
    if split is None:
        if rng is None:
            raise ContractError("pass either rng or an explicit split")
        split = HalfSplit.draw(len(real), len(noise), rng)
    return adversarial_objective(model, real, noise, split, with_grads=False)[0]


def _checked(grads: list[np.ndarray], block: str) -> list[np.ndarray]:
    if not all(np.all(np.isfinite(g)) for g in grads):
        raise TrainingError(f"non-finite gradient in {block}", block)
    return grads


def train_step(model: DanModel, real: np.ndarray, config: DanConfig,
               rng: np.random.Generator) -> DanModel:
    """One adversarial round: discriminator up, two-sample pair up (every k2s steps), generator down."""
    real = np.asarray(real, dtype=np.float64)
    if len(real) < 4:
        raise ContractError(f"training needs at least 4 real rows, got {len(real)}")
    lr = config.learning_rate
    noise = rng.standard_normal((len(real), model.noise_dim))
    split = HalfSplit.draw(len(real), len(noise), rng)
    m = replace(model)

    _, g = adversarial_objective(m, real, noise, split, lambda1=m.lambda1, lambda2=0.0)
    m.Dnet = apply_update(m.Dnet, _checked(g.blocks["Dnet"], "Dnet"), lr)

    if m.step % config.k2s == 0:
        _, g = adversarial_objective(m, real, noise, split, lambda1=0.0, lambda2=1.0)
        m.enc = apply_update(m.enc, _checked(g.blocks["enc"], "enc"), lr)
        m.head = apply_update(m.head, _checked(g.blocks["head"], "head"), lr)

    _, g = adversarial_objective(m, real, noise, split)
    m.G = apply_update(m.G, _checked(g.blocks["G"], "G"), -lr)
    m.step += 1
    return m


def train(model: DanModel, real: np.ndarray, config: DanConfig, rng: np.random.Generator,
          steps: int | None = None) -> DanModel:
    for _ in range(config.steps_per_generation if steps is None else steps):
        model = train_step(model, real, config, rng)
    return model


def generate(model: DanModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` generator outputs in (0, 1)^D."""
    if n == 0:
        return np.empty((0, model.data_dim))
    return _generate(model, rng.standard_normal((n, model.noise_dim)))[0]


def sample_offspring(model: DanModel, n: int, bounds: Bounds, rng: np.random.Generator,
                     n_obj: int) -> Population:
    """Generated individuals rescaled into ``bounds``; objectives left unevaluated."""
    if n < 0:
        raise ContractError("offspring count must be nonnegative")
    if bounds.dim != model.data_dim:
        raise ContractError(f"model generates {model.data_dim} variables, bounds have {bounds.dim}")
    return Population.unevaluated(bounds.denormalize(generate(model, n, rng)).reshape(n, bounds.dim), n_obj)


def save_model(model: DanModel, path: str | Path) -> None:
    """Lossless ``.npz`` checkpoint of every parameter block."""
    arrays = {}
    for name in BLOCKS:
        p = model.block(name)
        arrays[f"{name}.activations"] = np.array(p.activations)
        for i, (W, b) in enumerate(zip(p.weights, p.biases)):
            arrays[f"{name}.W{i}"] = W
            arrays[f"{name}.b{i}"] = b
    arrays["meta"] = np.array([model.noise_dim, model.step], dtype=np.int64)
    arrays["lambdas"] = np.array([model.lambda1, model.lambda2])
    np.savez(path, **arrays)


def load_model(path: str | Path) -> DanModel:
    with np.load(path) as data:
        blocks = {}
        for name in BLOCKS:
            acts = tuple(str(a) for a in data[f"{name}.activations"])
            blocks[name] = MlpParams(
                [data[f"{name}.W{i}"] for i in range(len(acts))],
                [data[f"{name}.b{i}"] for i in range(len(acts))],
                acts,
            )
        noise_dim, step = (int(v) for v in data["meta"])
        lam1, lam2 = (float(v) for v in data["lambdas"])
    return DanModel(**blocks, noise_dim=noise_dim, lambda1=lam1, lambda2=lam2, step=step)
