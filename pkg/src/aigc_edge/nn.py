"""Minimal multilayer-perceptron toolkit on plain numpy.

Just enough machinery for a small deterministic-policy learner: dense
layers with a handful of activations, exact reverse-mode gradients, a
bias-corrected Adam optimiser, soft (Polyak) target blending, and a text
checkpoint format.  Forward passes accept a single vector or a batch
matrix; gradients always come back in the shapes of the parameters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

ACTIVATIONS = ("relu", "sigmoid", "identity", "tanh")


@dataclass
class Layer:
    w: np.ndarray  # (out, in)
    b: np.ndarray  # (out,)
    activation: str


@dataclass
class MlpParams:
    layers: list[Layer]

    @property
    def layer_sizes(self) -> list[int]:
        return [self.layers[0].w.shape[1]] + [lay.w.shape[0] for lay in self.layers]

    @property
    def activations(self) -> list[str]:
        return [lay.activation for lay in self.layers]

    def copy(self) -> "MlpParams":
        return MlpParams([Layer(l.w.copy(), l.b.copy(), l.activation) for l in self.layers])


# Gradients mirror the parameter containers: one (dw, db) pair per layer.
Gradients = list[tuple[np.ndarray, np.ndarray]]


def mlp_init(layer_sizes, activations, rng: np.random.Generator) -> MlpParams:
    """Glorot-uniform weights, zero biases."""
    if len(layer_sizes) < 2:
        raise ConfigError("an MLP needs an input and an output size")
    if len(activations) != len(layer_sizes) - 1:
        raise ConfigError("need one activation per weight layer")
    for act in activations:
        if act not in ACTIVATIONS:
            raise ConfigError(f"unknown activation {act!r}")
    layers = []
    for fan_in, fan_out, act in zip(layer_sizes, layer_sizes[1:], activations):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        w = rng.uniform(-limit, limit, size=(fan_out, fan_in))
        layers.append(Layer(w=w, b=np.zeros(fan_out), activation=act))
    return MlpParams(layers)


def _apply(act: str, z: np.ndarray) -> np.ndarray:
    if act == "relu":
        return np.maximum(z, 0.0)
    if act == "sigmoid":
        # saturation is exact past |z| ~ 37; clamping avoids exp overflow
        return 1.0 / (1.0 + np.exp(-np.clip(z, -60.0, 60.0)))
    if act == "tanh":
        return np.tanh(z)
    return z


def _apply_grad(act: str, z: np.ndarray, a: np.ndarray) -> np.ndarray:
    if act == "relu":
        return (z > 0.0).astype(z.dtype)
    if act == "sigmoid":
        return a * (1.0 - a)
    if act == "tanh":
        return 1.0 - a * a
    return np.ones_like(z)


def mlp_forward(params: MlpParams, x) -> tuple[np.ndarray, list]:
    """Run the network; returns (output, cache for the backward pass)."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    a = x[None, :] if single else x
    if a.shape[1] != params.layers[0].w.shape[1]:
        raise ValueError(
            f"input dimension {a.shape[1]} does not match first layer "
            f"({params.layers[0].w.shape[1]})"
        )
    cache = [("input", a, single)]
    for lay in params.layers:
        z = a @ lay.w.T + lay.b
        a_next = _apply(lay.activation, z)
        cache.append((a, z, a_next))
        a = a_next
    return (a[0] if single else a), cache


def mlp_backward(params: MlpParams, cache, upstream) -> tuple[Gradients, np.ndarray]:
    """Exact gradients of the forward map for a given upstream dL/doutput."""
    if len(cache) != len(params.layers) + 1 or cache[0][0] != "input":
        raise ValueError("cache does not come from a matching forward pass")
    single = cache[0][2]
    up = np.asarray(upstream, dtype=float)
    if single:
        up = up[None, :]
    grads: Gradients = [None] * len(params.layers)  # type: ignore[list-item]
    for i in range(len(params.layers) - 1, -1, -1):
        lay = params.layers[i]
        a_prev, z, a = cache[i + 1]
        if up.shape != z.shape:
            raise ValueError(f"upstream gradient shape {up.shape} does not match layer output {z.shape}")
        dz = up * _apply_grad(lay.activation, z, a)
        grads[i] = (dz.T @ a_prev, dz.sum(axis=0))
        up = dz @ lay.w
    return grads, (up[0] if single else up)


@dataclass
class AdamState:
    """First/second moment accumulators plus the step counter."""

    m: Gradients
    v: Gradients
    step: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    skipped: int = 0  # updates dropped because a gradient was not finite

    @classmethod
    def for_params(cls, params: MlpParams) -> "AdamState":
        zeros = lambda: [(np.zeros_like(l.w), np.zeros_like(l.b)) for l in params.layers]
        return cls(m=zeros(), v=zeros())


def adam_step(params: MlpParams, grads: Gradients, state: AdamState, lr: float) -> bool:
    """One bias-corrected Adam update in place; returns False if skipped."""
    for dw, db in grads:
        if not (np.all(np.isfinite(dw)) and np.all(np.isfinite(db))):
            state.skipped += 1
            return False
    state.step += 1
    c1 = 1.0 - state.beta1**state.step
    c2 = 1.0 - state.beta2**state.step
    for lay, (dw, db), (mw, mb), (vw, vb) in zip(params.layers, grads, state.m, state.v):
        for param, g, mom, vel in ((lay.w, dw, mw, vw), (lay.b, db, mb, vb)):
            mom *= state.beta1
            mom += (1.0 - state.beta1) * g
            vel *= state.beta2
            vel += (1.0 - state.beta2) * g * g
            param -= lr * (mom / c1) / (np.sqrt(vel / c2) + state.eps)
    return True


def soft_update(target: MlpParams, online: MlpParams, epsilon: float) -> None:
    """Blend online parameters into the target at rate epsilon, in place."""
    if not 0.0 < epsilon <= 1.0:
        raise ConfigError("target blend rate must lie in (0, 1]")
    if target.layer_sizes != online.layer_sizes:
        raise ValueError("target and online networks have different shapes")
    for tgt, onl in zip(target.layers, online.layers):
        tgt.w *= 1.0 - epsilon
        tgt.w += epsilon * onl.w
        tgt.b *= 1.0 - epsilon
        tgt.b += epsilon * onl.b


# ---------------------------------------------------------------------------
# checkpoints: a sizes/activations header followed by row-major values


def save_mlp(path, params: MlpParams) -> None:
    with open(path, "w") as fh:
        fh.write(" ".join(str(s) for s in params.layer_sizes) + "\n")
        fh.write(" ".join(params.activations) + "\n")
        for lay in params.layers:
            for row in lay.w:
                fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")
            fh.write(" ".join(f"{v:.17g}" for v in lay.b) + "\n")


def load_mlp(path) -> MlpParams:
    with open(path) as fh:
        sizes = [int(tok) for tok in fh.readline().split()]
        acts = fh.readline().split()
        layers = []
        for fan_in, fan_out, act in zip(sizes, sizes[1:], acts):
            w = np.array([[float(tok) for tok in fh.readline().split()] for _ in range(fan_out)])
            b = np.array([float(tok) for tok in fh.readline().split()])
            if w.shape != (fan_out, fan_in) or b.shape != (fan_out,):
                raise ValueError(f"checkpoint {path} is inconsistent with its header")
            layers.append(Layer(w=w, b=b, activation=act))
    return MlpParams(layers)
