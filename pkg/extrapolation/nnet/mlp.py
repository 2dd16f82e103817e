"""Feed-forward network with hand-written forward and backward passes.

Batches are rows: Z = A_prev @ W + b. Hidden layers share one activation
kind; the head is always the identity.
"""
from dataclasses import dataclass, field

import numpy as np

from extrapolation import config
from extrapolation.errors import DimensionMismatchError, NonFiniteError


def relu(z, beta):
    return np.maximum(z, 0.0)


def relu_grad(z, beta):
    return (z > 0).astype(float)


def tanh_grad(z, beta):
    return 1.0 - np.tanh(z) ** 2


def snake(z, beta):
    """z + sin^2(beta z); the periodic part stays in [0, 1]."""
    return z + np.sin(beta * z) ** 2


def snake_grad(z, beta):
    return 1.0 + beta * np.sin(2 * beta * z)


def snake_beta_grad(z, beta):
    return z * np.sin(2 * beta * z)


ACTIVATIONS = {
    "relu": (relu, relu_grad),
    "tanh": (lambda z, beta: np.tanh(z), tanh_grad),
    "snake": (snake, snake_grad),
    "identity": (lambda z, beta: z, lambda z, beta: np.ones_like(z)),
}


@dataclass
class Mlp:
    sizes: list
    weights: list
    biases: list
    activations: list
    betas: list
    learn_beta: bool = False

    @property
    def n_inputs(self):
        return self.sizes[0]

    @property
    def n_outputs(self):
        return self.sizes[-1]

    def learnable_beta_layers(self):
        if not self.learn_beta:
            return []
        return [i for i, kind in enumerate(self.activations) if kind == "snake"]

    def parameters(self):
        """Flat list [W1, b1, ..., WL, bL, beta_i...] of arrays."""
        params = []
        for w, b in zip(self.weights, self.biases):
            params.extend([w, b])
        params.extend(np.array([self.betas[i]]) for i in self.learnable_beta_layers())
        return params

    def set_parameters(self, params):
        n_layers = len(self.weights)
        for i in range(n_layers):
            self.weights[i] = params[2 * i]
            self.biases[i] = params[2 * i + 1]
        for i, beta in zip(self.learnable_beta_layers(), params[2 * n_layers:]):
            self.betas[i] = float(beta[0])

    def to_record(self):
        return {
            "sizes": list(self.sizes),
            "activations": list(self.activations),
            "betas": [float(b) for b in self.betas],
            "learn_beta": self.learn_beta,
            "weights": [w.ravel().tolist() for w in self.weights],
            "biases": [b.tolist() for b in self.biases],
        }

    @classmethod
    def from_record(cls, record):
        sizes = [int(s) for s in record["sizes"]]
        weights = [
            np.array(w, dtype=float).reshape(n_in, n_out)
            for w, n_in, n_out in zip(record["weights"], sizes[:-1], sizes[1:])
        ]
        return cls(
            sizes=sizes,
            weights=weights,
            biases=[np.array(b, dtype=float) for b in record["biases"]],
            activations=list(record["activations"]),
            betas=[float(b) for b in record["betas"]],
            learn_beta=bool(record.get("learn_beta", False)),
        )


@dataclass
class Gradients:
    weights: list
    biases: list
    betas: dict = field(default_factory=dict)

    def as_list(self, net):
        grads = []
        for w, b in zip(self.weights, self.biases):
            grads.extend([w, b])
        grads.extend(np.array([self.betas.get(i, 0.0)]) for i in net.learnable_beta_layers())
        return grads


def init_mlp(sizes, activation, rng, beta_init=1.0, learn_beta=False):
    """Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and biases."""
    if activation not in config.ACTIVATIONS:
        raise ValueError(f"Unknown activation: {activation}")
    if len(sizes) < 2 or min(sizes) < 1:
        raise ValueError(f"Bad layer sizes: {sizes}")

    weights, biases = [], []
    for n_in, n_out in zip(sizes[:-1], sizes[1:]):
        bound = 1.0 / np.sqrt(n_in)
        weights.append(rng.uniform(-bound, bound, size=(n_in, n_out)))
        biases.append(rng.uniform(-bound, bound, size=n_out))

    n_layers = len(sizes) - 1
    return Mlp(
        sizes=list(sizes),
        weights=weights,
        biases=biases,
        activations=[activation] * (n_layers - 1) + ["identity"],
        betas=[float(beta_init)] * n_layers,
        learn_beta=learn_beta,
    )


def forward(net, inputs):
    """Returns (outputs, cache); a 1-D input gives a 1-D output."""
    inputs = np.asarray(inputs, dtype=float)
    single = inputs.ndim == 1
    a = inputs[None, :] if single else inputs
    if a.ndim != 2 or a.shape[1] != net.n_inputs:
        raise DimensionMismatchError(f"Network takes {net.n_inputs} inputs, got shape {inputs.shape}")

    cache = []
    for w, b, kind, beta in zip(net.weights, net.biases, net.activations, net.betas):
        z = a @ w + b
        cache.append((a, z))
        a = ACTIVATIONS[kind][0](z, beta)
        if not np.all(np.isfinite(a)):
            raise NonFiniteError(f"Non-finite activation in a {kind} layer")

    return (a[0] if single else a), cache


def backward(net, cache, output_gradient):
    """Parameter gradients of sum(output_gradient * outputs)."""
    d_a = np.asarray(output_gradient, dtype=float)
    if d_a.ndim == 1:
        d_a = d_a[None, :]
    if len(cache) != len(net.weights) or cache[-1][1].shape != d_a.shape:
        raise DimensionMismatchError("Cache does not match this network or gradient")

    n_layers = len(net.weights)
    grad_w, grad_b, grad_beta = [None] * n_layers, [None] * n_layers, {}
    learnable = set(net.learnable_beta_layers())
    for i in reversed(range(n_layers)):
        a_prev, z = cache[i]
        kind, beta = net.activations[i], net.betas[i]
        d_z = d_a * ACTIVATIONS[kind][1](z, beta)
        grad_w[i] = a_prev.T @ d_z
        grad_b[i] = d_z.sum(axis=0)
        if i in learnable:
            grad_beta[i] = float(np.sum(d_a * snake_beta_grad(z, beta)))
        d_a = d_z @ net.weights[i].T

    return Gradients(weights=grad_w, biases=grad_b, betas=grad_beta)
