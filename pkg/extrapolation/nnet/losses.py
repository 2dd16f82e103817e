"""Training loss: Xi-weighted coefficient error plus an optional shape penalty."""
from dataclasses import dataclass

import numpy as np

from extrapolation.errors import DimensionMismatchError, DomainError
from extrapolation.nnet.mlp import forward


def loss_core(pred, truth, gram_xi):
    """(delta^T G delta, 2 G delta) with delta = pred - truth.

    Row-batched inputs give a value per row and a gradient per row.
    """
    pred = np.asarray(pred, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if pred.shape != truth.shape or pred.shape[-1] != gram_xi.shape[0]:
        raise DimensionMismatchError(
            f"Prediction {pred.shape}, truth {truth.shape} and Gram {gram_xi.shape} disagree"
        )
    delta = pred - truth
    weighted = delta @ gram_xi
    value = np.sum(weighted * delta, axis=-1)
    return (float(value) if pred.ndim == 1 else value), 2.0 * weighted


@dataclass
class MonotonePenalty:
    """relu(g(x_i) - g(x_{i+1})) summed over consecutive points of Xi.

    With two points this is the endpoint penalty relu(g(x_start) - g(x_end)).
    ``design`` holds the basis values at the ordered points.
    """

    design: np.ndarray

    def __call__(self, pred):
        pred = np.asarray(pred, dtype=float)
        diffs = self.design[:-1] - self.design[1:]
        drops = pred @ diffs.T
        active = (drops > 0).astype(float)
        value = np.sum(np.maximum(drops, 0.0), axis=-1)
        grad = active @ diffs
        return (float(value) if pred.ndim == 1 else value), grad


def loss_ext_monotone(family, x_start, x_end, xi=None):
    """Endpoint monotone penalty between two points of Xi."""
    points = np.array([x_start, x_end], dtype=float)
    if xi is not None and not np.all(xi.contains(points, closed=True)):
        raise DomainError(f"Penalty points {x_start}, {x_end} must lie in the closure of the extrapolation domain")
    return MonotonePenalty(design=family.evaluate(points))


def loss_ext_monotone_grid(family, grid, xi=None):
    grid = np.sort(np.asarray(grid, dtype=float))
    if xi is not None and not np.all(xi.contains(grid, closed=True)):
        raise DomainError("Penalty grid must lie in the closure of the extrapolation domain")
    return MonotonePenalty(design=family.evaluate(grid))


def loss_and_gradient(net, values, coefficients, gram_xi, cfg, penalty=None):
    """Batch-mean loss, d loss / d outputs, and the forward cache."""
    pred, cache = forward(net, values)
    core, core_grad = loss_core(pred, coefficients, gram_xi)
    batch = pred.shape[0]

    total = cfg.lambda_core * core
    grad = cfg.lambda_core * core_grad
    if penalty is not None and cfg.lambda_ext > 0:
        ext, ext_grad = penalty(pred)
        total = total + cfg.lambda_ext * ext
        grad = grad + cfg.lambda_ext * ext_grad

    return float(np.mean(total)), grad / batch, cache


def total_loss(values, coefficients, net, gram_xi, cfg, penalty=None):
    """Mean over the batch of lambda_core * core + lambda_ext * ext."""
    return loss_and_gradient(net, values, coefficients, gram_xi, cfg, penalty)[0]
