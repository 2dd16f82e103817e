"""Pointwise regression baselines: a network fit to x -> y on one function's samples."""
import logging

import numpy as np

from extrapolation.errors import DivergenceError, DomainError
from extrapolation.nnet.mlp import backward, forward, init_mlp
from extrapolation.nnet.optim import AdamState, adam_step
from extrapolation.nnet.train import learning_rate_at

logger = logging.getLogger(__name__)


def _column(points):
    points = np.asarray(points, dtype=float)
    if points.ndim != 1:
        raise DomainError("Pointwise baselines take scalar points only")
    return points[:, None]


def fit_pointwise(samples, train_cfg, activation, rng):
    """Full-batch MSE fit of a 1 -> hidden -> 1 network for pointwise_steps steps."""
    x = _column(samples.points)
    y = np.asarray(samples.values, dtype=float)[:, None]
    sizes = [1] + list(train_cfg.hidden_sizes) + [1]
    net = init_mlp(sizes, activation, rng, train_cfg.beta_init, train_cfg.learn_beta)
    state = AdamState()
    loss = float("nan")

    for step in range(train_cfg.pointwise_steps):
        pred, cache = forward(net, x)
        residual = pred - y
        loss = float(np.mean(residual ** 2))
        if not np.isfinite(loss):
            raise DivergenceError(f"Pointwise {activation} fit diverged at step {step}")
        grads = backward(net, cache, 2.0 * residual / len(y)).as_list(net)
        params, state = adam_step(
            net.parameters(),
            grads,
            state,
            learning_rate_at(train_cfg, step),
            train_cfg.beta1,
            train_cfg.beta2,
            train_cfg.adam_eps,
        )
        net.set_parameters(params)

    logger.debug("Pointwise %s fit finished with loss %.3e", activation, loss)
    return net


def predict_pointwise(net, points):
    return forward(net, _column(points))[0][:, 0]
