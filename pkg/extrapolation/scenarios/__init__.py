"""Experiment scenarios; each module exposes run functions and their default settings."""

from extrapolation import config

# Shared by every scenario; a scenario's own defaults and the run config override these
COMMON_DEFAULTS = {
    "n_samples": 100,
    "n_eval": config.EVAL_POINTS_INTERVAL,
    "r_m": 1.0,
    "r_sigma": 0.25,
    "n_low": 0,
    "batch_size": 64,
    "norm": "coeff",
    "monotone": False,
    "lambda_core": 1.0,
    "lambda_ext": 0.0,
    "penalty": "endpoints",
    "learning_rate": 1e-3,
    "beta1": 0.9,
    "beta2": 0.999,
    "adam_eps": 1e-8,
    "lr_decay": 0.5,
    "lr_decay_every": 5000,
    "max_steps": 20000,
    "min_steps": 5000,
    "window": 200,
    "tolerance": 1e-5,
    "hidden_sizes": [256, 256],
    "activation": "relu",
    "learn_beta": False,
    "beta_init": 1.0,
    "log_every": 1000,
    "pointwise_steps": 2000,
    "validation_count": 100,
    "ridge": 0.0,
}
