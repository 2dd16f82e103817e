import os
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()

OUTPUT_DIR = Path(os.environ.get("EXTRAP_OUTPUT_DIR", "runs"))
LOG_NAME = "extrap-log.txt"
LOG_RETENTION_DAYS = int(os.environ.get("EXTRAP_LOG_RETENTION_DAYS", "14"))

SCHEMA_VERSION = 1
BASIS_ORDERING_VERSION = 1

# Interval quadrature: composite Gauss-Legendre
QUAD_NODES = int(os.environ.get("EXTRAP_QUAD_NODES", "32"))
QUAD_PANELS = int(os.environ.get("EXTRAP_QUAD_PANELS", "1"))

# Sphere quadrature: Gauss-Legendre in cos(theta) x trapezoid in phi
_sphere_nodes = os.environ.get("EXTRAP_SPHERE_NODES", "64x128").lower().split("x")
SPHERE_THETA_NODES = int(_sphere_nodes[0])
SPHERE_PHI_NODES = int(_sphere_nodes[1])

SHOW_PROGRESS = os.environ.get("EXTRAP_SHOW_PROGRESS", "false").lower() == "true"

MONOTONE_GRID_POINTS = 1000
EVAL_POINTS_INTERVAL = 1000
EVAL_GRID_SPHERE = 100

# Relative eigenvalue floor below which a Gram matrix counts as rank deficient
RANK_TOLERANCE = 1e-10

SCENARIOS = ["cheb-noisy", "cheb-monotone", "anchors", "far-domains", "noise-sweep", "sphere"]
METHODS = ["next", "ls", "relu-net", "snake-net"]
BASIS_KINDS = ["chebyshev", "trigonometric", "spherical-harmonic", "anchor-frame"]
ACTIVATIONS = ["relu", "tanh", "snake", "identity"]
NORM_MODES = ["coeff", "function-omega"]
ANCHOR_SETS = ["decaying", "non-decaying"]

REQUIRED_CONFIG_KEYS = ["scenario", "seed"]
REPORT_COLUMNS = [
    "scenario",
    "method",
    "degree_or_setting",
    "xi_rmse",
    "coeff_rmse",
    "omega_rmse",
    "kappa",
    "seed",
    "wall_time_s",
]

# Every key a run config may carry, with its expected type(s)
CONFIG_KEYS = {
    "scenario": str,
    "seed": int,
    "omega": str,
    "xi": str,
    "basis": str,
    "degree": int,
    "anchor_set": str,
    "fillers": int,
    "fillers_include_constant": bool,
    "n_samples": int,
    "n_eval": int,
    "r_m": float,
    "r_sigma": float,
    "n_low": int,
    "n_high": int,
    "batch_size": int,
    "snr_db": (float, type(None)),
    "eval_snr_db": (list, type(None)),
    "monotone": bool,
    "norm": str,
    "lambda_core": float,
    "lambda_ext": float,
    "penalty": str,
    "learning_rate": float,
    "beta1": float,
    "beta2": float,
    "adam_eps": float,
    "lr_decay": float,
    "lr_decay_every": int,
    "max_steps": int,
    "min_steps": int,
    "window": int,
    "tolerance": float,
    "hidden_sizes": list,
    "activation": str,
    "learn_beta": bool,
    "beta_init": float,
    "log_every": int,
    "pointwise_steps": int,
    "methods": list,
    "validation_count": int,
    "validation_sets": list,
    "distances": list,
    "ridge": float,
}
