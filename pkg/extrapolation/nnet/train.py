"""Training loop: fresh synthetic batches every step, Adam, moving-average stop rule."""
import logging
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from extrapolation import config
from extrapolation.bases import BasisFamily, eval_function
from extrapolation.datagen import GenConfig, make_batch, stack_batch
from extrapolation.domains import grid_points, gram_matrix, parse_domain, union
from extrapolation.errors import DivergenceError, DomainError
from extrapolation.nnet.losses import loss_and_gradient, loss_ext_monotone, loss_ext_monotone_grid
from extrapolation.nnet.mlp import Mlp, backward, forward, init_mlp
from extrapolation.nnet.optim import AdamState, adam_step

try:
    from tqdm import tqdm  # type: ignore
except ImportError:
    tqdm = None

logger = logging.getLogger(__name__)

PENALTY_GRID_POINTS = 100


@dataclass
class TrainConfig:
    lambda_core: float = 1.0
    lambda_ext: float = 0.0
    penalty: str = "endpoints"
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    lr_decay: float = 1.0
    lr_decay_every: int = 1000
    max_steps: int = 5000
    min_steps: int = 0
    window: int = 200
    tolerance: float = 1e-5
    hidden_sizes: list = field(default_factory=lambda: [256, 256])
    activation: str = "relu"
    learn_beta: bool = False
    beta_init: float = 1.0
    log_every: int = 500
    pointwise_steps: int = 2000

    def __post_init__(self):
        if self.lambda_core <= 0:
            raise ValueError("lambda_core must be positive")
        if self.lambda_ext < 0:
            raise ValueError("lambda_ext must be nonnegative")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.activation not in config.ACTIVATIONS:
            raise ValueError(f"Unknown activation: {self.activation}")
        if self.penalty not in ("endpoints", "grid"):
            raise ValueError(f"Unknown monotone penalty: {self.penalty}")
        if self.window < 1 or self.max_steps < 1:
            raise ValueError("window and max_steps must be positive")

    @classmethod
    def from_dict(cls, values):
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in values.items() if k in names})


def learning_rate_at(cfg, step):
    return cfg.learning_rate * cfg.lr_decay ** (step // cfg.lr_decay_every)


def has_converged(history, cfg):
    """True once the windowed mean loss improves by less than tolerance (relative)."""
    w = cfg.window
    if len(history) < max(2 * w, cfg.min_steps):
        return False
    previous = float(np.mean(history[-2 * w:-w]))
    current = float(np.mean(history[-w:]))
    return previous - current < cfg.tolerance * abs(previous)


def build_penalty(cfg, family, xi):
    if cfg.lambda_ext == 0:
        return None
    if xi.spherical:
        raise DomainError("The monotone penalty is defined on interval domains only")
    if cfg.penalty == "grid":
        return loss_ext_monotone_grid(family, grid_points(xi, PENALTY_GRID_POINTS), xi)
    return loss_ext_monotone(family, xi.left, xi.right, xi)


def train(gen_cfg, train_cfg, family, omega, xi, sample_points, rng, history=None):
    """Fit a network mapping samples on omega to coefficients, weighted by the Xi Gram."""
    sample_points = np.asarray(sample_points, dtype=float)
    gram_xi = gram_matrix(xi, family)
    gram_omega = gram_matrix(omega, family) if gen_cfg.norm == "function-omega" else None
    monotone_domain = union(omega, xi) if gen_cfg.monotone else None
    penalty = build_penalty(train_cfg, family, xi)

    sizes = [len(sample_points)] + list(train_cfg.hidden_sizes) + [family.dimension]
    net = init_mlp(sizes, train_cfg.activation, rng, train_cfg.beta_init, train_cfg.learn_beta)
    state = AdamState()
    losses = history if history is not None else []

    steps = range(train_cfg.max_steps)
    if config.SHOW_PROGRESS and tqdm is not None:
        steps = tqdm(steps, desc="train", leave=False)

    for step in steps:
        pairs = make_batch(gen_cfg, family, sample_points, rng, monotone_domain, gram_omega, omega)
        values, coefficients = stack_batch(pairs)
        loss, grad_out, cache = loss_and_gradient(net, values, coefficients, gram_xi, train_cfg, penalty)
        if not np.isfinite(loss):
            raise DivergenceError(f"Loss became non-finite at step {step} (last finite: {losses[-1:]})")

        grads = backward(net, cache, grad_out).as_list(net)
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
        losses.append(loss)

        if train_cfg.log_every and step % train_cfg.log_every == 0:
            logger.info("  step %d  loss %.6e", step, loss)
        if has_converged(losses, train_cfg):
            logger.info("  converged at step %d (loss %.6e)", step, loss)
            break

    return net


@dataclass
class TrainedModel:
    """A network together with everything needed to reuse it."""

    name: str
    net: object
    family: object
    omega: object
    xi: object
    sample_points: np.ndarray
    gen_config: GenConfig
    train_config: TrainConfig
    seed: int

    def predict_coefficients(self, values):
        return predict_coefficients(self.net, values)

    def to_record(self):
        return {
            "schema_version": config.SCHEMA_VERSION,
            "name": self.name,
            "basis": self.family.to_record(),
            "omega": self.omega.describe(),
            "xi": self.xi.describe(),
            "sample_points": np.asarray(self.sample_points).tolist(),
            "network": self.net.to_record(),
            "gen_config": asdict(self.gen_config),
            "train_config": asdict(self.train_config),
            "seed": self.seed,
        }

    @classmethod
    def from_record(cls, record):
        if record.get("schema_version") != config.SCHEMA_VERSION:
            raise ValueError(f"Unsupported model schema version: {record.get('schema_version')}")
        return cls(
            name=record["name"],
            net=Mlp.from_record(record["network"]),
            family=BasisFamily.from_record(record["basis"]),
            omega=parse_domain(record["omega"]),
            xi=parse_domain(record["xi"]),
            sample_points=np.array(record["sample_points"], dtype=float),
            gen_config=GenConfig.from_dict(record["gen_config"]),
            train_config=TrainConfig.from_dict(record["train_config"]),
            seed=int(record["seed"]),
        )


def predict_coefficients(net, values):
    return forward(net, values)[0]


def predict_extrapolation(net, sample_set, family, eval_points):
    """Basis expansion of the predicted coefficients at eval_points."""
    coefficients = predict_coefficients(net, sample_set.values)
    return eval_function(family, coefficients, eval_points)
