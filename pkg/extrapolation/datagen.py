"""Synthetic (samples, coefficients) pairs drawn from the prior function space."""
import logging
from dataclasses import dataclass, fields

import numpy as np
from numpy.polynomial import chebyshev as C

from extrapolation import config
from extrapolation.domains import grid_points
from extrapolation.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass
class GenConfig:
    """Coefficient sampling settings.

    ``n_low``/``n_high`` are 0-based inclusive bounds on the active basis
    indices. ``snr_db`` of None means noiseless samples.
    """

    r_m: float = 1.0
    r_sigma: float = 0.25
    n_low: int = 0
    n_high: int = 7
    batch_size: int = 32
    snr_db: float = None
    monotone: bool = False
    norm: str = "coeff"

    def __post_init__(self):
        if not 0 <= self.n_low <= self.n_high:
            raise ValueError(f"Need 0 <= n_low <= n_high, got {self.n_low}, {self.n_high}")
        if self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")
        if self.r_m <= 0:
            raise ValueError("r_m must be positive")
        if self.norm not in config.NORM_MODES:
            raise ValueError(f"Unknown norm mode: {self.norm}")

    @classmethod
    def from_dict(cls, values):
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in values.items() if k in names})


@dataclass
class SampleSet:
    points: np.ndarray
    values: np.ndarray
    snr_db: float = None

    def __post_init__(self):
        if len(self.points) != len(self.values):
            raise ValueError(f"{len(self.points)} points but {len(self.values)} values")


def sample_coefficients(cfg, d, rng):
    """Standard normal entries on indices n_low..n_high, zeros elsewhere."""
    if cfg.n_high >= d:
        raise ValueError(f"n_high={cfg.n_high} is outside a family of dimension {d}")
    c = np.zeros(d)
    c[cfg.n_low:cfg.n_high + 1] = rng.standard_normal(cfg.n_high - cfg.n_low + 1)
    return c


def normalize_coefficients(c, alpha, gram=None):
    """Rescale c to norm alpha.

    The norm is Euclidean in coefficient space, or the function norm
    sqrt(c^T G c) when a Gram matrix is passed.
    """
    c = np.asarray(c, dtype=float)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    norm = np.sqrt(c @ gram @ c) if gram is not None else np.linalg.norm(c)
    if norm == 0:
        raise ValueError("Cannot normalize a zero coefficient vector")
    return c * (alpha / norm)


def project_monotone(c, family, dom, grid=None):
    """Shift p = sum c_k T_k so min p = 0 on dom, then integrate.

    The result's derivative is the shifted p, so it is nondecreasing on the
    grid. Integration constant is 0 at x = 0.
    """
    if family.kind != "chebyshev":
        raise ValueError("Monotone projection needs a Chebyshev family")
    c = np.asarray(c, dtype=float)
    nonzero = np.flatnonzero(c)
    if nonzero.size and nonzero[-1] > family.dimension - 2:
        raise ValueError(
            f"Derivative of degree {nonzero[-1]} leaves no room to integrate in dimension {family.dimension}"
        )
    if grid is None:
        grid = grid_points(dom, config.MONOTONE_GRID_POINTS)

    shifted = c.copy()
    shifted[0] -= C.chebval(grid, c).min()
    return C.chebint(shifted)[:family.dimension]


def add_noise(values, snr_db, rng):
    """Add Gaussian noise rescaled so the realized SNR equals snr_db exactly."""
    values = np.asarray(values, dtype=float)
    if snr_db is None or np.isinf(snr_db):
        return values.copy()
    signal_power = np.dot(values, values)
    if signal_power == 0:
        raise ValueError("Cannot set an SNR on a zero signal")
    noise = rng.standard_normal(values.shape)
    target_power = signal_power / 10 ** (snr_db / 10)
    noise *= np.sqrt(target_power / np.dot(noise, noise))
    return values + noise


def realized_snr(clean, noisy):
    noise = np.asarray(noisy) - np.asarray(clean)
    return float(10 * np.log10(np.dot(clean, clean) / np.dot(noise, noise)))


def make_pair(cfg, family, sample_points, rng, design, monotone_grid=None, gram_omega=None):
    c = sample_coefficients(cfg, family.dimension, rng)
    alpha = abs(rng.normal(cfg.r_m, cfg.r_sigma))
    c = normalize_coefficients(c, alpha, gram_omega if cfg.norm == "function-omega" else None)
    if cfg.monotone:
        c = project_monotone(c, family, None, grid=monotone_grid)
    values = add_noise(design @ c, cfg.snr_db, rng)
    return SampleSet(points=sample_points, values=values, snr_db=cfg.snr_db), c


def make_batch(cfg, family, sample_points, rng, monotone_domain=None, gram_omega=None, omega=None):
    """cfg.batch_size pairs; each pair runs on its own stream seeded from rng.

    Passing ``omega`` checks that every sample point lies in the data domain.
    """
    if cfg.monotone and monotone_domain is None:
        raise ValueError("Monotone batches need the Omega-union-Xi domain")
    if cfg.norm == "function-omega" and gram_omega is None:
        raise ValueError("norm='function-omega' needs the data-domain Gram matrix")

    sample_points = np.asarray(sample_points, dtype=float)
    if omega is not None and not np.all(omega.contains(sample_points)):
        raise DomainError("Sample points must lie in the data domain")
    design = family.evaluate(sample_points)
    grid = grid_points(monotone_domain, config.MONOTONE_GRID_POINTS) if cfg.monotone else None
    seeds = rng.integers(0, 2**32, size=cfg.batch_size)
    return [
        make_pair(cfg, family, sample_points, np.random.default_rng(seed), design, grid, gram_omega)
        for seed in seeds
    ]


def stack_batch(pairs):
    """(Y, G): sample values (B, N) and coefficients (B, d)."""
    values = np.stack([s.values for s, _ in pairs])
    coefficients = np.stack([c for _, c in pairs])
    return values, coefficients
