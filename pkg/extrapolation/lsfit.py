"""Least-squares baseline: fit coefficients on the samples, evaluate on Xi."""
import logging
from dataclasses import dataclass

import numpy as np

from extrapolation.bases import eval_function

logger = logging.getLogger(__name__)


@dataclass
class LsSolution:
    coefficients: np.ndarray
    residual_norm: float
    rank: int
    dimension: int

    @property
    def rank_deficient(self):
        return self.rank < self.dimension


def fit_ls(samples, family, ridge=0.0):
    """Minimum-norm least squares through numpy's SVD-based solver.

    ``ridge`` > 0 appends sqrt(ridge) * I rows (Tikhonov) to the system.
    """
    design = family.evaluate(samples.points)
    values = np.asarray(samples.values, dtype=float)
    if not np.all(np.isfinite(design)):
        raise ValueError("Design matrix is not finite on the sample points")
    if ridge < 0:
        raise ValueError("ridge must be nonnegative")

    system, rhs = design, values
    if ridge > 0:
        system = np.vstack([design, np.sqrt(ridge) * np.eye(family.dimension)])
        rhs = np.concatenate([values, np.zeros(family.dimension)])

    coefficients, _, rank, _ = np.linalg.lstsq(system, rhs, rcond=None)
    residual = float(np.linalg.norm(design @ coefficients - values))
    if rank < family.dimension:
        logger.debug("LS design is rank deficient (%d < %d)", rank, family.dimension)
    return LsSolution(coefficients=coefficients, residual_norm=residual, rank=int(rank), dimension=family.dimension)


def extrapolate_ls(solution, family, eval_points):
    return eval_function(family, solution.coefficients, eval_points)
