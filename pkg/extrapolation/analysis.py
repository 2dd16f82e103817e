"""Condition number, coefficient-space error functionals and bound checks."""
import logging
from dataclasses import dataclass, field

import numpy as np

from extrapolation.domains import check_rank, gram_matrix, integrate
from extrapolation.errors import BoundViolationError, DimensionMismatchError, RankDeficiencyError

logger = logging.getLogger(__name__)

# Relative off-diagonal size below which a Gram matrix counts as diagonal
ORTHOGONALITY_TOLERANCE = 1e-8
BOUND_SLACK = 1e-9


@dataclass
class ConditionReport:
    m_omega: float
    M_xi: float
    d: int
    omega_norms: list = field(default_factory=list)
    xi_norms: list = field(default_factory=list)

    @property
    def kappa(self):
        return self.d * self.M_xi / self.m_omega

    def to_record(self):
        return {
            "kappa": self.kappa,
            "M_xi": self.M_xi,
            "m_omega": self.m_omega,
            "d": self.d,
            "omega_norms": list(self.omega_norms),
            "xi_norms": list(self.xi_norms),
        }


@dataclass
class ErrorBoundReport:
    trials: int
    kappa: float
    bound: float
    doubly_orthogonal: bool
    max_ratio: float = 0.0


@dataclass
class ProjectionSplit:
    """f = f_par + f_perp with f_par in the family's span on the projection domain.

    Residuals are squared L2 norms of f_perp.
    """

    coefficients: np.ndarray
    residual_sq: float
    residual_sq_omega: float = None
    residual_sq_xi: float = None

    @property
    def residual_norm(self):
        return float(np.sqrt(self.residual_sq))


def condition_number(family, omega, xi):
    """kappa = d * max_k |phi_k|^2_xi / min_k |phi_k|^2_omega."""
    omega_norms = np.diag(gram_matrix(omega, family)).copy()
    xi_norms = np.diag(gram_matrix(xi, family)).copy()
    m_omega = float(omega_norms.min())
    if m_omega <= 0:
        k = int(np.argmin(omega_norms)) + 1
        raise RankDeficiencyError(f"Basis member {k} has zero norm on the data domain")
    return ConditionReport(
        m_omega=m_omega,
        M_xi=float(xi_norms.max()),
        d=family.dimension,
        omega_norms=omega_norms.tolist(),
        xi_norms=xi_norms.tolist(),
    )


def error_quadratic(delta, gram):
    """delta^T G delta: the squared norm of sum_k delta_k phi_k on G's domain."""
    delta = np.asarray(delta, dtype=float)
    gram = np.asarray(gram, dtype=float)
    if gram.shape != (delta.size, delta.size):
        raise DimensionMismatchError(f"Coefficient difference of length {delta.size} vs Gram {gram.shape}")
    return float(delta @ gram @ delta)


def l1_l2_ratio(a):
    """|a|_1^2 / |a|_2^2 for a positive vector; never exceeds len(a)."""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        raise ValueError("l1_l2_ratio needs a nonempty vector")
    if np.any(a <= 0):
        raise ValueError("l1_l2_ratio needs strictly positive entries")
    return float(a.sum() ** 2 / np.dot(a, a))


def is_diagonal(gram, tol=ORTHOGONALITY_TOLERANCE):
    scale = np.abs(np.diag(gram)).max()
    off = gram - np.diag(np.diag(gram))
    return bool(np.abs(off).max() <= tol * scale)


def verify_error_bound(family, omega, xi, trials, rng):
    """Check E_xi <= kappa E_omega on random coefficient pairs.

    When the family is orthogonal on both domains the tighter
    E_xi <= (kappa / d) E_omega is checked instead.
    """
    if trials < 1:
        raise ValueError("verify_error_bound needs at least one trial")
    gram_omega = gram_matrix(omega, family)
    gram_xi = gram_matrix(xi, family)
    if not is_diagonal(gram_omega):
        raise ValueError("Family is not orthogonal on the data domain")

    report = condition_number(family, omega, xi)
    doubly = is_diagonal(gram_xi)
    bound = report.kappa / report.d if doubly else report.kappa
    result = ErrorBoundReport(trials=trials, kappa=report.kappa, bound=bound, doubly_orthogonal=doubly)

    for trial in range(trials):
        g = rng.standard_normal(family.dimension)
        g_tilde = rng.standard_normal(family.dimension)
        delta = g_tilde - g
        e_omega = error_quadratic(delta, gram_omega)
        e_xi = error_quadratic(delta, gram_xi)
        if e_xi > bound * e_omega + BOUND_SLACK * e_omega:
            raise BoundViolationError(
                f"Trial {trial}: E_xi={e_xi:.6e} exceeds {bound:.6e} * E_omega={e_omega:.6e}"
            )
        if e_omega > 0:
            result.max_ratio = max(result.max_ratio, e_xi / e_omega)

    logger.debug(
        "Bound held on %d trials (max ratio %.4f, bound %.4f)", trials, result.max_ratio, bound
    )
    return result


def projection_split(f, family, dom, omega=None, xi=None, allow_singular=False):
    """Best L2(dom) approximation of f in the family, with residual norms.

    With ``allow_singular`` a numerically dependent family still projects;
    the coefficients are then the minimum-norm ones.
    """
    gram = gram_matrix(dom, family)
    design = family.evaluate(dom.nodes)
    rhs = design.T @ (dom.weights * f(dom.nodes))
    if allow_singular:
        coefficients = np.linalg.lstsq(gram, rhs, rcond=None)[0]
    else:
        try:
            check_rank(gram, what=f"{family.kind} family")
        except RankDeficiencyError as exc:
            raise RankDeficiencyError(f"Cannot project onto a singular Gram matrix: {exc}") from exc
        coefficients = np.linalg.solve(gram, rhs)

    def residual_sq(region):
        if region is None:
            return None
        residual = f(region.nodes) - family.evaluate(region.nodes) @ coefficients
        return integrate(region, residual ** 2)

    return ProjectionSplit(
        coefficients=coefficients,
        residual_sq=residual_sq(dom),
        residual_sq_omega=residual_sq(omega),
        residual_sq_xi=residual_sq(xi),
    )
