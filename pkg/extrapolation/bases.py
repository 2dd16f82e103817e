"""Basis and frame families {phi_k} spanning the prior function space."""
from dataclasses import dataclass, replace
from math import factorial, pi, sqrt

import numpy as np

from extrapolation import config
from extrapolation.errors import DimensionMismatchError, DomainError
from extrapolation.functions import FunctionHandle, trigonometric_terms


@dataclass(frozen=True)
class BasisFamily:
    """Ordered family of evaluable functions; index k runs 1..dimension.

    ``mixing`` (rows = members) re-expresses the family as linear
    combinations of the plain members, which is how orthogonalized
    families are carried.
    """

    kind: str
    dimension: int
    degree: int = 0
    include_constant: bool = True
    anchors: tuple = ()
    fillers: tuple = ()
    mixing: tuple = None

    def __post_init__(self):
        if self.kind not in config.BASIS_KINDS:
            raise ValueError(f"Unknown basis kind: {self.kind}")
        if self.dimension < 1:
            raise ValueError("Basis dimension must be positive")
        if self.mixing is not None:
            shape = np.asarray(self.mixing).shape
            if shape != (self.dimension, self.dimension):
                raise DimensionMismatchError(
                    f"Mixing matrix {shape} does not match dimension {self.dimension}"
                )

    @property
    def spherical(self):
        if self.kind == "spherical-harmonic":
            return True
        if self.kind == "anchor-frame":
            return any(h.spherical for h in self.anchors + self.fillers)
        return False

    @property
    def members(self):
        """Anchor-frame members, anchors first."""
        return self.anchors + self.fillers

    def evaluate(self, points):
        """Design matrix of shape (n_points, dimension)."""
        points = as_points(points, self.spherical)
        if self.kind == "chebyshev":
            matrix = chebyshev_matrix(points, self.degree)
        elif self.kind == "trigonometric":
            matrix = _handle_matrix(trigonometric_terms(self.dimension, self.include_constant), points)
        elif self.kind == "spherical-harmonic":
            matrix = np.column_stack([
                eval_real_spherical_harmonic(l, m, points[:, 0], points[:, 1])
                for l, m in spherical_harmonic_order(self.degree)
            ])
        else:
            matrix = _handle_matrix(self.members, points)

        if self.mixing is not None:
            matrix = matrix @ np.asarray(self.mixing).T
        return matrix

    def with_mixing(self, mixing):
        mixing = np.asarray(mixing, dtype=float)
        if self.mixing is not None:
            mixing = mixing @ np.asarray(self.mixing)
        return replace(self, mixing=tuple(tuple(float(v) for v in row) for row in mixing))

    def to_record(self):
        record = {
            "kind": self.kind,
            "dimension": self.dimension,
            "degree": self.degree,
            "ordering_version": config.BASIS_ORDERING_VERSION,
        }
        if self.kind == "trigonometric":
            record["include_constant"] = self.include_constant
        if self.kind == "anchor-frame":
            record["anchors"] = [h.to_record() for h in self.anchors]
            record["fillers"] = [h.to_record() for h in self.fillers]
        if self.mixing is not None:
            record["mixing"] = [list(row) for row in self.mixing]
        return record

    @classmethod
    def from_record(cls, record):
        if record.get("ordering_version") != config.BASIS_ORDERING_VERSION:
            raise ValueError(f"Unsupported basis ordering version: {record.get('ordering_version')}")
        mixing = record.get("mixing")
        return cls(
            kind=record["kind"],
            dimension=int(record["dimension"]),
            degree=int(record.get("degree", 0)),
            include_constant=bool(record.get("include_constant", True)),
            anchors=tuple(FunctionHandle.from_record(r) for r in record.get("anchors", [])),
            fillers=tuple(FunctionHandle.from_record(r) for r in record.get("fillers", [])),
            mixing=tuple(tuple(float(v) for v in row) for row in mixing) if mixing else None,
        )


def chebyshev(degree):
    """T_0..T_degree, so dimension = degree + 1."""
    if degree < 0:
        raise ValueError("Chebyshev degree must be nonnegative")
    return BasisFamily(kind="chebyshev", dimension=degree + 1, degree=degree)


def trigonometric(dimension, include_constant=True):
    """1, sin x, cos x, sin 2x, cos 2x, ... (constant optional)."""
    return BasisFamily(
        kind="trigonometric",
        dimension=dimension,
        degree=dimension // 2 if include_constant else (dimension + 1) // 2,
        include_constant=include_constant,
    )


def spherical_harmonics(l_max):
    if l_max < 0:
        raise ValueError("Spherical harmonic degree must be nonnegative")
    return BasisFamily(kind="spherical-harmonic", dimension=(l_max + 1) ** 2, degree=l_max)


def make_anchor_frame(anchors, fillers=()):
    """Frame of anchors followed by fillers, in the given order.

    Linear independence on the data domain is checked by the caller through
    a Gram matrix (see ``domains.orthogonalize`` / ``domains.check_rank``).
    """
    anchors = tuple(anchors)
    fillers = tuple(fillers)
    if not anchors:
        raise ValueError("An anchor frame needs at least one anchor function")
    return BasisFamily(
        kind="anchor-frame",
        dimension=len(anchors) + len(fillers),
        anchors=anchors,
        fillers=fillers,
    )


def spherical_harmonic_order(l_max):
    """Index order (0,0), (1,1), (1,0), (1,-1), (2,2), ..."""
    return [(l, m) for l in range(l_max + 1) for m in range(l, -l - 1, -1)]


def as_points(points, spherical):
    points = np.asarray(points, dtype=float)
    if spherical:
        if points.ndim == 1 and points.shape == (2,):
            points = points.reshape(1, 2)
        if points.ndim != 2 or points.shape[1] != 2:
            raise DomainError("Spherical families take (theta, phi) points")
        return points
    if points.ndim == 0:
        return points.reshape(1)
    if points.ndim != 1:
        raise DomainError(f"Interval families take scalar points, got shape {points.shape}")
    return points


def chebyshev_matrix(x, degree):
    """Columns T_0(x)..T_degree(x) by the three-term recurrence."""
    mat = np.ones((len(x), degree + 1))
    if degree > 0:
        mat[:, 1] = x
    for k in range(1, degree):
        mat[:, k + 1] = 2 * x * mat[:, k] - mat[:, k - 1]
    return mat


def _handle_matrix(handles, points):
    return np.column_stack([h(points) for h in handles])


def eval_basis(family, k, x):
    """phi_k(x) with 1-based k; x is a scalar or a (theta, phi) pair."""
    if not 1 <= k <= family.dimension:
        raise IndexError(f"Basis index {k} outside 1..{family.dimension}")
    if family.spherical and np.ndim(x) == 0:
        raise DomainError("Spherical family needs a (theta, phi) point, got a scalar")
    return float(family.evaluate(x)[0, k - 1])


def eval_function(family, coefficients, x):
    """sum_k c_k phi_k(x); scalar in, float out; array in, array out."""
    coefficients = np.asarray(coefficients, dtype=float)
    if coefficients.shape != (family.dimension,):
        raise DimensionMismatchError(
            f"Coefficient vector of length {coefficients.size} for a family of dimension {family.dimension}"
        )
    values = family.evaluate(x) @ coefficients
    single = np.ndim(x) == 0 or (family.spherical and np.ndim(x) == 1)
    return float(values[0]) if single else values


def assoc_legendre(l, m, t):
    """P_l^m(t) with the Condon-Shortley phase.

    Seeds the diagonal P_m^m = (-1)^m (2m-1)!! (1-t^2)^(m/2) and climbs in l.
    """
    if m < 0 or m > l:
        raise ValueError(f"Associated Legendre needs 0 <= m <= l, got l={l}, m={m}")
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0):
        raise DomainError("Associated Legendre argument must lie in [-1, 1]")

    root = np.sqrt((1.0 - t) * (1.0 + t))
    p_mm = np.ones_like(t)
    odd = 1.0
    for _ in range(m):
        p_mm = -p_mm * odd * root
        odd += 2.0
    if l == m:
        return p_mm

    p_prev, p_curr = p_mm, t * (2 * m + 1) * p_mm
    for ell in range(m + 2, l + 1):
        p_prev, p_curr = p_curr, ((2 * ell - 1) * t * p_curr - (ell + m - 1) * p_prev) / (ell - m)
    return p_curr


def eval_real_spherical_harmonic(l, m, theta, phi):
    """Real-valued orthonormal Y_lm: cos(m phi) for m > 0, sin(|m| phi) for m < 0."""
    if abs(m) > l:
        raise ValueError(f"Spherical harmonic needs |m| <= l, got l={l}, m={m}")
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    mu = abs(m)
    norm = sqrt((2 * l + 1) / (4 * pi) * factorial(l - mu) / factorial(l + mu))
    legendre = assoc_legendre(l, mu, np.clip(np.cos(theta), -1.0, 1.0))
    if m > 0:
        return sqrt(2.0) * norm * legendre * np.cos(mu * phi)
    if m < 0:
        return sqrt(2.0) * norm * legendre * np.sin(mu * phi)
    return norm * legendre * np.ones_like(phi)
