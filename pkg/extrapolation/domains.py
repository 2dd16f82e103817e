"""Data and extrapolation domains with their quadrature rules.

Inner products are continuous L2 integrals approximated by quadrature:
composite Gauss-Legendre on interval unions, and Gauss-Legendre in
cos(theta) times the trapezoid rule in phi on sphere bands. Discrete
sample sets never enter these norms.
"""
import logging
import re
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np
from scipy.special import roots_legendre

from extrapolation import config
from extrapolation.errors import DomainError, RankDeficiencyError

logger = logging.getLogger(__name__)

_NUMBER = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)?(?:e[+-]?\d+)?)\*?(pi)?$")


@dataclass(frozen=True)
class Domain:
    """An interval union or a z-band of the unit sphere.

    Interval segments are sorted (a, b) pairs; ``right_open`` marks the
    segments whose right end is excluded from sample grids.
    """

    kind: str
    segments: tuple = ()
    right_open: tuple = ()
    z_range: tuple = None

    def __post_init__(self):
        if self.kind == "interval-union":
            if not self.segments:
                raise DomainError("Interval domain needs at least one segment")
            if len(self.right_open) != len(self.segments):
                raise DomainError("right_open flags must match the segments")
            for a, b in self.segments:
                if not a < b:
                    raise DomainError(f"Degenerate segment [{a}, {b}]")
            for (_, b0), (a1, _) in zip(self.segments, self.segments[1:]):
                if a1 < b0:
                    raise DomainError("Interval segments must be sorted and pairwise disjoint")
        elif self.kind == "spherical-band":
            z0, z1 = self.z_range
            if not -1.0 <= z0 < z1 <= 1.0:
                raise DomainError(f"Sphere band needs -1 <= z0 < z1 <= 1, got {self.z_range}")
        else:
            raise DomainError(f"Unknown domain kind: {self.kind}")

    @property
    def spherical(self):
        return self.kind == "spherical-band"

    @property
    def left(self):
        self._require_interval("left")
        return self.segments[0][0]

    @property
    def right(self):
        self._require_interval("right")
        return self.segments[-1][1]

    @property
    def measure(self):
        if self.spherical:
            return 2 * np.pi * (self.z_range[1] - self.z_range[0])
        return float(sum(b - a for a, b in self.segments))

    @property
    def theta_range(self):
        """(theta_min, theta_max); larger z means smaller theta."""
        z0, z1 = self.z_range
        return float(np.arccos(z1)), float(np.arccos(z0))

    @cached_property
    def quadrature(self):
        """(nodes, weights); nodes are (n,) on intervals and (n, 2) on the sphere."""
        if self.spherical:
            return _sphere_rule(self.z_range, config.SPHERE_THETA_NODES, config.SPHERE_PHI_NODES)
        return _interval_rule(self.segments, config.QUAD_NODES, config.QUAD_PANELS)

    @property
    def nodes(self):
        return self.quadrature[0]

    @property
    def weights(self):
        return self.quadrature[1]

    def translated(self, offset):
        self._require_interval("translated")
        return replace(self, segments=tuple((a + offset, b + offset) for a, b in self.segments))

    def contains(self, points, tol=1e-12, closed=False):
        """Elementwise membership test.

        ``closed`` admits the right end of open segments too (the closure).
        """
        points = np.asarray(points, dtype=float)
        if self.spherical:
            if points.ndim != 2 or points.shape[1] != 2:
                raise DomainError("Sphere domains take (theta, phi) points")
            z = np.cos(points[:, 0])
            return (z >= self.z_range[0] - tol) & (z <= self.z_range[1] + tol)
        points = np.atleast_1d(points)
        inside = np.zeros(points.shape, dtype=bool)
        for (a, b), open_end in zip(self.segments, self.right_open):
            upper = points < b - tol if open_end and not closed else points <= b + tol
            inside |= (points >= a - tol) & upper
        return inside

    def describe(self):
        """Descriptor string accepted by ``parse_domain``."""
        if self.spherical:
            return f"sphere-z:{self.z_range[0]!r}:{self.z_range[1]!r}"
        parts = [
            f"{a!r}:{b!r}" + (")" if open_end else "")
            for (a, b), open_end in zip(self.segments, self.right_open)
        ]
        return "interval:" + ";".join(parts)

    def _require_interval(self, what):
        if self.spherical:
            raise DomainError(f"'{what}' is only defined for interval domains")


def interval(a, b, right_open=False):
    return Domain(kind="interval-union", segments=((float(a), float(b)),), right_open=(bool(right_open),))


def interval_union(segments, right_open=None):
    segments = tuple((float(a), float(b)) for a, b in segments)
    if right_open is None:
        right_open = (False,) * len(segments)
    return Domain(kind="interval-union", segments=segments, right_open=tuple(right_open))


def sphere_band(z0, z1):
    return Domain(kind="spherical-band", z_range=(float(z0), float(z1)))


def full_sphere():
    return sphere_band(-1.0, 1.0)


def _parse_number(token):
    token = token.strip().lower()
    if "/" in token:
        numerator, _, denominator = token.partition("/")
        return _parse_number(numerator) / _parse_number(denominator)
    match = _NUMBER.match(token)
    if not match or (not match.group(1) and not match.group(2)):
        raise DomainError(f"Bad number in domain descriptor: '{token}'")
    factor, has_pi = match.groups()
    if factor in ("", "+", "-"):
        value = -1.0 if factor == "-" else 1.0
    else:
        try:
            value = float(factor)
        except ValueError:
            raise DomainError(f"Bad number in domain descriptor: '{token}'") from None
    return value * np.pi if has_pi else value


def parse_domain(descriptor):
    """Parse ``interval:a:b``, ``interval:a:b)`` or ``sphere-z:z0:z1``.

    Interval unions join segments with ';'. Numbers may carry a ``pi``
    factor, e.g. ``interval:0:1.5pi)``.
    """
    descriptor = descriptor.strip()
    kind, _, rest = descriptor.partition(":")
    if kind == "sphere-z":
        bounds = rest.split(":")
        if len(bounds) != 2:
            raise DomainError(f"Bad sphere descriptor: '{descriptor}'")
        return sphere_band(*(_parse_number(b) for b in bounds))
    if kind == "sphere" and not rest:
        return full_sphere()
    if kind != "interval":
        raise DomainError(f"Unknown domain descriptor: '{descriptor}'")

    segments, open_flags = [], []
    for part in rest.split(";"):
        part = part.strip()
        if part.startswith("interval:"):
            part = part[len("interval:"):]
        open_end = part.endswith(")")
        bounds = part.rstrip(")").split(":")
        if len(bounds) != 2:
            raise DomainError(f"Bad interval segment '{part}' in '{descriptor}'")
        segments.append(tuple(_parse_number(b) for b in bounds))
        open_flags.append(open_end)
    return interval_union(segments, open_flags)


def union(*domains):
    """Smallest interval union covering the given interval domains; touching segments merge."""
    pieces = []
    for dom in domains:
        dom._require_interval("union")
        pieces.extend(zip(dom.segments, dom.right_open))
    pieces.sort(key=lambda item: item[0][0])

    merged = [[pieces[0][0][0], pieces[0][0][1], pieces[0][1]]]
    for (a, b), open_end in pieces[1:]:
        current = merged[-1]
        if a <= current[1]:
            if b > current[1]:
                current[1], current[2] = b, open_end
            elif b == current[1]:
                current[2] = current[2] and open_end
        else:
            merged.append([a, b, open_end])
    return interval_union([(a, b) for a, b, _ in merged], [o for _, _, o in merged])


def _interval_rule(segments, n_nodes, n_panels):
    ref_nodes, ref_weights = roots_legendre(n_nodes)
    nodes, weights = [], []
    for a, b in segments:
        edges = np.linspace(a, b, n_panels + 1)
        for lo, hi in zip(edges[:-1], edges[1:]):
            half = 0.5 * (hi - lo)
            nodes.append(lo + half * (ref_nodes + 1.0))
            weights.append(half * ref_weights)
    return np.concatenate(nodes), np.concatenate(weights)


def _sphere_rule(z_range, n_theta, n_phi):
    # Gauss-Legendre in t = cos(theta) already carries the sin(theta) area element
    z0, z1 = z_range
    ref_nodes, ref_weights = roots_legendre(n_theta)
    half = 0.5 * (z1 - z0)
    t = z0 + half * (ref_nodes + 1.0)
    wt = half * ref_weights
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    wphi = np.full(n_phi, 2 * np.pi / n_phi)

    theta_grid, phi_grid = np.meshgrid(np.arccos(t), phi, indexing="ij")
    nodes = np.column_stack([theta_grid.ravel(), phi_grid.ravel()])
    weights = np.outer(wt, wphi).ravel()
    return nodes, weights


def integrate(dom, values):
    """Quadrature sum of values sampled at ``dom.nodes``."""
    return float(np.dot(dom.weights, values))


def inner_product(dom, f, g):
    """<f, g> over dom for any callables evaluable on the quadrature nodes."""
    nodes = dom.nodes
    return integrate(dom, f(nodes) * g(nodes))


def gram_matrix(dom, family):
    """d x d matrix of <phi_k, phi_j> over dom, symmetrized."""
    if family.spherical != dom.spherical:
        raise DomainError(f"Family '{family.kind}' cannot be integrated over a {dom.kind} domain")
    design = family.evaluate(dom.nodes)
    gram = design.T @ (dom.weights[:, None] * design)
    return 0.5 * (gram + gram.T)


def check_rank(gram, what="family"):
    """Raise RankDeficiencyError unless min eigenvalue > tolerance * max."""
    eigenvalues = np.linalg.eigvalsh(gram)
    largest = eigenvalues[-1]
    if largest <= 0 or eigenvalues[0] <= config.RANK_TOLERANCE * largest:
        raise RankDeficiencyError(
            f"{what} is linearly dependent on the domain "
            f"(eigenvalues {eigenvalues[0]:.3e} .. {largest:.3e})"
        )
    return eigenvalues


def orthogonalize(family, dom):
    """Modified Gram-Schmidt in coefficient space under the dom inner product."""
    gram = gram_matrix(dom, family)
    check_rank(gram, what=f"{family.kind} family")

    d = family.dimension
    q = np.zeros((d, d))
    for k in range(d):
        v = np.zeros(d)
        v[k] = 1.0
        for j in range(k):
            v = v - (q[j] @ gram @ v) * q[j]
        norm_sq = v @ gram @ v
        if norm_sq <= 0:
            raise RankDeficiencyError(f"Member {k + 1} vanishes after orthogonalization")
        q[k] = v / np.sqrt(norm_sq)

    logger.debug("Orthogonalized %s family of dimension %d", family.kind, d)
    return family.with_mixing(q)


def grid_points(dom, n_per_dim):
    """Equally spaced points; right-open segment ends and phi = 2 pi are excluded.

    Sphere bands use theta cell midpoints, so no point sits on a pole.
    """
    if n_per_dim < 2:
        raise ValueError(f"grid_points needs n_per_dim >= 2, got {n_per_dim}")

    if dom.spherical:
        theta_lo, theta_hi = dom.theta_range
        theta = theta_lo + (np.arange(n_per_dim) + 0.5) * (theta_hi - theta_lo) / n_per_dim
        phi = np.linspace(0.0, 2 * np.pi, n_per_dim, endpoint=False)
        theta_grid, phi_grid = np.meshgrid(theta, phi, indexing="ij")
        return np.column_stack([theta_grid.ravel(), phi_grid.ravel()])

    if len(dom.segments) == 1:
        (a, b), open_end = dom.segments[0], dom.right_open[0]
        return np.linspace(a, b, n_per_dim, endpoint=not open_end)

    lengths = np.array([b - a for a, b in dom.segments])
    counts = np.maximum(np.round(n_per_dim * lengths / lengths.sum()).astype(int), 1)
    counts[-1] = max(1, n_per_dim - counts[:-1].sum())
    pieces = [
        np.linspace(a, b, count, endpoint=not open_end)
        for (a, b), open_end, count in zip(dom.segments, dom.right_open, counts)
    ]
    return np.concatenate(pieces)
