"""Built-in catalog of evaluable functions.

A FunctionHandle is a finite weighted sum of catalog terms. Each term is a
symbolic tag plus numeric parameters, so handles serialize to plain records
and evaluate deterministically on numpy arrays.
"""
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as C

from extrapolation.errors import DomainError, NonFiniteError


def _unit(k):
    c = np.zeros(int(k) + 1)
    c[-1] = 1.0
    return c


def _spherical(points, l, m):
    from extrapolation.bases import eval_real_spherical_harmonic

    return eval_real_spherical_harmonic(int(l), int(m), points[:, 0], points[:, 1])


# tag -> (arity, evaluator); evaluators take a float array and the params
SCALAR_TERMS = {
    "const": (1, lambda x, c: np.full_like(x, c)),
    "x": (0, lambda x: x),
    "monomial": (1, lambda x, k: x ** int(k)),
    "pow": (1, lambda x, b: np.power(b, x)),
    "sin": (1, lambda x, k: np.sin(k * x)),
    "cos": (1, lambda x, k: np.cos(k * x)),
    "inv_shift": (0, lambda x: 1.0 / (x + 1.0)),
    "sin_over_shift": (0, lambda x: np.sin(x) / (x + 1.0)),
    "sin_sq": (0, lambda x: np.sin(x) ** 2),
    "log_sq": (0, lambda x: np.log(x + 1.0) ** 2),
    "chebyshev": (1, lambda x, k: C.chebval(x, _unit(k))),
}
SPHERICAL_TERMS = {
    "sph": (2, _spherical),
}

_LABELS = {
    "const": "{0}",
    "x": "x",
    "monomial": "x^{0}",
    "pow": "{0}^x",
    "sin": "sin({0}x)",
    "cos": "cos({0}x)",
    "inv_shift": "1/(x+1)",
    "sin_over_shift": "sin(x)/(x+1)",
    "sin_sq": "sin^2(x)",
    "log_sq": "log^2(x+1)",
    "chebyshev": "T_{0}(x)",
    "sph": "Y_{0},{1}",
}


def _fmt(value):
    return f"{value:g}" if isinstance(value, float) else str(value)


@dataclass(frozen=True)
class FunctionHandle:
    """Weighted sum of catalog terms: ((weight, tag, params), ...)."""

    terms: tuple

    def __post_init__(self):
        if not self.terms:
            raise ValueError("FunctionHandle needs at least one term")
        for weight, tag, params in self.terms:
            table = SPHERICAL_TERMS if tag in SPHERICAL_TERMS else SCALAR_TERMS
            if tag not in table:
                raise ValueError(f"Unknown function tag: {tag}")
            if len(params) != table[tag][0]:
                raise ValueError(f"Term '{tag}' takes {table[tag][0]} parameters, got {len(params)}")

    @property
    def spherical(self):
        return any(tag in SPHERICAL_TERMS for _, tag, _ in self.terms)

    @property
    def tag(self):
        parts = []
        for weight, tag, params in self.terms:
            label = _LABELS[tag].format(*[_fmt(p) for p in params])
            if weight == 1.0:
                parts.append(label)
            elif weight == -1.0:
                parts.append(f"-{label}")
            else:
                parts.append(f"{_fmt(float(weight))}*{label}")
        return " + ".join(parts).replace("+ -", "- ")

    def __call__(self, points):
        points = np.asarray(points, dtype=float)
        if self.spherical:
            if points.ndim != 2 or points.shape[1] != 2:
                raise DomainError(f"Spherical function {self.tag} needs (theta, phi) points")
        elif points.ndim != 1:
            raise DomainError(f"Function {self.tag} needs scalar points, got shape {points.shape}")

        total = np.zeros(points.shape[0])
        for weight, tag, params in self.terms:
            table = SPHERICAL_TERMS if tag in SPHERICAL_TERMS else SCALAR_TERMS
            total = total + weight * table[tag][1](points, *params)

        if not np.all(np.isfinite(total)):
            raise NonFiniteError(f"Function {self.tag} is not finite on the given points")
        return total

    def __add__(self, other):
        return FunctionHandle(self.terms + other.terms)

    def scaled(self, factor):
        return FunctionHandle(tuple((w * factor, tag, params) for w, tag, params in self.terms))

    def to_record(self):
        return [{"weight": w, "tag": tag, "params": list(params)} for w, tag, params in self.terms]

    @classmethod
    def from_record(cls, record):
        return cls(tuple((float(t["weight"]), t["tag"], tuple(t["params"])) for t in record))


def term(tag, *params, weight=1.0):
    """Single-term handle, e.g. term("sin", 2) for sin(2x)."""
    return FunctionHandle(((float(weight), tag, tuple(params)),))


def trigonometric_terms(count, include_constant=True):
    """Handles in the order 1, sin x, cos x, sin 2x, cos 2x, ..."""
    handles = [term("const", 1.0)] if include_constant else []
    k = 1
    while len(handles) < count:
        handles.append(term("sin", k))
        if len(handles) < count:
            handles.append(term("cos", k))
        k += 1
    return handles[:count]
