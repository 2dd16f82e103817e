import numpy as np
import pytest
from scipy.integrate import quad

from extrapolation import analysis
from extrapolation.analysis import (
    ConditionReport,
    condition_number,
    error_quadratic,
    l1_l2_ratio,
    projection_split,
    verify_error_bound,
)
from extrapolation.bases import chebyshev, eval_function, trigonometric
from extrapolation.domains import gram_matrix, integrate, interval, orthogonalize
from extrapolation.errors import BoundViolationError, DimensionMismatchError
from extrapolation.functions import term


def test_l1_l2_ratio_bounded_by_dimension():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        d = int(rng.integers(2, 17))
        a = rng.uniform(1e-3, 10.0, size=d)
        assert l1_l2_ratio(a) <= d + 1e-9


def test_l1_l2_ratio_equality_on_equal_entries():
    for d in range(2, 17):
        assert l1_l2_ratio(np.full(d, 3.7)) == pytest.approx(d, abs=1e-9)


def test_l1_l2_ratio_rejects_nonpositive():
    with pytest.raises(ValueError):
        l1_l2_ratio([1.0, 0.0])
    with pytest.raises(ValueError):
        l1_l2_ratio([])


def test_condition_number_of_constant():
    # |1|^2 is 1.5 on Omega and 0.5 on Xi
    report = condition_number(chebyshev(0), interval(-1, 0.5), interval(0.5, 1))
    assert report.kappa == pytest.approx(1 / 3)
    assert report.to_record()["d"] == 1


def test_condition_number_of_constant_on_adjacent_segments():
    assert condition_number(chebyshev(0), interval(0, 2), interval(2, 3)).kappa == pytest.approx(0.5)
    # stretching Xi scales M_xi and leaves m_omega alone
    assert condition_number(chebyshev(0), interval(0, 2), interval(2, 5)).kappa == pytest.approx(1.5)


def test_condition_number_ignores_order_and_common_scale():
    omega, xi = interval(-1, 0.5), interval(0.5, 1)
    family = chebyshev(4)
    kappa = condition_number(family, omega, xi).kappa
    reversed_family = family.with_mixing(np.eye(5)[::-1])
    assert condition_number(reversed_family, omega, xi).kappa == pytest.approx(kappa, rel=1e-12)
    scaled = family.with_mixing(3.0 * np.eye(5))
    assert condition_number(scaled, omega, xi).kappa == pytest.approx(kappa, rel=1e-12)


def test_error_quadratic_matches_direct_integral():
    rng = np.random.default_rng(1)
    family = chebyshev(5)
    dom = interval(-1, 0.5)
    gram = gram_matrix(dom, family)
    for _ in range(100):
        delta = rng.standard_normal(6)
        direct = integrate(dom, (family.evaluate(dom.nodes) @ delta) ** 2)
        assert error_quadratic(delta, gram) == pytest.approx(direct, rel=1e-8)

    delta = rng.standard_normal(6)
    oracle, _ = quad(lambda x: eval_function(family, delta, x) ** 2, -1, 0.5)
    assert error_quadratic(delta, gram) == pytest.approx(oracle, rel=1e-8)


def test_error_quadratic_shape_mismatch():
    with pytest.raises(DimensionMismatchError):
        error_quadratic(np.ones(3), np.eye(4))


def test_error_bound_holds_for_orthogonalized_chebyshev():
    omega, xi = interval(-1, 0.5), interval(0.5, 1)
    family = orthogonalize(chebyshev(7), omega)
    result = verify_error_bound(family, omega, xi, 200, np.random.default_rng(2))
    assert result.max_ratio <= result.kappa
    assert not result.doubly_orthogonal


def test_error_bound_doubly_orthogonal_trigonometric():
    omega, xi = interval(0, 2 * np.pi), interval(2 * np.pi, 4 * np.pi)
    family = trigonometric(5)
    result = verify_error_bound(family, omega, xi, 200, np.random.default_rng(3))
    assert result.doubly_orthogonal
    assert result.bound == pytest.approx(result.kappa / 5)

    rng = np.random.default_rng(4)
    gram_omega, gram_xi = gram_matrix(omega, family), gram_matrix(xi, family)
    for _ in range(20):
        delta = rng.standard_normal(5)
        assert error_quadratic(delta, gram_xi) == pytest.approx(error_quadratic(delta, gram_omega), rel=1e-8)


def test_error_bound_needs_orthogonal_family():
    with pytest.raises(ValueError):
        verify_error_bound(chebyshev(3), interval(-1, 0.5), interval(0.5, 1), 10, np.random.default_rng(0))
    family = orthogonalize(chebyshev(3), interval(-1, 0.5))
    with pytest.raises(ValueError):
        verify_error_bound(family, interval(-1, 0.5), interval(0.5, 1), 0, np.random.default_rng(0))


def test_error_bound_violation_is_reported(monkeypatch):
    omega, xi = interval(-1, 0.5), interval(0.5, 1)
    family = orthogonalize(chebyshev(3), omega)
    monkeypatch.setattr(
        analysis, "condition_number", lambda *args: ConditionReport(m_omega=1e6, M_xi=1.0, d=4)
    )
    with pytest.raises(BoundViolationError):
        verify_error_bound(family, omega, xi, 5, np.random.default_rng(0))


def test_projection_of_a_member_is_exact():
    dom = interval(-1, 1)
    split = projection_split(term("chebyshev", 3), chebyshev(5), dom, omega=interval(-1, 0), xi=interval(0, 1))
    assert np.allclose(split.coefficients, [0, 0, 0, 1, 0, 0], atol=1e-10)
    assert split.residual_sq == pytest.approx(0.0, abs=1e-20)
    assert split.residual_sq_xi == pytest.approx(0.0, abs=1e-20)


def test_projection_residual_outside_span():
    split = projection_split(term("sin", 5), chebyshev(2), interval(-1, 1))
    assert split.residual_norm > 0.1
    assert split.residual_sq_omega is None


def test_projection_of_x_onto_constants():
    split = projection_split(term("x"), chebyshev(0), interval(0, 2))
    assert split.coefficients == pytest.approx([1.0])
    assert split.residual_sq == pytest.approx(2 / 3, rel=1e-12)
