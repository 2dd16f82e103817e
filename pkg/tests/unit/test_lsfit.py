import numpy as np
import pytest

from extrapolation.bases import chebyshev, eval_function
from extrapolation.datagen import SampleSet
from extrapolation.domains import grid_points, interval
from extrapolation.lsfit import extrapolate_ls, fit_ls
from extrapolation.runner import rmse


def test_noiseless_degree_five_is_recovered():
    family = chebyshev(5)
    c = np.random.default_rng(0).standard_normal(6)
    points = grid_points(interval(-1, 0.5, right_open=True), 100)
    samples = SampleSet(points=points, values=eval_function(family, c, points))

    solution = fit_ls(samples, family)
    xi_points = grid_points(interval(0.5, 1), 1000)
    error = rmse(eval_function(family, c, xi_points), extrapolate_ls(solution, family, xi_points))
    assert error < 1e-6
    assert not solution.rank_deficient
    assert solution.residual_norm < 1e-10


def test_underdetermined_fit_reports_rank():
    family = chebyshev(5)
    points = np.array([-0.5, 0.0, 0.25])
    solution = fit_ls(SampleSet(points=points, values=np.ones(3)), family)
    assert solution.rank == 3
    assert solution.rank_deficient
    assert np.allclose(family.evaluate(points) @ solution.coefficients, 1.0)


def test_ridge_shrinks_the_solution():
    family = chebyshev(7)
    points = np.linspace(-1, 0.5, 30)
    values = np.random.default_rng(1).standard_normal(30)
    samples = SampleSet(points=points, values=values)
    plain = fit_ls(samples, family)
    ridged = fit_ls(samples, family, ridge=1.0)
    assert np.linalg.norm(ridged.coefficients) < np.linalg.norm(plain.coefficients)
    with pytest.raises(ValueError):
        fit_ls(samples, family, ridge=-1.0)


def test_sample_set_lengths_must_agree():
    with pytest.raises(ValueError):
        SampleSet(points=np.zeros(3), values=np.zeros(2))


def test_fit_ignores_sample_order():
    family = chebyshev(4)
    rng = np.random.default_rng(2)
    points = np.linspace(-1, 0.5, 25)
    values = rng.standard_normal(25)
    order = rng.permutation(25)
    plain = fit_ls(SampleSet(points=points, values=values), family)
    shuffled = fit_ls(SampleSet(points=points[order], values=values[order]), family)
    assert np.allclose(plain.coefficients, shuffled.coefficients, atol=1e-10)
    assert shuffled.residual_norm == pytest.approx(plain.residual_norm, rel=1e-10)


def test_residual_never_exceeds_the_perturbation():
    family = chebyshev(5)
    rng = np.random.default_rng(3)
    points = np.linspace(-1, 0.5, 40)
    clean = eval_function(family, rng.standard_normal(6), points)
    for scale in (1e-6, 1e-3, 0.1):
        noise = scale * rng.standard_normal(40)
        solution = fit_ls(SampleSet(points=points, values=clean + noise), family)
        assert solution.residual_norm <= np.linalg.norm(noise) * (1 + 1e-9)
