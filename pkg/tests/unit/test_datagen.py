import numpy as np
import pytest
from numpy.polynomial import chebyshev as C

from extrapolation.bases import chebyshev, trigonometric
from extrapolation.datagen import (
    GenConfig,
    add_noise,
    make_batch,
    normalize_coefficients,
    project_monotone,
    realized_snr,
    sample_coefficients,
    stack_batch,
)
from extrapolation.domains import gram_matrix, grid_points, interval, union
from extrapolation.errors import DomainError


def test_coefficients_live_on_the_active_range():
    cfg = GenConfig(n_low=2, n_high=4)
    c = sample_coefficients(cfg, 8, np.random.default_rng(0))
    assert np.all(c[:2] == 0) and np.all(c[5:] == 0)
    assert np.all(c[2:5] != 0)


def test_n_high_must_fit_the_family():
    with pytest.raises(ValueError):
        sample_coefficients(GenConfig(n_high=8), 8, np.random.default_rng(0))
    with pytest.raises(ValueError):
        GenConfig(n_low=3, n_high=2)
    with pytest.raises(ValueError):
        GenConfig(norm="max")


def test_normalize_to_alpha():
    c = np.array([3.0, 4.0])
    assert np.linalg.norm(normalize_coefficients(c, 2.0)) == pytest.approx(2.0)
    gram = np.diag([2.0, 0.5])
    scaled = normalize_coefficients(c, 2.0, gram)
    assert np.sqrt(scaled @ gram @ scaled) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        normalize_coefficients(np.zeros(2), 1.0)


def test_noise_hits_the_target_snr_exactly():
    rng = np.random.default_rng(5)
    clean = np.sin(np.linspace(0, 3, 100))
    noisy = add_noise(clean, 35.0, rng)
    assert realized_snr(clean, noisy) == pytest.approx(35.0, abs=1e-9)
    assert np.array_equal(add_noise(clean, None, rng), clean)
    assert np.array_equal(add_noise(clean, float("inf"), rng), clean)


def test_noise_power_over_many_draws():
    rng = np.random.default_rng(6)
    clean = np.cos(np.linspace(-1, 1, 20))
    signal_power = np.sum(clean ** 2)
    noise_powers = [np.sum((add_noise(clean, 20.0, rng) - clean) ** 2) for _ in range(10_000)]
    assert 10 * np.log10(signal_power / np.mean(noise_powers)) == pytest.approx(20.0, abs=1e-9)


def test_zero_signal_has_no_snr():
    with pytest.raises(ValueError):
        add_noise(np.zeros(4), 30.0, np.random.default_rng(0))


def test_monotone_projection_has_nonnegative_derivative():
    family = chebyshev(7)
    dom = union(interval(-1, 0.5, right_open=True), interval(0.5, 1))
    grid = grid_points(dom, 1000)
    rng = np.random.default_rng(7)
    for _ in range(20):
        c = sample_coefficients(GenConfig(n_high=6), 8, rng)
        projected = project_monotone(c, family, dom)
        assert projected.shape == (8,)
        slope = C.chebval(grid, C.chebder(projected))
        assert slope.min() == pytest.approx(0.0, abs=1e-10)
        values = C.chebval(grid, projected)
        assert np.all(np.diff(values) >= -1e-5)


def test_monotone_projection_preconditions():
    dom = interval(-1, 1)
    with pytest.raises(ValueError):
        project_monotone(np.ones(5), trigonometric(5), dom)
    with pytest.raises(ValueError):
        project_monotone(np.ones(8), chebyshev(7), dom)


def test_monotone_projection_of_the_identity():
    # p = x has min -1 on [-1, 1], so the result is x + x^2 / 2
    projected = project_monotone([0.0, 1.0, 0.0, 0.0], chebyshev(3), interval(-1, 1))
    assert np.allclose(projected, [0.25, 1.0, 0.25, 0.0], atol=1e-12)
    assert np.allclose(C.chebder(projected), [1.0, 1.0, 0.0], atol=1e-12)


def test_monotone_projection_of_a_constant_is_flat():
    projected = project_monotone([1.0, 0.0, 0.0, 0.0], chebyshev(3), interval(-1, 1))
    assert np.allclose(projected, 0.0, atol=1e-12)


def test_batches_are_reproducible_per_seed():
    family = chebyshev(5)
    points = grid_points(interval(-1, 0.5, right_open=True), 30)
    cfg = GenConfig(n_high=5, batch_size=6, snr_db=35.0)
    first = make_batch(cfg, family, points, np.random.default_rng(11))
    second = make_batch(cfg, family, points, np.random.default_rng(11))
    values, coefficients = stack_batch(first)
    assert values.shape == (6, 30) and coefficients.shape == (6, 6)
    assert np.array_equal(values, stack_batch(second)[0])
    assert np.array_equal(coefficients, stack_batch(second)[1])


def test_alpha_follows_the_radius_distribution():
    family = chebyshev(7)
    points = np.linspace(-1, 0.5, 10)
    cfg = GenConfig(n_low=0, n_high=7, batch_size=10_000, r_m=1.0, r_sigma=0.25, snr_db=35.0)
    _, coefficients = stack_batch(make_batch(cfg, family, points, np.random.default_rng(12)))
    norms = np.linalg.norm(coefficients, axis=1)
    assert norms.mean() == pytest.approx(1.0, abs=0.01)
    assert norms.std() == pytest.approx(0.25, abs=0.01)


def test_function_norm_uses_the_omega_gram():
    family = chebyshev(3)
    omega = interval(-1, 0.5)
    gram = gram_matrix(omega, family)
    cfg = GenConfig(n_high=3, batch_size=3, r_sigma=0.0, norm="function-omega")
    pairs = make_batch(cfg, family, np.linspace(-1, 0.5, 10), np.random.default_rng(13), gram_omega=gram)
    for _, c in pairs:
        assert np.sqrt(c @ gram @ c) == pytest.approx(1.0)


def test_batch_preconditions():
    family = chebyshev(7)
    points = np.linspace(-1, 0.5, 10)
    with pytest.raises(ValueError):
        make_batch(GenConfig(n_high=6, monotone=True), family, points, np.random.default_rng(0))
    with pytest.raises(ValueError):
        make_batch(GenConfig(n_high=6, norm="function-omega"), family, points, np.random.default_rng(0))


def test_batch_rejects_sample_points_outside_omega():
    family = chebyshev(3)
    omega = interval(-1, 0.5, right_open=True)
    cfg = GenConfig(n_high=3, batch_size=2)
    inside = grid_points(omega, 10)
    assert len(make_batch(cfg, family, inside, np.random.default_rng(0), omega=omega)) == 2
    with pytest.raises(DomainError):
        make_batch(cfg, family, np.append(inside, 0.75), np.random.default_rng(0), omega=omega)
    with pytest.raises(DomainError):
        make_batch(cfg, family, np.array([-1.0, 0.5]), np.random.default_rng(0), omega=omega)
