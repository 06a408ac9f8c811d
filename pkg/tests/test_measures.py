import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from confmeasure.invariant import GroupElement, covariance_matrix, moebius_act
from confmeasure.measures import (
    ConvolutionSpec,
    DetHankelSpec,
    GaussianSpec,
    MixtureSpec,
    ProductSpec,
    QuotientSpec,
    ScaledSpec,
    coherence_test,
    degree,
    ft_closed_form,
    ft_estimate,
    gaussian_npoint_density,
    gaussian_scales,
    hyperbolic_area,
    mu_l_density,
    mu_l_mixture_quadrature,
    orthonormal_coords,
    poisson_sample,
    quotient_onepoint_stat,
    radial_growth,
    sample,
    sample_batch,
    sample_mu_l,
    scaled_convolution_power,
    zeros_in_disk,
)
from confmeasure.series import PowerSeries
from confmeasure.streams import RNGStream


def test_gaussian_scales():
    assert np.allclose(gaussian_scales(GaussianSpec(0.5, 2.0), 4), np.sqrt(2.0))
    assert np.allclose(gaussian_scales(GaussianSpec(1.0, 1.0), 3), np.sqrt([1, 2, 3, 4]))
    assert np.allclose(gaussian_scales(GaussianSpec(0, 1.0), 3), [1, 0, 0, 0])
    assert np.allclose(gaussian_scales(GaussianSpec(0, 1.0, rescaled=True), 3), [0, 1, np.sqrt(1 / 2), np.sqrt(1 / 3)])


def test_degrees_of_combinations():
    g1, g2 = GaussianSpec(1), GaussianSpec(0.5)
    assert degree(ProductSpec(g1, g2)) == 1.5
    assert degree(QuotientSpec(g1, g2)) == 0.5
    with pytest.raises(ValueError):
        degree(ConvolutionSpec(g1, g2))


def test_sampling_is_deterministic_per_seed():
    spec = QuotientSpec(GaussianSpec(1, 1), GaussianSpec(0, 1))
    a = sample_batch(spec, 5, RNGStream(42), 10)
    b = sample_batch(spec, 5, RNGStream(42), 10)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, sample_batch(spec, 5, RNGStream(43), 10))
    assert isinstance(sample(GaussianSpec(1), 4, RNGStream(1)), PowerSeries)


def test_gaussian_covariance_of_point_values():
    pts = np.array([0.0, 0.3 + 0.2j, -0.5j])
    m, T = 1.5, 0.8
    f = sample_batch(GaussianSpec(m, T), 120, RNGStream(7), 40_000)
    vals = np.stack([f @ (z ** np.arange(121)) for z in pts], axis=1)
    emp = vals.T @ np.conj(vals) / len(vals)
    expected = 2 * T * covariance_matrix(pts, m).T
    assert np.allclose(emp, expected, atol=0.08 * np.abs(expected).max())


def test_npoint_density_one_point():
    assert gaussian_npoint_density([0], [0], 1.0, 1.0) == pytest.approx(1 / (2 * np.pi))
    # agrees with a product form when points decouple (single point, nonzero value)
    v, T, m, z = 0.4 + 0.1j, 1.3, 2.0, 0.5
    var = 2 * T * (1 - z * z) ** (-2 * m)
    assert gaussian_npoint_density([z], [v], m, T) == pytest.approx(np.exp(-abs(v) ** 2 / var) / (np.pi * var))


def test_gaussian_fourier_transform():
    rng = np.random.default_rng(0)
    for m, T in [(0.5, 1.0), (1.0, 0.5), (2.5, 2.0)]:
        F = 0.4 * (rng.normal(size=5) + 1j * rng.normal(size=5))
        spec = GaussianSpec(m, T)
        est = ft_estimate(spec, F, 40_000, RNGStream(1))
        assert est.deviation(ft_closed_form(spec, F)) < 4


def test_product_fourier_transform():
    rng = np.random.default_rng(1)
    F = 0.5 * (rng.normal(size=8) + 1j * rng.normal(size=8))
    spec = ProductSpec(GaussianSpec(1.0, 0.7), GaussianSpec(0.5, 1.2))
    est = ft_estimate(spec, F, 40_000, RNGStream(2))
    assert est.deviation(ft_closed_form(spec, F)) < 4


def test_mixture_fourier_transform():
    F = np.array([0.3, -0.2j, 0.5])
    spec = MixtureSpec(1.0)
    est = ft_estimate(spec, F, 40_000, RNGStream(3))
    assert est.deviation(ft_closed_form(spec, F)) < 4


@pytest.mark.parametrize("l", [0.0, 0.7, 3.0])
def test_mixture_one_coordinate_law(l):
    f = sample_mu_l(l, 0, RNGStream(6), 20_000)
    res = stats.kstest(np.abs(f[:, 0]) ** 2, lambda t: 1 - (1 + t) ** -(l + 1))
    assert res.pvalue > 0.001


@given(st.lists(st.complex_numbers(max_magnitude=3), min_size=1, max_size=5), st.floats(-0.9, 4))
@settings(max_examples=20, deadline=None)
def test_mixture_identity_quadrature(y, l):
    y = np.array(y)
    assert mu_l_mixture_quadrature(y, l) == pytest.approx(mu_l_density(y, l)[0], rel=1e-8)


def test_mu_l_density_at_origin():
    from math import gamma, pi

    assert mu_l_density(np.zeros(3), 0.5)[0] == pytest.approx(gamma(4.5) / (pi**3 * gamma(1.5)))


def test_coherence():
    assert coherence_test(0.5, 3, 10_000, RNGStream(5)) > 0.001


def test_quotient_uniform_law():
    for m in (1, 2):
        res = quotient_onepoint_stat(GaussianSpec(m, 1), GaussianSpec(m - 1, 1), 20_000, RNGStream(10 + m))
        assert res.passed


def test_central_limit_for_mixtures():
    # (X_1 + .. + X_n)/sqrt(n) for mu_2 draws: |f_0|^2 approaches Exp(mean 1/l)
    l = 2.0
    dist = []
    for n in (1, 4, 16, 64):
        f = sample_batch(scaled_convolution_power(MixtureSpec(l), n), 0, RNGStream(n), 40_000)
        dist.append(stats.kstest(np.abs(f[:, 0]) ** 2, "expon", args=(0, 1 / l)).statistic)
    assert dist[0] > dist[1] > dist[2]
    assert dist[3] < dist[1]


def test_scaled_spec():
    a = sample_batch(ScaledSpec(GaussianSpec(1), 2j), 3, RNGStream(1), 5)
    b = sample_batch(GaussianSpec(1), 3, RNGStream(1).child(0), 5)
    assert np.allclose(a, 2j * b)


def test_poisson_points():
    R, lam = 2.0, 0.5
    counts = [len(poisson_sample(lam, R, np.random.default_rng(s))) for s in range(400)]
    assert np.mean(counts) == pytest.approx(lam * hyperbolic_area(R), rel=0.05)
    z = np.concatenate([poisson_sample(lam, R, np.random.default_rng(1000 + s)) for s in range(100)])
    assert np.all(np.arctanh(np.abs(z)) <= R)
    # hyperbolic radial law: P(d <= t) = sinh(t)^2 / sinh(R)^2
    res = stats.kstest(np.arctanh(np.abs(z)), lambda t: np.sinh(t) ** 2 / np.sinh(R) ** 2)
    assert res.pvalue > 0.001


def test_zeros_are_equivariant():
    rng = np.random.default_rng(3)
    roots = np.array([0.2 + 0.3j, -0.5, 0.1j - 0.4])
    theta = PowerSeries(np.poly(roots)[::-1])
    assert np.allclose(zeros_in_disk(theta), np.sort_complex(roots))
    for _ in range(3):
        g = GroupElement.random(rng, 0.3)
        moved = zeros_in_disk(moebius_act(g, theta, 1.0, 200))
        assert np.abs(moved - np.sort_complex(g(roots))).max() < 1e-8


def test_radial_growth_bounded():
    x = sample_batch(GaussianSpec(0, 1.0, rescaled=True), 4000, RNGStream(8), 200)
    ratios = radial_growth(x, [0.5, 0.9, 0.99])
    assert np.all(np.nanmedian(ratios, axis=0) < 3)
    with pytest.raises(ValueError):
        radial_growth(x[:, :100], [0.99])


def test_det_hankel_spec_samples_coefficients():
    f = sample_batch(DetHankelSpec(2, 0.5), 3, RNGStream(4), 200)
    assert f.shape == (200, 4)
    assert np.all(f[:, 0] == 0) and np.all(f[:, 3] == 0)
