"""Invariant random differentials: Gaussians, their mixtures and combinations.

Conventions.  Z denotes a standard complex normal with independent N(0, 1)
real and imaginary parts, so E|Z|^2 = 2.  The Gaussian of degree m and
temperature T has coefficients f_n = (T / w_m(n))^(1/2) Z_n and Fourier
transform E exp(-i Re<F, f>) = exp(-T |F|^2 / 2).

Degree 0 has two readings.  The plain limit m -> 0 kills every coefficient
but the constant one, giving the usual Gaussian on C (f = sqrt(T) Z);
this is the denominator of the quotient construction.  With
``rescaled=True`` it is instead the Gaussian on functions modulo
constants with norm sum k|x_k|^2, i.e. x_k = (T/k)^(1/2) Z_k.

The one-parameter mixtures mu_l draw beta ~ Gamma(l + 1, 1) and then a
degree-1 Gaussian with T = 1/(2 beta).  With that temperature the
coordinates y_k = sqrt(w_1(k)) f_k have density

    Gamma(n + l + 1) / (pi^n Gamma(l + 1)) (1 + |y|^2)^(-(n + 1 + l))

on C^n, which is the closed form checked here.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lgamma, pi
from typing import Union

import numpy as np
from scipy import integrate, stats

from .hankel import MCMCConfig, generalized_hankel, log_det_invariant, mcmc_sample_det
from .invariant import norm_weights
from .series import PowerSeries
from .streams import RNGStream, as_generator, as_stream


@dataclass(frozen=True)
class GaussianSpec:
    m: float
    T: float = 1.0
    rescaled: bool = False  # only meaningful for m = 0

    def __post_init__(self):
        if self.m < 0 or self.T <= 0:
            raise ValueError("need m >= 0 and T > 0")


@dataclass(frozen=True)
class MixtureSpec:
    l: float = 0.0

    def __post_init__(self):
        if self.l <= -1:
            raise ValueError("need l > -1")


@dataclass(frozen=True)
class DetHankelSpec:
    N: int
    l: float = 0.0


@dataclass(frozen=True)
class ProductSpec:
    a: "MeasureSpec"
    b: "MeasureSpec"


@dataclass(frozen=True)
class ConvolutionSpec:
    a: "MeasureSpec"
    b: "MeasureSpec"


@dataclass(frozen=True)
class ScaledSpec:
    inner: "MeasureSpec"
    c: complex


@dataclass(frozen=True)
class QuotientSpec:
    num: "MeasureSpec"
    den: "MeasureSpec"


MeasureSpec = Union[GaussianSpec, MixtureSpec, DetHankelSpec, ProductSpec, ConvolutionSpec, ScaledSpec, QuotientSpec]

QUOTIENT_FLOOR = 1e-12
QUOTIENT_RETRIES = 100


def degree(spec: MeasureSpec) -> float:
    if isinstance(spec, GaussianSpec):
        return spec.m
    if isinstance(spec, MixtureSpec):
        return 1.0
    if isinstance(spec, DetHankelSpec):
        return 0.0
    if isinstance(spec, ProductSpec):
        return degree(spec.a) + degree(spec.b)
    if isinstance(spec, QuotientSpec):
        return degree(spec.num) - degree(spec.den)
    if isinstance(spec, ConvolutionSpec):
        da, db = degree(spec.a), degree(spec.b)
        if da != db:
            raise ValueError("convolution needs equal degrees")
        return da
    if isinstance(spec, ScaledSpec):
        return degree(spec.inner)
    raise TypeError(f"unknown spec {spec!r}")


def gaussian_scales(spec: GaussianSpec, order: int) -> np.ndarray:
    """Standard deviations a_n with f_n = a_n Z_n."""
    a = np.zeros(order + 1)
    if spec.m == 0:
        if spec.rescaled:
            a[1:] = np.sqrt(spec.T / np.arange(1, order + 1))
        else:
            a[0] = np.sqrt(spec.T)
        return a
    return np.sqrt(spec.T / norm_weights(spec.m, order).astype(float))


def _complex_normal(g: np.random.Generator, shape) -> np.ndarray:
    return g.standard_normal(shape) + 1j * g.standard_normal(shape)


def sample_gaussian(spec: GaussianSpec, order: int, rng, size: int) -> np.ndarray:
    g = as_generator(rng)
    return gaussian_scales(spec, order) * _complex_normal(g, (size, order + 1))


def sample_mu_l(l: float, order: int, rng, size: int) -> np.ndarray:
    g = as_generator(rng)
    beta = g.gamma(l + 1, 1.0, size=size)
    base = sample_gaussian(GaussianSpec(1.0, 1.0), order, g, size)
    return base * np.sqrt(1 / (2 * beta))[:, None]


def _mul_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.shape[1]
    out = np.zeros_like(a)
    for k in range(n):
        out[:, k] = np.sum(a[:, : k + 1] * b[:, k::-1], axis=1)
    return out


def _div_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.shape[1]
    out = np.zeros_like(a)
    for k in range(n):
        acc = a[:, k] - np.sum(b[:, 1 : k + 1] * out[:, k - 1 :: -1][:, :k], axis=1) if k else a[:, 0]
        out[:, k] = acc / b[:, 0]
    return out


def sample_batch(spec: MeasureSpec, order: int, rng, size: int) -> np.ndarray:
    """Draw ``size`` samples; returns coefficient rows of shape (size, order + 1).

    Sub-measures draw from disjoint child streams, so the result depends
    only on the seed and the spec tree.
    """
    stream = as_stream(rng) if not isinstance(rng, np.random.Generator) else None
    g = rng if stream is None else stream.generator()

    def sub(i):
        return stream.child(i) if stream is not None else g

    if isinstance(spec, GaussianSpec):
        return sample_gaussian(spec, order, g, size)
    if isinstance(spec, MixtureSpec):
        return sample_mu_l(spec.l, order, g, size)
    if isinstance(spec, DetHankelSpec):
        res = mcmc_sample_det(MCMCConfig(N=spec.N, l=spec.l, samples=size), sub(0))
        out = np.zeros((size, order + 1), dtype=complex)
        k = min(spec.N, order)
        out[:, 1 : k + 1] = res.samples[:, :k]
        return out
    if isinstance(spec, ProductSpec):
        return _mul_rows(sample_batch(spec.a, order, sub(0), size), sample_batch(spec.b, order, sub(1), size))
    if isinstance(spec, ConvolutionSpec):
        degree(spec)
        return sample_batch(spec.a, order, sub(0), size) + sample_batch(spec.b, order, sub(1), size)
    if isinstance(spec, ScaledSpec):
        return complex(spec.c) * sample_batch(spec.inner, order, sub(0), size)
    if isinstance(spec, QuotientSpec):
        num = sample_batch(spec.num, order, sub(0), size)
        den = sample_batch(spec.den, order, sub(1), size)
        for attempt in range(QUOTIENT_RETRIES):
            bad = np.abs(den[:, 0]) < QUOTIENT_FLOOR
            if not bad.any():
                break
            den[bad] = sample_batch(spec.den, order, sub(2 + attempt), int(bad.sum()))
        else:
            raise RuntimeError("denominator constant term stayed below the floor")
        return _div_rows(num, den)
    raise TypeError(f"unknown spec {spec!r}")


def sample(spec: MeasureSpec, order: int, rng) -> PowerSeries:
    return PowerSeries(sample_batch(spec, order, rng, 1)[0])


def scaled_convolution_power(spec: MeasureSpec, n: int) -> MeasureSpec:
    """Spec of (X_1 + ... + X_n) / sqrt(n) for independent copies X_i."""
    acc = spec
    for _ in range(n - 1):
        acc = ConvolutionSpec(acc, spec)
    return ScaledSpec(acc, 1 / np.sqrt(n))


# ---------------------------------------------------------------------------
# densities and Fourier transforms


def norm_sq_weighted(F: np.ndarray, spec: GaussianSpec) -> float:
    """|F|^2 in the Hilbert structure of the spec's degree."""
    F = np.asarray(F, dtype=complex)
    if spec.m == 0:
        w = np.arange(len(F), dtype=float) if spec.rescaled else np.eye(1, len(F))[0]
    else:
        w = norm_weights(spec.m, len(F) - 1).astype(float)
    return float(np.sum(w * np.abs(F) ** 2))


def pairing(F: np.ndarray, f: np.ndarray, m: float, rescaled: bool = False) -> np.ndarray:
    """<F, f> = sum F_n conj(f_n) w_m(n) for each sample row of f."""
    n = F.shape[-1]
    if m == 0:
        w = np.arange(n, dtype=float) if rescaled else np.eye(1, n)[0]
    else:
        w = norm_weights(m, n - 1).astype(float)
    return np.sum(F * w * np.conj(f[:, :n]), axis=1)


def ft_closed_form(spec: MeasureSpec, F: np.ndarray) -> complex:
    """E exp(-i Re<F, f>) in closed form where one is available."""
    F = np.asarray(F, dtype=complex)
    if isinstance(spec, GaussianSpec):
        return complex(np.exp(-spec.T * norm_sq_weighted(F, spec) / 2))
    if isinstance(spec, MixtureSpec):
        s = norm_sq_weighted(F, GaussianSpec(1.0))
        dens = lambda b: np.exp(-s / (4 * b) + spec.l * np.log(b) - b - lgamma(spec.l + 1))
        return complex(integrate.quad(dens, 0, np.inf, epsabs=1e-13, epsrel=1e-12)[0])
    if isinstance(spec, ProductSpec) and isinstance(spec.a, GaussianSpec) and isinstance(spec.b, GaussianSpec):
        a, b = spec.a, spec.b
        B = generalized_hankel(F, a.m, b.m, size=len(F))
        return complex(np.exp(-log_det_invariant(np.sqrt(a.T * b.T) * B)))
    raise NotImplementedError(f"no closed form for {spec!r}")


@dataclass
class FTEstimate:
    value: complex
    stderr: float

    def deviation(self, exact: complex) -> float:
        """|estimate - exact| in units of the standard error."""
        return abs(self.value - exact) / self.stderr


def ft_estimate(spec: MeasureSpec, F: np.ndarray, samples: int, rng, batch: int = 50_000) -> FTEstimate:
    """Monte Carlo mean of exp(-i Re<F, f>) with its standard error."""
    F = np.asarray(F, dtype=complex)
    stream = as_stream(rng)
    m = degree(spec)
    rescaled = isinstance(spec, GaussianSpec) and spec.rescaled
    order = len(F) - 1
    vals = []
    done = 0
    k = 0
    while done < samples:
        n = min(batch, samples - done)
        f = sample_batch(spec, order, stream.child(k), n)
        vals.append(np.exp(-1j * np.real(pairing(F, f, m, rescaled))))
        done += n
        k += 1
    v = np.concatenate(vals)
    se = np.sqrt((np.var(v.real) + np.var(v.imag)) / len(v))
    return FTEstimate(complex(v.mean()), float(se))


def mu_l_density(y: np.ndarray, l: float) -> np.ndarray:
    """Density of mu_l in orthonormal coordinates y in C^n (Lebesgue dm(y))."""
    y = np.atleast_2d(np.asarray(y, dtype=complex))
    n = y.shape[-1]
    q = 1 + np.sum(np.abs(y) ** 2, axis=-1)
    return np.exp(lgamma(n + l + 1) - n * np.log(pi) - lgamma(l + 1) - (n + 1 + l) * np.log(q))


def mu_l_mixture_quadrature(y: np.ndarray, l: float) -> float:
    """Integral over beta of (beta/pi)^n exp(-beta |y|^2) beta^l exp(-beta) / Gamma(l+1)."""
    y = np.asarray(y, dtype=complex)
    n = y.shape[-1]
    s = float(np.sum(np.abs(y) ** 2))

    def integrand(b):
        return np.exp(n * np.log(b / pi) - b * s + l * np.log(b) - b - lgamma(l + 1))

    return integrate.quad(integrand, 0, np.inf, epsabs=0, epsrel=1e-12, limit=200)[0]


def orthonormal_coords(f: np.ndarray, m: float = 1.0) -> np.ndarray:
    return f * np.sqrt(norm_weights(m, f.shape[-1] - 1).astype(float))


def gaussian_npoint_density(points, values, m: float, T: float = 1.0) -> float:
    """Joint density of (f(z_1), .., f(z_n)) under the degree-m Gaussian.

    The covariance is E f(z_i) conj f(z_j) = 2T (1 - z_i conj z_j)^(-2m).
    For m = 0 (rescaled) it is 2T log 1/(1 - z_i conj z_j).
    """
    z = np.asarray(points, dtype=complex)
    v = np.asarray(values, dtype=complex)
    t = 1 - z[:, None] * np.conj(z)[None, :]
    K = -np.log(t) if m == 0 else np.exp(-2 * m * np.log(t))
    S = 2 * T * K
    sign, logdet = np.linalg.slogdet(S)
    quad = np.real(np.conj(v) @ np.linalg.solve(S, v))
    return float(np.exp(-quad - logdet - len(z) * np.log(pi)))


@dataclass
class KSResult:
    statistic: float
    pvalue: float
    n: int

    @property
    def threshold(self) -> float:
        """Critical value at significance 0.001."""
        return 1.95 / np.sqrt(self.n)

    @property
    def passed(self) -> bool:
        return self.statistic < self.threshold


def quotient_onepoint_stat(num: MeasureSpec, den: MeasureSpec, n: int, rng) -> KSResult:
    """KS test that |q|^2/(1 + |q|^2) is uniform for q = f(0)/g(0)."""
    f = sample_batch(QuotientSpec(num, den), 0, rng, n)
    q2 = np.abs(f[:, 0]) ** 2
    res = stats.kstest(q2 / (1 + q2), "uniform")
    return KSResult(float(res.statistic), float(res.pvalue), n)


def coherence_test(l: float, n: int, samples: int, rng) -> float:
    """Two-sample check that projecting order-n draws gives the order-(n-1) law.

    Compares |y_k|^2 and the real part of a fixed linear functional between
    the two ensembles; returns the smallest Bonferroni-adjusted p-value.
    """
    stream = as_stream(rng)
    hi = orthonormal_coords(sample_mu_l(l, n, stream.child(0), samples))[:, :n]
    lo = orthonormal_coords(sample_mu_l(l, n - 1, stream.child(1), samples))
    rng_dir = stream.child(2).generator()
    direction = rng_dir.normal(size=n) + 1j * rng_dir.normal(size=n)
    tests = [stats.ks_2samp(np.abs(hi[:, k]) ** 2, np.abs(lo[:, k]) ** 2).pvalue for k in range(n)]
    tests.append(stats.ks_2samp(np.real(hi @ direction), np.real(lo @ direction)).pvalue)
    return min(1.0, min(tests) * len(tests))


# ---------------------------------------------------------------------------
# geometry of samples


def hyperbolic_area(R: float) -> float:
    """Area of a hyperbolic disk of radius R for the element dx dy / (1 - |z|^2)^2."""
    return pi * np.sinh(R) ** 2


def poisson_sample(lam: float, R: float, rng) -> np.ndarray:
    """Poisson points of intensity lam (w.r.t. the invariant area) in the disk of radius R.

    Radius is measured by d(0, z) = arctanh|z|.
    """
    g = as_generator(rng)
    n = g.poisson(lam * hyperbolic_area(R))
    rho = np.tanh(R)
    smax = rho**2 / (1 - rho**2)
    s = g.uniform(size=n) * smax
    r = np.sqrt(s / (1 + s))
    return r * np.exp(2j * pi * g.uniform(size=n))


def zeros_in_disk(f: PowerSeries, r: float = 1.0, tail_tol: float = 1e-14) -> np.ndarray:
    """Zeros of the truncated series inside |z| < r, Newton-polished.

    Trailing coefficients below tail_tol * max|c| are dropped before the
    companion-matrix solve; they only move spurious roots near the radius
    of convergence of the truncation.
    """
    c = f.to_float().c
    big = np.abs(c).max()
    keep = np.nonzero(np.abs(c) > tail_tol * big)[0]
    c = c[: keep[-1] + 1]
    if len(c) < 2:
        return np.zeros(0, dtype=complex)
    roots = np.roots(c[::-1])
    roots = roots[np.abs(roots) < r * 1.05]
    full = f.to_float()
    dfull = PowerSeries(np.arange(1, len(full.c)) * full.c[1:])
    for _ in range(8):
        roots = roots - full(roots) / dfull(roots)
    return np.sort_complex(roots[np.abs(roots) < r])


def radial_growth(x: np.ndarray, radii, alpha: float = 0.0) -> np.ndarray:
    """|x(r e^{i alpha})| / sqrt(rho(r) log(rho(sqrt r) / (1 - r))), rho(r) = -log(1 - r^2).

    ``x`` holds coefficient rows (samples, N+1).  Entries where the log is
    not positive are NaN.  The truncation must satisfy N >= 10 / (1 - r).
    """
    radii = np.asarray(radii, dtype=float)
    N = x.shape[1] - 1
    if np.any(N < 10 / (1 - radii)):
        raise ValueError("truncation too short for the largest radius")
    k = np.arange(N + 1)
    out = np.empty((x.shape[0], len(radii)))
    for j, r in enumerate(radii):
        z = r * np.exp(1j * alpha)
        vals = x @ (z**k)
        rho = -np.log(1 - r * r)
        inner = np.log(-np.log(1 - r) / (1 - r))
        out[:, j] = np.abs(vals) / np.sqrt(rho * inner) if inner > 0 else np.nan
    return out
