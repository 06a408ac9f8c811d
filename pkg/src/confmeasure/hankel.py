"""Hankel operators of antiderivatives and the det(1 + B B*) measures.

For x = x_1 z + ... + x_N z^N the classical Hankel matrix is
B[i, j] = x_{i+j+1} (0-based, zero past N), and

    Z(p, N) = integral of det(1 + B B*)^(-p) dm(x_1..x_N)
            = pi^N / (N! prod_{k=1..N} (p - (2 - 1/k))),

finite exactly for p > p_N = 2 - 1/N.  This module has the closed form,
its recursion and Gamma-function forms, an importance-sampling estimate of
the integral that does not use any of them, and a Metropolis sampler for
the normalized densities.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lgamma, pi

import numpy as np
from scipy.special import gamma as gamma_fn

from .invariant import norm_weights
from .series import PowerSeries, abs2
from .streams import RNGStream, as_stream


def _x_coeffs(x) -> np.ndarray:
    c = x.c if isinstance(x, PowerSeries) else np.asarray(x)
    return c


def hankel_classical(x, N: int | None = None) -> np.ndarray:
    """N x N Hankel matrix with entries x_{i+j+1}; x_0 is ignored.

    Exact entries stay exact (object array).
    """
    c = _x_coeffs(x)
    if N is None:
        N = len(c) - 1
    exact = c.dtype == object
    H = np.empty((N, N), dtype=object if exact else complex)
    zero = Fraction(0) if exact else 0
    for i in range(N):
        for j in range(N):
            k = i + j + 1
            H[i, j] = c[k] if k <= N and k < len(c) else zero
    return H


def hankel_batch(x: np.ndarray) -> np.ndarray:
    """Classical Hankel matrices for a batch of coefficient rows x[:, k] = x_{k+1}."""
    S, N = x.shape
    B = np.zeros((S, N, N), dtype=complex)
    for i in range(N):
        B[:, i, : N - i] = x[:, i:]
    return B


def generalized_hankel(F, m, n, size: int | None = None) -> np.ndarray:
    """Matrix of the pairing <F, f g> in orthonormal bases of degrees m and n.

    Entry (j, k) is F_{j+k} w_{m+n}(j+k) / sqrt(w_m(j) w_n(k)).  At
    m = n = 1/2 it is the classical Hankel matrix of the antiderivative of F.
    """
    c = np.asarray(F.c if isinstance(F, PowerSeries) else F, dtype=complex)
    if size is None:
        size = len(c)
    W = norm_weights(m + n, 2 * size).astype(float)
    wm = norm_weights(m, size).astype(float)
    wn = norm_weights(n, size).astype(float)
    B = np.zeros((size, size), dtype=complex)
    for j in range(size):
        for k in range(size):
            if j + k < len(c):
                B[j, k] = c[j + k] * W[j + k] / np.sqrt(wm[j] * wn[k])
    return B


def generalized_hankel_batch(F: np.ndarray, m, n) -> np.ndarray:
    S, N = F.shape
    W = norm_weights(m + n, 2 * N).astype(float)
    wm = norm_weights(m, N).astype(float)
    wn = norm_weights(n, N).astype(float)
    B = np.zeros((S, N, N), dtype=complex)
    for j in range(N):
        for k in range(N - j):
            B[:, j, k] = F[:, j + k] * W[j + k] / np.sqrt(wm[j] * wn[k])
    return B


def log_det_invariant(B: np.ndarray) -> np.ndarray:
    """log det(1 + B B*), batched over leading axes."""
    B = np.asarray(B, dtype=complex)
    M = np.eye(B.shape[-1]) + B @ np.conj(np.swapaxes(B, -1, -2))
    sign, logdet = np.linalg.slogdet(M)
    return logdet


def det_invariant(B: np.ndarray):
    return np.exp(log_det_invariant(B))


def hs_norm_sq(B: np.ndarray):
    """Squared Hilbert-Schmidt norm; exact for exact entries."""
    if B.dtype == object:
        return sum((abs2(v) for v in B.reshape(-1)), Fraction(0))
    return float(np.sum(np.abs(B) ** 2))


def singular_values(B: np.ndarray) -> np.ndarray:
    return np.linalg.svd(np.asarray(B, dtype=complex), compute_uv=False)


# ---------------------------------------------------------------------------
# partition function


def critical_exponent(N: int) -> Fraction:
    return 2 - Fraction(1, N)


def partition_closed_form(p: float, N: int) -> float:
    if N < 1:
        raise ValueError("N must be positive")
    if p <= float(critical_exponent(N)):
        raise ValueError(f"the integral diverges for p <= {critical_exponent(N)}")
    prod = 1.0
    for k in range(1, N + 1):
        prod *= p - (2 - 1 / k)
    return pi**N / (factorial(N) * prod)


def partition_recursion(p: float, N: int) -> float:
    """Z(p, N) from Z(p, 1) = pi/(p-1) and Z(p, k+1) = pi Z(p, k) / ((k+1)(p - 2 + 1/(k+1)))."""
    if p <= float(critical_exponent(N)):
        raise ValueError("the integral diverges")
    Z = pi / (p - 1)
    for k in range(1, N):
        Z = Z * pi / ((k + 1) * (p - (2 - 1 / (k + 1))))
    return Z


def partition_gamma_form(p: float, N: int) -> float:
    """pi^N z^N Gamma(z+1) / Gamma(z+N+1) with z = 1/(p-2), for p != 2."""
    z = 1 / (p - 2)
    return pi**N * z**N * gamma_fn(z + 1) / gamma_fn(z + N + 1)


def stated_normalizer(N: int, l: float) -> float:
    """The normalizer prod_k (1 + (l+1)k) / pi^N, which corresponds to exponent 3 + l."""
    return float(np.prod([1 + (l + 1) * k for k in range(1, N + 1)])) / pi**N


def product_normalizer(N: int, l: float) -> float:
    """1 / Z(1 + p_N + l, N), the normalizer that makes the density integrate to 1."""
    return 1 / partition_closed_form(1 + float(critical_exponent(N)) + l, N)


@dataclass
class MCEstimate:
    estimate: float
    stderr: float
    ess: float
    samples: int

    def zscore(self, exact: float) -> float:
        return (self.estimate - exact) / self.stderr


def _sample_complex_t(rng, size, df, scale):
    """Isotropic bivariate t on C with the given scale, and its log density."""
    g = (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2)
    chi = rng.chisquare(df, size=size)
    x = scale * g * np.sqrt(df / chi) * np.sqrt(2)
    r2 = np.abs(x / scale) ** 2
    logq = -np.log(2 * pi * scale**2) - (df / 2 + 1) * np.log1p(r2 / df)
    return x, logq


@dataclass
class PartitionMCConfig:
    N: int
    p: float
    samples: int = 1_000_000
    df: float = 3.0
    chunk: int = 100_000
    m: float = 0.5  # generalized Hankel degrees; 1/2, 1/2 is the classical case
    n: float = 0.5


def _partition_chunk(cfg: PartitionMCConfig, stream: RNGStream, size: int):
    rng = stream.generator()
    N = cfg.N
    scales = 1 / np.sqrt(np.arange(1, N + 1))
    cols, logq = [], np.zeros(size)
    for k in range(N):
        xk, lq = _sample_complex_t(rng, size, cfg.df, scales[k])
        cols.append(xk)
        logq += lq
    x = np.stack(cols, axis=1)
    if cfg.m == 0.5 and cfg.n == 0.5:
        B = hankel_batch(x)
    else:
        B = generalized_hankel_batch(x, cfg.m, cfg.n)
    logw = -cfg.p * log_det_invariant(B) - logq
    w = np.exp(logw)
    return float(np.sum(w)), float(np.sum(w * w)), size


def partition_mc(cfg: PartitionMCConfig, rng=None, threads: int = 1) -> MCEstimate:
    """Importance-sampling estimate of the partition integral.

    The proposal is a product of isotropic complex Student-t laws (df = 3 by
    default) with scale k^(-1/2) on x_k.  Chunks use disjoint child streams
    and are merged in chunk order, so the answer does not depend on the
    thread count.
    """
    stream = as_stream(rng)
    sizes = [cfg.chunk] * (cfg.samples // cfg.chunk)
    if cfg.samples % cfg.chunk:
        sizes.append(cfg.samples % cfg.chunk)
    jobs = [(stream.child(i), s) for i, s in enumerate(sizes)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda a: _partition_chunk(cfg, *a), jobs))
    else:
        parts = [_partition_chunk(cfg, *a) for a in jobs]
    sw = sum(p[0] for p in parts)
    sw2 = sum(p[1] for p in parts)
    n = sum(p[2] for p in parts)
    mean = sw / n
    var = max(sw2 / n - mean * mean, 0.0)
    return MCEstimate(estimate=mean, stderr=np.sqrt(var / n), ess=sw * sw / sw2, samples=n)


# ---------------------------------------------------------------------------
# normalized densities and the Metropolis sampler


def det_density(x, l: float) -> np.ndarray:
    """Normalized density det(1 + B B*)^(-(1 + p_N + l)) / Z w.r.t. dm(x_1..x_N).

    ``x`` has shape (..., N) holding x_1..x_N.
    """
    x = np.atleast_2d(np.asarray(x, dtype=complex))
    N = x.shape[-1]
    p = 1 + float(critical_exponent(N)) + l
    return np.exp(-p * log_det_invariant(hankel_batch(x))) / partition_closed_form(p, N)


def radial_density(x, l: float) -> np.ndarray:
    """Normalized density proportional to (1 + sum_k k|x_k|^2)^(-(1+N+l)) w.r.t. dm(x).

    In the orthonormal coordinates y_k = sqrt(k) x_k the normalizer is
    Gamma(N+l+1) / (pi^N Gamma(l+1)); the extra N! is the Jacobian.
    """
    x = np.atleast_2d(np.asarray(x, dtype=complex))
    N = x.shape[-1]
    k = np.arange(1, N + 1)
    q = 1 + np.sum(k * np.abs(x) ** 2, axis=-1)
    lognorm = lgamma(N + 1) + lgamma(N + l + 1) - N * np.log(pi) - lgamma(l + 1)
    return np.exp(lognorm - (1 + N + l) * np.log(q))


@dataclass
class MCMCConfig:
    N: int
    l: float = 0.0
    samples: int = 10_000
    chains: int = 100
    burn: int = 2000
    thin: int = 20
    target_accept: float = 0.3


@dataclass
class MCMCResult:
    samples: np.ndarray  # (samples, N) complex, x_1..x_N
    accept_rate: float
    scales: np.ndarray


def mcmc_sample_det(cfg: MCMCConfig, rng=None) -> MCMCResult:
    """Metropolis-within-Gibbs for det(1 + B B*)^(-(1 + p_N + l)).

    Independent chains run side by side (vectorized).  Each complex
    coordinate gets a Gaussian random-walk step whose scale is tuned by a
    Robbins-Monro rule toward ``target_accept`` during burn-in and then
    frozen.  Chains start from dispersed Student-t draws.
    """
    g = as_stream(rng).generator()
    N, C = cfg.N, cfg.chains
    p = 1 + float(critical_exponent(N)) + cfg.l
    per_chain = -(-cfg.samples // C)
    x = np.stack([_sample_complex_t(g, C, 3.0, 1 / np.sqrt(k))[0] for k in range(1, N + 1)], axis=1)
    logp = -p * log_det_invariant(hankel_batch(x))
    logscale = np.log(1 / np.sqrt(np.arange(1, N + 1)))
    out = []
    accepted = proposed = 0
    total = cfg.burn + per_chain * cfg.thin
    for step in range(total):
        for k in range(N):
            prop = x.copy()
            step_k = np.exp(logscale[k]) * (g.standard_normal(C) + 1j * g.standard_normal(C)) / np.sqrt(2)
            prop[:, k] += step_k
            logp_prop = -p * log_det_invariant(hankel_batch(prop))
            acc = np.log(g.uniform(size=C)) < logp_prop - logp
            x[acc] = prop[acc]
            logp[acc] = logp_prop[acc]
            if step < cfg.burn:
                logscale[k] += (acc.mean() - cfg.target_accept) / (step + 1) ** 0.6
            else:
                accepted += acc.sum()
                proposed += C
        if step >= cfg.burn and (step - cfg.burn + 1) % cfg.thin == 0:
            out.append(x.copy())
    samples = np.concatenate(out, axis=0)[: cfg.samples]
    return MCMCResult(samples=samples, accept_rate=accepted / max(proposed, 1), scales=np.exp(logscale))


# ---------------------------------------------------------------------------
# the two-variable case


def u_from_singular_values(s1: float, s2: float) -> tuple[float, float]:
    """Invert (|x_1|^2, |x_2|^2) -> singular values of [[x1, x2], [x2, 0]] (branch s1 >= s2)."""
    return (s1 - s2) ** 2, s1 * s2


def jacobian_u_wrt_s(s1: float, s2: float) -> float:
    """d(u1, u2)/d(s1, s2) in closed form: 2 (s1^2 - s2^2)."""
    return 2 * (s1**2 - s2**2)


def jacobian_u_wrt_s_fd(u1: float, u2: float, h: float = 1e-6) -> float:
    """Finite-difference d(u1, u2)/d(s1, s2), computed through the forward map u -> s."""

    def s_of(a, b):
        return singular_values(np.array([[np.sqrt(a), np.sqrt(b)], [np.sqrt(b), 0]]))

    J = np.empty((2, 2))
    J[:, 0] = (s_of(u1 + h, u2) - s_of(u1 - h, u2)) / (2 * h)
    J[:, 1] = (s_of(u1, u2 + h) - s_of(u1, u2 - h)) / (2 * h)
    return 1 / np.linalg.det(J)


def radial_cdf_one(t, a: float):
    """P(|w| <= t) for the law on C with density proportional to (1 + |w|^2)^(-a)."""
    return 1 - (1 + np.asarray(t, dtype=float) ** 2) ** (-(a - 1))


def n2_x1_marginal_cdf(r: float, l: float) -> float:
    """P(|x_1| <= r) under the normalized N = 2 density.

    Substituting x_1 = (1 + |x_2|^2) w splits the density into independent
    factors (1 + |w|^2)^(-p) and (1 + |x_2|^2)^(-(2p-2)); the marginal is
    then a one-dimensional integral over t = |x_2|.
    """
    from scipy.integrate import quad

    p = 1 + 1.5 + l
    a = 2 * p - 3  # radial CDF exponent of |x_2|

    def integrand(t):
        return radial_cdf_one(r / (1 + t * t), p) * 2 * a * t * (1 + t * t) ** (-a - 1)

    val, _ = quad(integrand, 0, np.inf, epsabs=1e-12, epsrel=1e-10, limit=200)
    return val
