"""Schwarzian derivative of normalized univalent series and related maps.

A univalent germ is u(z) = z(1 + u_1 z + u_2 z^2 + ...).  Its Schwarzian is
the quadratic differential Q = N(u)' - N(u)^2 / 2 with N(u) = (log u')',
and we write Q = sum_{n >= 0} Q_{n+2} z^n (dz)^2, so Q_n is homogeneous of
degree n when u_l has degree l.

The half-form matrix of u is the matrix of f(z) (dz)^(1/2) -> f(u(z)) u'(z)^(1/2)
on the Laurent basis z^k (dz)^(1/2).  It maps z^k into span{z^r : r >= k},
so it is unipotent triangular, and (r, k) is homogeneous of degree r - k.
Splitting indices into k >= 0 (the plus part) and k < 0 (the minus part),
A is the plus-plus block and B the plus-minus block; W(u) = A^{-1} B.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .invariant import SupNorm, sup_norm_quadratic
from .series import (
    PowerSeries,
    antideriv,
    deriv,
    is_exact_scalar,
    series_exp,
    series_log,
    series_mul,
    series_pow,
)


@dataclass(frozen=True)
class UnivalentSeries:
    """u = z(1 + sum u_n z^n); ``coeffs`` holds u_1, u_2, ..."""

    coeffs: tuple

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def exact(self) -> bool:
        return any(is_exact_scalar(c) and not isinstance(c, int) for c in self.coeffs)

    def series(self) -> PowerSeries:
        """u as a power series of order len(coeffs) + 1."""
        one = Fraction(1) if self.exact else 1.0
        zero = Fraction(0) if self.exact else 0.0
        return PowerSeries([zero, one, *self.coeffs], exact=self.exact)

    @classmethod
    def from_series(cls, u: PowerSeries) -> "UnivalentSeries":
        if u.c[0] != 0 or u.c[1] != 1:
            raise ValueError("need u(0) = 0 and u'(0) = 1")
        return cls(tuple(u.c[2:]))


@dataclass(frozen=True)
class QuadDifferential:
    """Q = sum Q_{n+2} z^n (dz)^2; ``coeffs`` is the series sum Q_{n+2} z^n."""

    coeffs: PowerSeries

    def Q(self, n: int):
        """The coefficient Q_n (n >= 2)."""
        if n < 2:
            raise ValueError("Q_n starts at n = 2")
        return self.coeffs.c[n - 2] if n - 2 <= self.coeffs.order else 0

    @property
    def top(self) -> int:
        """Largest n with Q_n known."""
        return self.coeffs.order + 2

    @classmethod
    def from_values(cls, values: dict[int, object], top: int) -> "QuadDifferential":
        exact = any(is_exact_scalar(v) and not isinstance(v, int) for v in values.values())
        zero = Fraction(0) if exact else 0.0
        c = [values.get(n, zero) for n in range(2, top + 1)]
        return cls(PowerSeries(c, exact=exact))


def _as_series(u) -> PowerSeries:
    if isinstance(u, UnivalentSeries):
        return u.series()
    if isinstance(u, PowerSeries):
        return u
    return UnivalentSeries(tuple(u)).series()


def pre_schwarzian(u) -> tuple[PowerSeries, PowerSeries]:
    """(c, N) with c = log u' and N = c'."""
    u = _as_series(u)
    c = series_log(deriv(u))
    return c, deriv(c)


def schwarzian(u) -> QuadDifferential:
    """S(u) = N' - N^2/2, valid to the order the input allows."""
    _, N = pre_schwarzian(u)
    dN = deriv(N)
    half = Fraction(1, 2) if N.exact else 0.5
    return QuadDifferential(dN - series_mul(N, N).truncate(dN.order) * half)


def invert_schwarzian(Q: QuadDifferential, N: int | None = None) -> UnivalentSeries:
    """The u with u_1 = 0 and S(u) = Q through Q_N.

    Q_n depends on u_n only through (n+1) n (n-1) u_n, so each order is a
    linear solve in one unknown.
    """
    N = Q.top if N is None else N
    exact = Q.coeffs.exact
    zero = Fraction(0) if exact else 0j
    u = [zero] * N
    for n in range(2, N + 1):
        have = schwarzian(UnivalentSeries(tuple(u[:n]))).Q(n)
        u[n - 1] = (Q.Q(n) - have) / ((n + 1) * n * (n - 1))
    return UnivalentSeries(tuple(u))


# ---------------------------------------------------------------------------
# the half-form composition matrix


@dataclass
class HalfformMatrix:
    """Matrix on the basis z^k (dz)^(1/2), k = -K .. K-1; entry(r, k) is [z^r] image(z^k)."""

    K: int
    data: np.ndarray

    def entry(self, r: int, k: int):
        return self.data[r + self.K, k + self.K]

    @property
    def A(self) -> np.ndarray:
        """Plus-plus block, rows and columns 0 .. K-1."""
        return self.data[self.K :, self.K :]

    @property
    def B(self) -> np.ndarray:
        """Plus-minus block; column j - 1 is the basis vector z^(-j)."""
        return self.data[self.K :, self.K - 1 :: -1]


def halfform_action_matrix(u, K: int) -> HalfformMatrix:
    """Matrix of f (dz)^(1/2) -> f(u) u'^(1/2) (dz)^(1/2) on k in [-K, K-1].

    u is treated as a polynomial, so the entries are exact for every k and r
    in the band.
    """
    u = _as_series(u)
    exact = u.exact
    n = 2 * K
    # pad so that h = u / z and u' are known to order 2K - 1
    pad = np.zeros(max(0, n + 1 - u.order), dtype=object if exact else complex)
    if exact:
        pad[:] = Fraction(0)
    c = np.concatenate([u.c, pad])[: n + 2]
    h = PowerSeries(c[1 : n + 1].copy(), exact=exact)
    du = deriv(PowerSeries(c[: n + 1].copy(), exact=exact)).truncate(n - 1)
    half = Fraction(1, 2) if exact else 0.5
    root = series_pow(du, half)
    one = PowerSeries.zeros(n - 1, exact)
    one.c[0] = Fraction(1) if exact else 1.0
    powers = {0: one}
    h, hinv = h.truncate(n - 1), (1 / h).truncate(n - 1)
    for k in range(1, K + 1):
        powers[-k] = series_mul(powers[-k + 1], hinv)
        if k < K:
            powers[k] = series_mul(powers[k - 1], h)
    data = np.zeros((n, n), dtype=object if exact else complex)
    if exact:
        data[:] = Fraction(0)
    for k in range(-K, K):
        img = series_mul(powers[k], root)
        for r in range(k, K):
            data[r + K, k + K] = img.c[r - k]
    return HalfformMatrix(K, data)


def w_of_u(u, K: int) -> np.ndarray:
    """W(u) = A^{-1} B as a K x K array; entry [i, j - 1] is W_{i,-j}.

    A is unipotent lower triangular in (r, k), so the truncated solve
    is exact for every entry returned.
    """
    M = halfform_action_matrix(u, K)
    A, B = M.A, M.B
    W = np.empty_like(B)
    for i in range(K):
        acc = B[i].copy()
        for s in range(i):
            acc = acc - A[i, s] * W[s]
        W[i] = acc
    return W


def linear_w_coefficient(i: int, j: int) -> Fraction:
    """Coefficient of Q_{i+j} in W_{i,-j} at first order (u_1 = 0 gauge)."""
    n = i + j
    if n < 2:
        return Fraction(0)
    return Fraction(i - j + 1, 2 * (n + 1) * n * (n - 1))


# Linear coefficients and quadratic constants as they appear in the printed
# display; (i, j) refers to W_{i,-j}.
DISPLAY_LINEAR = {
    (0, 2): Fraction(-1, 3),
    (1, 1): Fraction(1, 3),
    (0, 3): Fraction(1, 12),
    (1, 2): Fraction(0),
    (2, 1): Fraction(-1, 12),
    (0, 4): Fraction(-1, 12),
    (1, 3): Fraction(1, 36),
    (2, 2): Fraction(-1, 36),
    (3, 1): Fraction(1, 12),
}
DISPLAY_CONSTANTS = {"c": (3, 1), "c'": (2, 2), "c''": (1, 3), "d": (0, 4)}


def _w_entry_at(Q: dict[int, complex], i: int, j: int):
    n = i + j
    qd = QuadDifferential.from_values(Q, max(n, 2))
    u = invert_schwarzian(qd, n)
    K = max(i + 1, j)
    return w_of_u(u, K)[i, j - 1]


@dataclass
class WFit:
    """Least-squares fit of W_{i,-j} = a Q_{i+j} (+ c Q_2^2 at order 4)."""

    entry: tuple[int, int]
    linear: float
    quadratic: float | None
    residual: float

    @property
    def consistent(self) -> bool:
        return self.residual < 1e-8


def fit_w_entry(i: int, j: int, samples: np.ndarray) -> WFit:
    """Fit one entry from an (S, 3) array of (Q_2, Q_3, Q_4) samples.

    Order 2 and 3 entries are linear in Q; order 4 entries are a Q_4 + c Q_2^2.
    """
    n = i + j
    if not 2 <= n <= 4:
        raise ValueError("fits are defined for entries of order 2, 3, 4")
    rows, ys = [], []
    for q2, q3, q4 in samples:
        Q = {2: q2, 3: q3, 4: q4}
        ys.append(_w_entry_at(Q, i, j))
        rows.append([Q[n], q2 * q2] if n == 4 else [Q[n]])
    X = np.array(rows, dtype=complex)
    y = np.array(ys, dtype=complex)
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    res = float(np.abs(X @ coef - y).max())
    return WFit((i, j), complex(coef[0]).real, complex(coef[1]).real if n == 4 else None, res)


def fit_w_constants(samples: np.ndarray) -> dict[str, WFit]:
    """Fit every entry appearing in the display, keyed by "i,j" and by constant name."""
    out = {}
    for i, j in DISPLAY_LINEAR:
        out[f"{i},{j}"] = fit_w_entry(i, j, samples)
    for name, ij in DISPLAY_CONSTANTS.items():
        out[name] = out[f"{ij[0]},{ij[1]}"]
    return out


def compare_with_display(fits: dict[str, WFit], tol: float = 1e-10) -> list[tuple[tuple[int, int], float, float, bool]]:
    """(entry, printed linear coefficient, fitted one, agree) for every display entry."""
    out = []
    for (i, j), printed in DISPLAY_LINEAR.items():
        got = fits[f"{i},{j}"].linear
        out.append(((i, j), float(printed), got, abs(got - float(printed)) <= tol))
    return out


def random_q_samples(rng, count: int, scale: float = 0.5) -> np.ndarray:
    g = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    return scale * (g.standard_normal((count, 3)) + 1j * g.standard_normal((count, 3)))


def w_polynomial_exact(i: int, j: int) -> dict[str, Fraction]:
    """Exact coefficients of W_{i,-j} as a polynomial in Q_2, Q_3, Q_4 (orders 2..4).

    Homogeneity leaves one or two unknowns, recovered from rational
    evaluations.
    """
    n = i + j
    if n == 2:
        return {"Q2": _w_entry_at({2: Fraction(1)}, i, j)}
    if n == 3:
        return {"Q3": _w_entry_at({3: Fraction(1)}, i, j)}
    if n == 4:
        a = _w_entry_at({4: Fraction(1)}, i, j)
        c = _w_entry_at({2: Fraction(1)}, i, j)
        return {"Q4": a, "Q2^2": c}
    raise ValueError("orders 2..4 only")


# ---------------------------------------------------------------------------
# geometry


def bers_norm(u) -> SupNorm:
    """sup (1-|z|^2)^2 |S(u)| with the band flags of the inclusion chain."""
    Q = schwarzian(u).coeffs.to_float()
    return sup_norm_quadratic(Q)


@dataclass(frozen=True)
class PolygonSpec:
    """Prevertices z_j on the circle with exterior parameters beta_j = 1 - alpha_j."""

    vertices: tuple
    betas: tuple

    def __post_init__(self):
        z = np.asarray(self.vertices, dtype=complex)
        if len(z) != len(self.betas):
            raise ValueError("one beta per vertex")
        if np.any(np.abs(np.abs(z) - 1) > 1e-12):
            raise ValueError("vertices must lie on the unit circle")
        if len(z) > 1 and np.min(np.abs(z[:, None] - z[None, :]) + 2 * np.eye(len(z))) < 1e-12:
            raise ValueError("coincident vertices")
        if any(not -1 < b < 1 for b in self.betas):
            raise ValueError("need 0 < alpha_j < 2")
        if abs(sum(self.betas) - 2) > 1e-9 and any(self.betas):
            warnings.warn("exterior parameters do not sum to 2; the polygon is not closed", stacklevel=2)

    @classmethod
    def regular(cls, n: int) -> "PolygonSpec":
        z = np.exp(2j * np.pi * np.arange(n) / n)
        return cls(tuple(z), (2 / n,) * n)


@dataclass
class ExteriorHead:
    """dl^{-1} = 1 + sum_k a_k z^{-k}; l^{-1} = z + b_0 + b_1 z^{-1} + ... when a_1 = 0."""

    dl_coeffs: np.ndarray  # a_0 .. a_N
    log_term: complex  # a_1; must vanish for l^{-1} to be single valued
    l_coeffs: dict  # power -> coefficient of l^{-1}, b_0 set to 0


def schwarz_christoffel_series(poly: PolygonSpec, N: int, exterior_vertices=None) -> tuple[PowerSeries, ExteriorHead]:
    """u with u' = prod (1 - z/z_j)^(-beta_j), and the head of the exterior map.

    log u' = sum_j beta_j sum_n (z / z_j)^n / n, so the product is one
    exponential.  The exterior side uses prod (1 - z'_j / z)^(beta_j).
    """
    z = np.asarray(poly.vertices, dtype=complex)
    b = np.asarray(poly.betas, dtype=float)
    n = np.arange(1, N + 1)
    logdu = np.zeros(N + 1, dtype=complex)
    logdu[1:] = (b[None, :] * z[None, :] ** (-n[:, None])).sum(axis=1) / n
    du = series_exp(PowerSeries(logdu))
    u = antideriv(du).truncate(N)
    zp = z if exterior_vertices is None else np.asarray(exterior_vertices, dtype=complex)
    logdl = np.zeros(N + 1, dtype=complex)
    logdl[1:] = -(b[None, :] * zp[None, :] ** (n[:, None])).sum(axis=1) / n
    dl = series_exp(PowerSeries(logdl)).c
    lcoef = {1: 1.0 + 0j, 0: 0j}
    for k in range(2, N + 1):
        lcoef[1 - k] = dl[k] / (1 - k)
    return u, ExteriorHead(dl, complex(dl[1]), lcoef)
