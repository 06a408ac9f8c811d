"""Invariant Hilbert structure on holomorphic m-differentials of the disk.

A differential f(z)(dz)^m is stored as the power series of f.  The
invariant norm is diagonal in the monomial basis,

    |f|^2 = sum_n |f_n|^2 w_m(n),   w_m(n) = n! / ((2m)(2m+1)...(2m+n-1)),

and the group acting on it is the universal cover of SU(1,1), realized
as triples (a, b, A) with |a|^2 - |b|^2 = 1 and exp(A) = a.

Degree m = 0 means the rescaled space of functions modulo constants,
normalized so that d/dz is an isometry onto the m = 1 space; its norm
is sum_k k |x_k|^2 and the constant term is ignored.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np
from scipy import optimize
from scipy.special import gammaln

from .series import PowerSeries, is_exact_scalar, polynomial_substitute, series_pow


def norm_weight(m, n: int):
    """w_m(n); exact (Fraction) when m is rational."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if m <= 0:
        raise ValueError("norm_weight needs m > 0")
    if isinstance(m, Rational):
        w = Fraction(1)
        for k in range(n):
            w = w * (k + 1) / (2 * Fraction(m) + k)
        return w
    return float(np.exp(gammaln(n + 1) + gammaln(2 * m) - gammaln(2 * m + n)))


def norm_weights(m, N: int) -> np.ndarray:
    """Array w_m(0..N); for m = 0 the rescaled weights (0, 1, 2, ..., N)."""
    if m == 0:
        return np.arange(N + 1, dtype=float)
    if isinstance(m, Rational):
        return np.array([norm_weight(m, n) for n in range(N + 1)], dtype=object)
    n = np.arange(N + 1)
    return np.exp(gammaln(n + 1) + gammaln(2 * m) - gammaln(2 * m + n))


def _coeffs(f):
    return f.c if isinstance(f, PowerSeries) else np.asarray(f)


def inner_product(f, g, m):
    """<f, g> = sum f_n conj(g_n) w_m(n), over the common truncation."""
    a, b = _coeffs(f), _coeffs(g)
    n = min(len(a), len(b))
    w = norm_weights(m, n - 1)
    if a.dtype == object or b.dtype == object:
        from .series import conj

        return sum((a[k] * conj(b[k]) * w[k] for k in range(n)), Fraction(0))
    return complex(np.sum(a[:n] * np.conj(b[:n]) * w.astype(float)))


def norm_sq(f, m):
    v = inner_product(f, f, m)
    return v if not isinstance(v, complex) else v.real


def eval_representer(z0: complex, m, N: int) -> PowerSeries:
    """Series of the reproducing kernel at z0, truncated at order N.

    For m > 0 this is (1 - conj(z0) z)^(-2m); for m = 0 it is
    log 1/(1 - conj(z0) z), whose pairing returns x(z0) - x(0).
    """
    if abs(z0) >= 1:
        raise ValueError("evaluation point must lie in the open disk")
    zc = np.conj(complex(z0)) ** np.arange(N + 1)
    w = norm_weights(m, N).astype(float)
    c = np.zeros(N + 1, dtype=complex)
    c[1 if m == 0 else 0 :] = zc[1 if m == 0 else 0 :] / w[1 if m == 0 else 0 :]
    return PowerSeries(c)


def covariance_matrix(points, m) -> np.ndarray:
    """C_ij = (1 - conj(z_i) z_j)^(-2m), or log 1/(1 - conj(z_i) z_j) for m = 0.

    This is the Gram matrix <K_{z_i}, K_{z_j}> of the evaluation kernels.
    """
    z = np.asarray(points, dtype=complex)
    if np.any(np.abs(z) >= 1):
        raise ValueError("points must lie in the open disk")
    t = 1 - np.conj(z)[:, None] * z[None, :]
    if m == 0:
        return -np.log(t)
    return np.exp(-2 * m * np.log(t))


def poincare_dist(z: complex, w: complex) -> float:
    """arctanh |(z - w) / (1 - conj(z) w)|."""
    if abs(z) >= 1 or abs(w) >= 1:
        raise ValueError("points must lie in the open disk")
    return float(np.arctanh(abs((z - w) / (1 - np.conj(z) * w))))


@dataclass(frozen=True)
class GroupElement:
    """Element (a, b, A) of the universal cover of SU(1,1).

    The matrix is [[a, b], [conj b, conj a]]; A is a chosen logarithm of a,
    which fixes the branch of the action on differentials of any degree.
    """

    a: complex
    b: complex
    A: complex

    def __post_init__(self):
        a, b, A = complex(self.a), complex(self.b), complex(self.A)
        if abs(abs(a) ** 2 - abs(b) ** 2 - 1) > 1e-9 * abs(a) ** 2:
            raise ValueError("need |a|^2 - |b|^2 = 1")
        if abs(cmath.exp(A) - a) > 1e-9 * abs(a):
            raise ValueError("need exp(A) = a")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "A", A)

    @classmethod
    def from_ab(cls, a, b, lift: int = 0) -> "GroupElement":
        a = complex(a)
        return cls(a, b, cmath.log(a) + 2j * np.pi * lift)

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls(1, 0, 0)

    @classmethod
    def central(cls, n: int) -> "GroupElement":
        return cls((-1) ** n, 0, 1j * np.pi * n)

    @classmethod
    def random(cls, rng: np.random.Generator, max_ratio: float = 0.5, lifts=(-1, 0, 1)) -> "GroupElement":
        t = np.arctanh(max_ratio * rng.uniform())
        phi, psi = rng.uniform(0, 2 * np.pi, size=2)
        a = np.cosh(t) * np.exp(1j * phi)
        b = np.sinh(t) * np.exp(1j * psi)
        return cls(a, b, np.log(np.cosh(t)) + 1j * phi + 2j * np.pi * rng.choice(lifts))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        a3 = a1 * a2 + b1 * np.conj(b2)
        b3 = a1 * b2 + b1 * np.conj(a2)
        A3 = self.A + other.A + cmath.log(1 + b1 * np.conj(b2) / (a1 * a2))
        return GroupElement(a3, b3, A3)

    def inverse(self) -> "GroupElement":
        return GroupElement(np.conj(self.a), -self.b, np.conj(self.A))

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [np.conj(self.b), np.conj(self.a)]])

    def __call__(self, z):
        """Moebius action z -> (a z + b) / (conj(b) z + conj(a))."""
        z = np.asarray(z, dtype=complex)
        return (self.a * z + self.b) / (np.conj(self.b) * z + np.conj(self.a))

    def close_to(self, other: "GroupElement", tol: float = 1e-10) -> bool:
        return abs(self.a - other.a) < tol and abs(self.b - other.b) < tol and abs(self.A - other.A) < tol


def moebius_act(g: GroupElement, f: PowerSeries, m, order: int | None = None) -> PowerSeries:
    """Push a degree-m differential forward along g.

    (g.f)(z) = f(g^{-1} z) (a - conj(b) z)^(-2m), with the branch
    (a - conj(b) z)^(-2m) = exp(-2mA) (1 - (conj(b)/a) z)^(-2m).
    For m = 0 the constant term is dropped.  The inner substitution has a
    nonzero constant term, so f is treated as a polynomial: exact when f
    is one, and accurate to the tail size when f is a truncated series.
    """
    N = f.order if order is None else order
    f = f.to_float()
    s = np.conj(g.b) / g.a
    geo = PowerSeries(s ** np.arange(N + 1))
    num = np.zeros(N + 1, dtype=complex)
    num[0] = -g.b / g.a
    if N >= 1:
        num[1] = np.conj(g.a) / g.a
    h = PowerSeries(num) * geo  # g^{-1}(z) = (conj(a) z - b) / (a - conj(b) z)
    out = polynomial_substitute(f, h)
    if m == 0:
        out.c[0] = 0
        return out
    one_minus = np.zeros(N + 1, dtype=complex)
    one_minus[0] = 1
    if N >= 1:
        one_minus[1] = -s
    factor = series_pow(PowerSeries(one_minus), -2 * m) * np.exp(-2 * m * g.A)
    return out * factor


@dataclass
class SupNorm:
    value: float  # refined supremum of (1 - |z|^2)^2 |Q(z)|
    grid_value: float
    argmax: complex

    @property
    def in_inner_ball(self) -> bool:
        return self.value < 2

    @property
    def in_outer_band(self) -> bool:
        return self.value < 6


def sup_norm_quadratic(Q: PowerSeries, grid: tuple[int, int] = (200, 256)) -> SupNorm:
    """sup over the disk of (1 - |z|^2)^2 |Q(z)| for a quadratic differential Q dz^2.

    A polar grid gives a lower bound; a local optimizer started at the best
    grid point refines it.
    """
    nr, nt = grid
    r = np.linspace(0, 1, nr, endpoint=False)
    t = np.linspace(0, 2 * np.pi, nt, endpoint=False)
    R, T = np.meshgrid(r, t, indexing="ij")
    Z = R * np.exp(1j * T)
    vals = (1 - R**2) ** 2 * np.abs(Q(Z))
    k = np.unravel_index(np.argmax(vals), vals.shape)
    best = float(vals[k])

    def neg(p):
        rr = min(abs(p[0]), 1.0)
        z = rr * np.exp(1j * p[1])
        return -float((1 - rr**2) ** 2 * abs(Q(z)))

    res = optimize.minimize(neg, [R[k], T[k]], method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-14})
    value = max(best, -res.fun)
    rr = min(abs(res.x[0]), 1.0)
    return SupNorm(value=value, grid_value=best, argmax=complex(rr * np.exp(1j * res.x[1])))


def is_exact_degree(m) -> bool:
    return is_exact_scalar(m)
