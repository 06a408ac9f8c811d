"""Truncated power series and matrix-valued series.

A series of order N stores the coefficients c_0..c_N and nothing else;
every operation returns the longest prefix that is determined by its
inputs.  Two coefficient modes are supported:

* float mode: a ``complex128`` numpy array,
* exact mode: a numpy ``object`` array whose entries are ``Fraction``
  or :class:`QQi` (a complex number with rational parts).

Exact mode is what lets the combinatorial identities elsewhere in the
package be checked with ``==`` instead of a tolerance.  Transcendental
operations (log, exp, non-integral powers) stay exact only when the
constant terms make them rational: log needs c_0 = 1, exp needs c_0 = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np


@dataclass(frozen=True, slots=True)
class QQi:
    """Gaussian rational re + i*im with ``Fraction`` parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def _lift(x):
        if isinstance(x, QQi):
            return x
        if isinstance(x, (int, Rational)):
            return QQi(Fraction(x))
        return NotImplemented

    def __add__(self, other):
        o = QQi._lift(other)
        if o is NotImplemented:
            return o
        return QQi(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __sub__(self, other):
        o = QQi._lift(other)
        if o is NotImplemented:
            return o
        return QQi(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = QQi._lift(other)
        if o is NotImplemented:
            return o
        return QQi(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QQi._lift(other)
        if o is NotImplemented:
            return o
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("QQi division by zero")
        return self * QQi(o.re / d, -o.im / d)

    def __rtruediv__(self, other):
        return QQi._lift(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return QQi(1) / (self ** (-n))
        out = QQi(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = QQi._lift(other) if not isinstance(other, complex) else None
        if o is None or o is NotImplemented:
            return complex(self) == other
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return QQi(self.re, -self.im)

    def __repr__(self):
        return f"QQi({self.re}, {self.im})"


def is_exact_scalar(x) -> bool:
    return isinstance(x, (int, Rational, QQi)) and not isinstance(x, bool)


def to_exact(x):
    """Convert an int, Fraction, QQi or tuple (re, im) to an exact scalar."""
    if isinstance(x, QQi):
        return x if x.im != 0 else x.re
    if isinstance(x, tuple):
        return to_exact(QQi(*x))
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot represent {x!r} exactly")


def conj(x):
    if isinstance(x, (int, Rational)):
        return x
    return x.conjugate()


def abs2(x):
    """|x|^2, exact for exact scalars."""
    if isinstance(x, QQi):
        return x.re * x.re + x.im * x.im
    if isinstance(x, (int, Rational)):
        return Fraction(x) * x
    return abs(x) ** 2


def exact_array(values) -> np.ndarray:
    arr = np.empty(np.shape(values), dtype=object)
    flat = arr.reshape(-1)
    for k, v in enumerate(np.asarray(values, dtype=object).reshape(-1)):
        flat[k] = to_exact(v)
    return arr


def _as_coeffs(values, exact):
    if exact is None:
        if isinstance(values, np.ndarray):
            exact = values.dtype == object
        else:
            vals = list(values)
            exact = (
                bool(vals)
                and all(is_exact_scalar(v) for v in vals)
                and any(isinstance(v, (Fraction, QQi)) for v in vals)
            )
            values = vals
    if exact:
        return exact_array(values)
    return np.asarray(values, dtype=complex)


def _zeros_like(c: np.ndarray, n: int) -> np.ndarray:
    if c.dtype == object:
        out = np.empty(n, dtype=object)
        out[:] = Fraction(0)
        return out
    return np.zeros(n, dtype=complex)


def _is_zero(x) -> bool:
    return x == 0


class PowerSeries:
    """Truncated series c_0 + c_1 z + ... + c_N z^N."""

    __array_priority__ = 1000

    def __init__(self, coeffs, exact: bool | None = None):
        c = _as_coeffs(coeffs, exact)
        if c.ndim != 1 or len(c) == 0:
            raise ValueError("coefficients must be a non-empty 1-d sequence")
        self.c = c

    @classmethod
    def zeros(cls, order: int, exact: bool = False) -> "PowerSeries":
        base = np.empty(0, dtype=object if exact else complex)
        return cls(_zeros_like(base, order + 1), exact=exact)

    @classmethod
    def z(cls, order: int, exact: bool = False) -> "PowerSeries":
        s = cls.zeros(order, exact)
        if order >= 1:
            s.c[1] = Fraction(1) if exact else 1.0
        return s

    @property
    def order(self) -> int:
        return len(self.c) - 1

    @property
    def exact(self) -> bool:
        return self.c.dtype == object

    def __len__(self):
        return len(self.c)

    def __getitem__(self, k):
        return self.c[k]

    def __repr__(self):
        return f"PowerSeries({self.c.tolist()!r})"

    def copy(self) -> "PowerSeries":
        return PowerSeries(self.c.copy(), exact=self.exact)

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return PowerSeries(self.c[: order + 1].copy(), exact=self.exact)

    def to_float(self) -> "PowerSeries":
        if not self.exact:
            return self
        return PowerSeries(np.array([complex(v) for v in self.c]), exact=False)

    def _coerce(self, other) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            return other
        s = PowerSeries.zeros(self.order, self.exact)
        s.c[0] = to_exact(other) if self.exact else complex(other)
        return s

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.order, other.order) + 1
        return PowerSeries(self.c[:n] + other.c[:n], exact=self.exact and other.exact)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries(-self.c, exact=self.exact)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return series_mul(self, other)
        if self.exact:
            return PowerSeries(self.c * to_exact(other), exact=True)
        return PowerSeries(self.c * complex(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PowerSeries):
            return series_div(self, other)
        if self.exact:
            return PowerSeries(self.c / to_exact(other), exact=True)
        return PowerSeries(self.c / complex(other))

    def __rtruediv__(self, other):
        return series_div(self._coerce(other), self)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return series_pow(self, n)
        out = self._coerce(1)
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, z):
        """Evaluate the polynomial c_0 + ... + c_N z^N (Horner)."""
        c = self.to_float().c
        z = np.asarray(z, dtype=complex)
        acc = np.full(z.shape, c[-1], dtype=complex)
        for a in c[-2::-1]:
            acc = acc * z + a
        return acc

    def equals(self, other: "PowerSeries") -> bool:
        n = min(self.order, other.order) + 1
        return all(a == b for a, b in zip(self.c[:n], other.c[:n]))


def _conv(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    if a.dtype == object or b.dtype == object:
        out = _zeros_like(np.empty(0, dtype=object), n)
        for k in range(n):
            acc = Fraction(0)
            for j in range(max(0, k - len(b) + 1), min(k, len(a) - 1) + 1):
                acc = acc + a[j] * b[k - j]
            out[k] = acc
        return out
    return np.convolve(a, b)[:n]


def series_mul(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    n = min(f.order, g.order) + 1
    return PowerSeries(_conv(f.c[:n], g.c[:n], n), exact=f.exact and g.exact)


def series_div(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """f / g, requiring g_0 != 0."""
    if _is_zero(g.c[0]):
        raise ValueError("series division needs a nonzero constant term")
    n = min(f.order, g.order) + 1
    exact = f.exact and g.exact
    a, b = f.c[:n], g.c[:n]
    h = _zeros_like(a if exact else np.empty(0, complex), n)
    g0 = b[0]
    for k in range(n):
        acc = a[k]
        if k:
            if exact:
                for j in range(1, k + 1):
                    acc = acc - b[j] * h[k - j]
            else:
                acc = acc - np.dot(b[1 : k + 1], h[k - 1 :: -1])
        h[k] = acc / g0
    return PowerSeries(h, exact=exact)


def deriv(f: PowerSeries) -> PowerSeries:
    """d/dz; the result has order N-1 (a constant maps to the zero series of order 0)."""
    if f.order == 0:
        return PowerSeries.zeros(0, f.exact)
    k = np.arange(1, f.order + 1)
    if f.exact:
        return PowerSeries(np.array([f.c[j] * j for j in k], dtype=object), exact=True)
    return PowerSeries(f.c[1:] * k)


def antideriv(f: PowerSeries) -> PowerSeries:
    """Antiderivative vanishing at 0; the result has order N+1."""
    out = PowerSeries.zeros(f.order + 1, f.exact)
    if f.exact:
        for j, a in enumerate(f.c):
            out.c[j + 1] = a / (j + 1)
    else:
        out.c[1:] = f.c / np.arange(1, f.order + 2)
    return out


def series_compose(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """f(g(z)) for g_0 = 0, by Horner's rule in the series ring."""
    if not _is_zero(g.c[0]):
        raise ValueError("composition needs g(0) = 0")
    n = min(f.order, g.order)
    g = g.truncate(n)
    acc = PowerSeries.zeros(n, f.exact and g.exact)
    for a in f.c[n::-1]:
        acc = acc * g
        acc.c[0] = acc.c[0] + a
    return acc


def polynomial_substitute(p: PowerSeries, h: PowerSeries) -> PowerSeries:
    """p(h(z)) for a polynomial p and any series h (h_0 may be nonzero).

    Every coefficient of p is used, so the result is exact to the order of h
    when p really is a polynomial.
    """
    acc = PowerSeries.zeros(h.order, p.exact and h.exact)
    for a in p.c[::-1]:
        acc = acc * h
        acc.c[0] = acc.c[0] + a
    return acc


def series_reversion(f: PowerSeries) -> PowerSeries:
    """Compositional inverse g with f(g(z)) = z, by Lagrange inversion.

    Needs f_0 = 0 and f_1 != 0.  Uses g_n = (1/n) [w^{n-1}] (w / f(w))^n.
    """
    if not _is_zero(f.c[0]):
        raise ValueError("reversion needs f(0) = 0")
    if _is_zero(f.c[1]) if f.order >= 1 else True:
        raise ValueError("reversion needs f'(0) != 0")
    N = f.order
    q = PowerSeries(f.c[1:].copy(), exact=f.exact)  # f(w)/w, order N-1
    qinv = 1 / q
    g = PowerSeries.zeros(N, f.exact)
    power = qinv._coerce(1)
    for n in range(1, N + 1):
        power = power * qinv
        g.c[n] = power.c[n - 1] / n
    return g


def series_log(f: PowerSeries) -> PowerSeries:
    """Principal log, as log f_0 + integral of f'/f."""
    f0 = f.c[0]
    if _is_zero(f0):
        raise ValueError("log needs a nonzero constant term")
    if f.exact and f0 != 1:
        raise ValueError("exact log needs constant term 1")
    out = antideriv(deriv(f) / f) if f.order else PowerSeries.zeros(0, f.exact)
    if not f.exact:
        out.c[0] = np.log(complex(f0))
    return out


def series_exp(g: PowerSeries) -> PowerSeries:
    """exp(g) by the recurrence n e_n = sum_k k g_k e_{n-k}."""
    g0 = g.c[0]
    if g.exact and not _is_zero(g0):
        raise ValueError("exact exp needs constant term 0")
    N = g.order
    e = PowerSeries.zeros(N, g.exact)
    if g.exact:
        e.c[0] = Fraction(1)
        for n in range(1, N + 1):
            acc = Fraction(0)
            for k in range(1, n + 1):
                acc = acc + g.c[k] * k * e.c[n - k]
            e.c[n] = acc / n
        return e
    kg = g.c * np.arange(N + 1)
    e.c[0] = np.exp(complex(g0))
    for n in range(1, N + 1):
        e.c[n] = np.dot(kg[1 : n + 1], e.c[n - 1 :: -1]) / n
    return e


def series_pow(f: PowerSeries, alpha) -> PowerSeries:
    """f^alpha = exp(alpha log f) on the principal branch."""
    if f.exact and is_exact_scalar(alpha):
        return series_exp(series_log(f) * to_exact(alpha))
    f = f.to_float()
    return series_exp(series_log(f) * complex(alpha))


# ---------------------------------------------------------------------------
# matrix-valued series


def _identity(d: int, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty((d, d), dtype=object)
        out[:] = Fraction(0)
        for i in range(d):
            out[i, i] = Fraction(1)
        return out
    return np.eye(d, dtype=complex)


def exact_matrix_inverse(M: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse of a square object array of exact scalars."""
    d = M.shape[0]
    A = np.concatenate([M.astype(object), _identity(d, True)], axis=1)
    for col in range(d):
        piv = next((r for r in range(col, d) if A[r, col] != 0), None)
        if piv is None:
            raise np.linalg.LinAlgError("singular matrix")
        A[[col, piv]] = A[[piv, col]]
        A[col] = A[col] / A[col, col]
        for r in range(d):
            if r != col and A[r, col] != 0:
                A[r] = A[r] - A[r, col] * A[col]
    return A[:, d:]


class MatrixSeries:
    """Truncated series G_0 + G_1 z + ... with d x d matrix coefficients.

    ``coeffs`` has shape (N+1, d, d).
    """

    def __init__(self, coeffs, exact: bool | None = None):
        arr = np.asarray(coeffs, dtype=object if exact else None)
        if exact is None:
            exact = arr.dtype == object
        if exact:
            self.c = exact_array(arr)
        else:
            self.c = np.asarray(arr, dtype=complex)
        if self.c.ndim != 3 or self.c.shape[1] != self.c.shape[2]:
            raise ValueError("matrix series coefficients must have shape (N+1, d, d)")

    @property
    def order(self) -> int:
        return self.c.shape[0] - 1

    @property
    def dim(self) -> int:
        return self.c.shape[1]

    @property
    def exact(self) -> bool:
        return self.c.dtype == object

    def __getitem__(self, k):
        return self.c[k]

    def __mul__(self, other: "MatrixSeries") -> "MatrixSeries":
        n = min(self.order, other.order) + 1
        exact = self.exact and other.exact
        out = np.empty((n, self.dim, self.dim), dtype=object if exact else complex)
        for k in range(n):
            acc = self.c[0] @ other.c[k]
            for j in range(1, k + 1):
                acc = acc + self.c[j] @ other.c[k - j]
            out[k] = acc
        return MatrixSeries(out, exact=exact)

    def equals(self, other: "MatrixSeries") -> bool:
        n = min(self.order, other.order) + 1
        return bool(np.all(self.c[:n] == other.c[:n]))


def matrix_series_inverse(G: MatrixSeries) -> MatrixSeries:
    """Two-sided inverse H with G H = H G = 1, needs G_0 invertible.

    Recursion H_n = -G_0^{-1} sum_{k>=1} G_k H_{n-k}.
    """
    exact = G.exact
    G0inv = exact_matrix_inverse(G.c[0]) if exact else np.linalg.inv(G.c[0])
    H = np.empty_like(G.c)
    H[0] = G0inv
    for n in range(1, G.order + 1):
        acc = G.c[1] @ H[n - 1]
        for k in range(2, n + 1):
            acc = acc + G.c[k] @ H[n - k]
        H[n] = -(G0inv @ acc)
    return MatrixSeries(H, exact=exact)


def compositions(n: int):
    """All ordered tuples of positive integers summing to n (2^(n-1) of them)."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            yield (first,) + rest


def matrix_series_inverse_multiindex(G: MatrixSeries) -> MatrixSeries:
    """Inverse of a series with G_0 = 1 from the expansion over compositions.

    (G^{-1})_n = sum over compositions (i_1..i_l) of n of (-1)^l G_{i_1}...G_{i_l}.
    Exponential cost; meant as an independent check of the recursion.
    """
    one = _identity(G.dim, G.exact)
    if not np.all(G.c[0] == one):
        raise ValueError("multi-index inverse needs G_0 = 1")
    H = np.empty_like(G.c)
    H[0] = one
    for n in range(1, G.order + 1):
        acc = 0 * one
        for comp in compositions(n):
            term = one
            for i in comp:
                term = term @ G.c[i]
            acc = acc + (term if len(comp) % 2 == 0 else -term)
        H[n] = acc
    return MatrixSeries(H, exact=G.exact)
