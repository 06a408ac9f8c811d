"""The W map for loops, built two ways.

A holomorphic 1-form theta = (theta_1 + theta_2 z + ...) dz with values in
d x d matrices determines g_+ by g_+' = g_+ theta, g_+(0) = 1.  Writing
theta_k for the coefficient of z^(k-1), a matrix series here stores
theta_k at index k (index 0 is unused and zero).

Combinatorial route.  For a composition I = (i_1, .., i_l),

    c(I) = prod_j 1 / (i_1 + .. + i_j),     g_n = sum_{|I| = n} c(I) theta_I,

and the block W_{i,-j} of W(g_+) = A(g_+)^{-1} B(g_+) is
sum_{|I| = i+j} C(I) theta_I, where C(I) sums (-1)^(l+1) c(I_1)..c(I_l)
over the ways of cutting I into consecutive pieces whose last piece has
weight at least j.

Oracle route.  Solve g_+' = g_+ theta by its coefficient recursion, build
the Toeplitz blocks of multiplication by g_+ on the polarized basis
{z^k}, k >= 0 against k < 0, and solve the block-triangular system.

Block (i, -j) sits at row z^i (i >= 0) and column z^(-j) (j >= 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from .hankel import hankel_classical, log_det_invariant
from .series import MatrixSeries, compositions, exact_matrix_inverse

Composition = tuple[int, ...]


@lru_cache(maxsize=None)
def c_coeff(I: Composition) -> Fraction:
    """c(I) = prod_j 1/(i_1 + ... + i_j)."""
    out = Fraction(1)
    s = 0
    for i in I:
        s += i
        out /= s
    return out


def c_coeff_subset(I: Composition) -> Fraction:
    """c(I) as (product of the complement of the partial sums in {1..n}) / n!."""
    n = sum(I)
    partial = set(np.cumsum(I).tolist())
    num = 1
    fact = 1
    for k in range(1, n + 1):
        fact *= k
        if k not in partial:
            num *= k
    return Fraction(num, fact)


@lru_cache(maxsize=None)
def _cuts(I: Composition):
    """All ways to split I into consecutive nonempty pieces."""
    n = len(I)
    out = []
    for r in range(n):
        for cut in combinations(range(1, n), r):
            bounds = (0,) + cut + (n,)
            out.append(tuple(I[bounds[k] : bounds[k + 1]] for k in range(len(bounds) - 1)))
    return tuple(out)


@lru_cache(maxsize=None)
def w_coefficient(I: Composition, j: int) -> Fraction:
    """C(I) for the block (i, -j) with i + j = |I|."""
    total = Fraction(0)
    for pieces in _cuts(I):
        if sum(pieces[-1]) < j:
            continue
        term = Fraction(1)
        for piece in pieces:
            term *= c_coeff(piece)
        total += term if len(pieces) % 2 == 1 else -term
    return total


def _identity(d: int, exact: bool) -> np.ndarray:
    if exact:
        out = np.full((d, d), Fraction(0), dtype=object)
        for k in range(d):
            out[k, k] = Fraction(1)
        return out
    return np.eye(d, dtype=complex)


def _word(theta: MatrixSeries, I: Composition) -> np.ndarray:
    out = _identity(theta.dim, theta.exact)
    for i in I:
        out = out @ theta.c[i]
    return out


def solve_g_plus(theta: MatrixSeries, N: int | None = None) -> MatrixSeries:
    """g_0 .. g_N from the c(I) expansion."""
    N = theta.order if N is None else N
    d, exact = theta.dim, theta.exact
    out = np.empty((N + 1, d, d), dtype=object if exact else complex)
    out[0] = _identity(d, exact)
    for n in range(1, N + 1):
        acc = 0 * out[0]
        for I in compositions(n):
            acc = acc + c_coeff(I) * _word(theta, I) if exact else acc + float(c_coeff(I)) * _word(theta, I)
        out[n] = acc
    return MatrixSeries(out, exact=exact)


def solve_g_plus_recursive(theta: MatrixSeries, N: int | None = None) -> MatrixSeries:
    """g_0 .. g_N from n g_n = sum_{k=1..n} g_{n-k} theta_k (the ODE g' = g theta)."""
    N = theta.order if N is None else N
    d, exact = theta.dim, theta.exact
    out = np.empty((N + 1, d, d), dtype=object if exact else complex)
    out[0] = _identity(d, exact)
    K = theta.order
    for n in range(1, N + 1):
        acc = 0 * out[0]
        for k in range(1, min(n, K) + 1):
            acc = acc + out[n - k] @ theta.c[k]
        out[n] = acc / n if not exact else acc * Fraction(1, n)
    return MatrixSeries(out, exact=exact)


def w_entries_combinatorial(theta: MatrixSeries, i: int, j: int) -> np.ndarray:
    """Block W_{i,-j} = sum over compositions I of i + j of C(I) theta_I."""
    if i < 0 or j < 1:
        raise ValueError("need i >= 0 and j >= 1")
    acc = 0 * _identity(theta.dim, theta.exact)
    for I in compositions(i + j):
        if max(I) > theta.order:
            continue
        coeff = w_coefficient(I, j)
        if coeff:
            acc = acc + (coeff if theta.exact else float(coeff)) * _word(theta, I)
    return acc


def w_oracle(g_plus: MatrixSeries, K: int) -> np.ndarray:
    """Blocks W_{i,-j} for 0 <= i < K, 1 <= j <= K from the Toeplitz blocks of g_+.

    Returns an array of shape (K, K, d, d) indexed [i, j - 1].  Needs g_+
    known to order 2K - 1.  A(g_+) is block lower triangular, so the
    truncated solve is exact.
    """
    if g_plus.order < 2 * K - 1:
        raise ValueError("g_plus must be known to order 2K - 1")
    d, exact = g_plus.dim, g_plus.exact
    g = g_plus.c
    if exact:
        g0inv = exact_matrix_inverse(g[0])
        W = np.empty((K, K, d, d), dtype=object)
        for i in range(K):
            for jj in range(K):
                acc = g[i + jj + 1]
                for s in range(i):
                    acc = acc - g[i - s] @ W[s, jj]
                W[i, jj] = g0inv @ acc
        return W
    A = np.zeros((K * d, K * d), dtype=complex)
    B = np.zeros((K * d, K * d), dtype=complex)
    for r in range(K):
        for s in range(r + 1):
            A[r * d : (r + 1) * d, s * d : (s + 1) * d] = g[r - s]
        for jj in range(K):
            B[r * d : (r + 1) * d, jj * d : (jj + 1) * d] = g[r + jj + 1]
    Wflat = np.linalg.solve(A, B)
    return Wflat.reshape(K, d, K, d).transpose(0, 2, 1, 3)


def w_oracle_from_theta(theta: MatrixSeries, K: int) -> np.ndarray:
    return w_oracle(solve_g_plus_recursive(theta, 2 * K - 1), K)


def blocks_to_matrix(W: np.ndarray) -> np.ndarray:
    """(K, K, d, d) blocks -> (K d, K d) scalar matrix."""
    K1, K2, d, _ = W.shape
    return W.transpose(0, 2, 1, 3).reshape(K1 * d, K2 * d)


def _laurent_product(*factors: dict[int, np.ndarray]) -> dict[int, np.ndarray]:
    out = factors[0]
    for f in factors[1:]:
        nxt: dict[int, np.ndarray] = {}
        for a, A in out.items():
            for b, B in f.items():
                nxt[a + b] = nxt.get(a + b, 0) + A @ B
        out = nxt
    return out


def factorization_w_invariance(g_minus: dict, g_0: np.ndarray, g_plus: dict, K: int, r: int = 4) -> float:
    """Max deviation between W(g_- g_0 g_+) and W(g_+) on blocks i < r, j <= r.

    Loops are Laurent polynomials given as {power: d x d matrix}; g_- has
    powers <= 0 with g_-(inf) = 1, g_+ powers >= 0 with g_+(0) = 1.  The
    full loop is truncated to the basis z^k, -K <= k < K, so the answer
    carries a truncation error that shrinks as K grows.
    """
    loop = _laurent_product(g_minus, {0: np.asarray(g_0, dtype=complex)}, g_plus)
    d = np.asarray(g_0).shape[0]

    def blk(k):
        return np.asarray(loop.get(k, np.zeros((d, d))), dtype=complex)

    A = np.zeros((K * d, K * d), dtype=complex)
    B = np.zeros((K * d, K * d), dtype=complex)
    for row in range(K):
        for col in range(K):
            A[row * d : (row + 1) * d, col * d : (col + 1) * d] = blk(row - col)
            B[row * d : (row + 1) * d, col * d : (col + 1) * d] = blk(row + col + 1)
    W_loop = np.linalg.solve(A, B).reshape(K, d, K, d).transpose(0, 2, 1, 3)
    gp = np.zeros((2 * r, d, d), dtype=complex)
    for k, v in g_plus.items():
        if k < 2 * r:
            gp[k] = v
    W_plus = w_oracle(MatrixSeries(gp), r)
    return float(np.abs(W_loop[:r, :r] - W_plus).max())


def _scalar_exp_series(x: np.ndarray, N: int) -> np.ndarray:
    """Coefficients of exp(x(z)) to order N for a polynomial x with x_0 = 0."""
    kx = np.zeros(N + 1, dtype=complex)
    m = min(len(x), N + 1)
    kx[:m] = (np.arange(len(x)) * x)[:m]
    e = np.zeros(N + 1, dtype=complex)
    e[0] = 1
    for n in range(1, N + 1):
        e[n] = np.dot(kx[1 : n + 1], e[n - 1 :: -1]) / n
    return e


def abelian_det_check(x, K: int) -> tuple[float, float]:
    """(det(1 + W W*) for g_+ = exp(x) truncated at K, exp(sum n |x_n|^2))."""
    x = np.asarray(x, dtype=complex)
    g = _scalar_exp_series(x, 2 * K - 1).reshape(-1, 1, 1)
    W = blocks_to_matrix(w_oracle(MatrixSeries(g), K))
    n = np.arange(len(x))
    return float(np.exp(log_det_invariant(W))), float(np.exp(np.sum(n * np.abs(x) ** 2)))


def nilpotent_reduce(x, K: int) -> tuple[np.ndarray, np.ndarray]:
    """W for g_+ = [[1, x], [0, 1]] as a scalar matrix, plus the Hankel matrix of x.

    Rows/columns are ordered (block, component).  The (first, second)
    component sub-matrix should be the Hankel matrix; everything else zero.
    """
    exact = any(isinstance(v, Fraction) for v in x)
    N = 2 * K - 1
    zero = Fraction(0) if exact else 0j
    one = Fraction(1) if exact else 1 + 0j
    g = np.full((N + 1, 2, 2), zero, dtype=object if exact else complex)
    g[0, 0, 0] = g[0, 1, 1] = one
    for k, v in enumerate(x):
        if 1 <= k <= N:
            g[k, 0, 1] = Fraction(v) if exact else v
    W = w_oracle(MatrixSeries(g, exact=exact), K)
    xs = np.array([Fraction(v) if exact else v for v in x] + [zero] * (K + 1 - len(x)), dtype=object if exact else complex)
    H = hankel_classical(xs[: K + 1], K)
    return blocks_to_matrix(W), H


@dataclass(frozen=True)
class LoopParams:
    dual_coxeter: int  # g-check
    level: float = 1.0  # the m in the exponent
    l: float = 0.0


def loop_density(theta: MatrixSeries, params: LoopParams, K: int) -> float:
    """Unnormalized density det(1 + W W*)^(-(2 g-check + l) / m) with W truncated to K blocks."""
    W = blocks_to_matrix(w_oracle_from_theta(theta, K))
    expo = (2 * params.dual_coxeter + params.l) / params.level
    return float(np.exp(-expo * log_det_invariant(W)))
