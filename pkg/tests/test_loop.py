from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from confmeasure.hankel import det_invariant, hankel_classical
from confmeasure.loop import (
    LoopParams,
    abelian_det_check,
    blocks_to_matrix,
    c_coeff,
    c_coeff_subset,
    factorization_w_invariance,
    loop_density,
    nilpotent_reduce,
    solve_g_plus,
    solve_g_plus_recursive,
    w_coefficient,
    w_entries_combinatorial,
    w_oracle,
    w_oracle_from_theta,
)
from confmeasure.series import MatrixSeries, compositions, matrix_series_inverse

q = st.fractions(min_value=-3, max_value=3, max_denominator=5)


def exact_theta(order, d):
    def build(vals):
        arr = np.empty((order + 1, d, d), dtype=object)
        arr[0] = Fraction(0)
        arr[1:] = np.array(vals, dtype=object).reshape(order, d, d)
        return MatrixSeries(arr, exact=True)

    return st.lists(q, min_size=order * d * d, max_size=order * d * d).map(build)


def symbolic_theta():
    """Free noncommuting symbols realized as 3x3 nilpotent-free generic matrices."""
    rng = np.random.default_rng(12)
    arr = np.zeros((4, 3, 3), dtype=object)
    arr[:] = Fraction(0)
    for k in range(1, 4):
        arr[k] = np.vectorize(lambda v: Fraction(int(v), 3), otypes=[object])(rng.integers(-4, 5, size=(3, 3)))
    return MatrixSeries(arr, exact=True)


def test_c_coeff_values():
    assert c_coeff((1,)) == 1
    assert c_coeff((1, 1)) == Fraction(1, 2)
    assert c_coeff((2, 1)) == Fraction(1, 6)
    assert c_coeff((1, 2)) == Fraction(1, 3)


@pytest.mark.parametrize("n", range(1, 13))
def test_c_coeff_two_formulas(n):
    for I in compositions(n):
        assert c_coeff(I) == c_coeff_subset(I)


def test_low_order_w_in_terms_of_theta():
    # coefficients of the words theta_I in each low-order block
    assert w_coefficient((1,), 1) == 1
    assert (w_coefficient((2,), 1), w_coefficient((1, 1), 1)) == (Fraction(1, 2), Fraction(-1, 2))
    assert (w_coefficient((2,), 2), w_coefficient((1, 1), 2)) == (Fraction(1, 2), Fraction(1, 2))
    # (1,-2): (2 theta_3 - [theta_1, theta_2] - 2 theta_1^3) / 6
    got = {I: w_coefficient(I, 2) for I in compositions(3)}
    assert got == {
        (3,): Fraction(1, 3),
        (1, 2): Fraction(-1, 6),
        (2, 1): Fraction(1, 6),
        (1, 1, 1): Fraction(-1, 3),
    }


def test_low_order_w_in_terms_of_g():
    th = symbolic_theta()
    g = solve_g_plus_recursive(th, 5).c
    assert np.all(w_entries_combinatorial(th, 0, 1) == g[1])
    assert np.all(w_entries_combinatorial(th, 1, 1) == g[2] - g[1] @ g[1])
    assert np.all(w_entries_combinatorial(th, 0, 2) == g[2])
    assert np.all(w_entries_combinatorial(th, 1, 2) == g[3] - g[1] @ g[2])


@given(exact_theta(6, 2))
@settings(max_examples=10, deadline=None)
def test_g_plus_two_routes(theta):
    assert solve_g_plus(theta).equals(solve_g_plus_recursive(theta))


@given(exact_theta(6, 2))
@settings(max_examples=5, deadline=None)
def test_w_combinatorial_matches_oracle(theta):
    W = w_oracle_from_theta(theta, 6)
    for i in range(6):
        for j in range(1, 7 - i):
            assert np.all(w_entries_combinatorial(theta, i, j) == W[i, j - 1])


def test_w_from_series_inverse():
    # W_{i,-j} = sum_{l <= i} (g^{-1})_l g_{i+j-l}, a third route
    th = symbolic_theta()
    g = solve_g_plus_recursive(th, 7)
    ginv = matrix_series_inverse(g).c
    W = w_oracle(g, 4)
    for i in range(4):
        for j in range(1, 5):
            acc = sum((ginv[l] @ g.c[i + j - l] for l in range(i + 1)), 0 * ginv[0])
            assert np.all(acc == W[i, j - 1])


def test_float_oracle_matches_exact():
    th = symbolic_theta()
    W_exact = w_oracle_from_theta(th, 4)
    th_f = MatrixSeries(np.vectorize(complex, otypes=[complex])(th.c))
    W_float = w_oracle_from_theta(th_f, 4)
    assert np.allclose(W_float, np.vectorize(complex, otypes=[complex])(W_exact))


def test_w_independent_of_minus_and_constant_factors():
    gm = {0: np.eye(2), -1: np.array([[0.2, 0.1], [0, -0.2]])}
    gp = {0: np.eye(2), 1: np.array([[0.3, 0.1j], [0.2, 0.1]]), 2: np.array([[0, 0.1], [0.05, 0]])}
    g0 = np.array([[1.2, 0.3], [0, 0.8]])
    assert factorization_w_invariance(gm, g0, gp, 64) < 1e-6
    scalar = factorization_w_invariance({0: np.eye(1), -1: -0.2 * np.eye(1)}, np.eye(1), {0: np.eye(1), 1: 0.5 * np.eye(1)}, 256)
    assert scalar < 1e-6


@given(st.lists(st.complex_numbers(max_magnitude=0.2), min_size=3, max_size=3))
@settings(max_examples=10, deadline=None)
def test_abelian_determinant(coeffs):
    det, closed = abelian_det_check([0] + coeffs, 60)
    assert det == pytest.approx(closed, rel=1e-6)


@pytest.mark.parametrize("deg", [1, 2, 3, 4])
def test_nilpotent_reduces_to_hankel(deg):
    x = [Fraction(0)] + [Fraction(k + 2, 3 + k) * (-1) ** k for k in range(deg)]
    W, H = nilpotent_reduce(x, 6)
    assert np.all(W[0::2, 1::2] == H)
    assert np.all(W[1::2, :] == 0) and np.all(W[:, 0::2] == 0)


def test_loop_density_special_cases():
    # nilpotent su(2): det(1 + B(x) B(x)*)^(-(4 + l)) with x the antiderivative
    l = 0.5
    th = np.zeros((3, 2, 2), dtype=complex)
    th[1, 0, 1], th[2, 0, 1] = 0.4, -0.3j
    x = [0, 0.4, -0.3j / 2]
    dens = loop_density(MatrixSeries(th), LoopParams(2, 1, l), 8)
    assert dens == pytest.approx(det_invariant(hankel_classical(np.array(x))) ** -(4 + l), rel=1e-12)
    # diagonal: exp(-(2 g + l)/m * 2 sum n |a_n|^2), a = antiderivative of alpha
    alpha = np.array([0, 0.3, 0.1j])
    th = np.zeros((3, 2, 2), dtype=complex)
    th[:, 0, 0], th[:, 1, 1] = alpha, -alpha
    a = alpha / np.maximum(np.arange(3), 1)
    closed = np.exp(-(4 + l) * 2 * np.sum(np.arange(3) * np.abs(a) ** 2))
    assert loop_density(MatrixSeries(th), LoopParams(2, 1, l), 60) == pytest.approx(closed, rel=1e-8)


def test_blocks_to_matrix_layout():
    W = np.arange(2 * 2 * 2 * 2).reshape(2, 2, 2, 2)
    M = blocks_to_matrix(W)
    assert M[2, 1] == W[1, 0, 0, 1] and M[3, 2] == W[1, 1, 1, 0]
