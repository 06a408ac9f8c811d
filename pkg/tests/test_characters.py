from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from confmeasure.characters import (
    CharacterSeries,
    Partition,
    count_partitions,
    count_partitions_length,
    decompose,
    equal_top_parts,
    partitions,
    stated_wedge_weights,
    sym_power_multiplicities,
    tensor_decomp_check,
    wedge_character,
    wedge_halfform_weights,
)


def test_partition_type():
    lam = Partition((3, 1, 1))
    assert lam.weight == 5 and lam.length == 3 and lam.multiplicity(1) == 2
    with pytest.raises(ValueError):
        Partition((1, 2))


def test_small_counts():
    assert [count_partitions(N) for N in range(5)] == [1, 1, 2, 3, 5]
    assert count_partitions_length(4, 2) == 2
    assert count_partitions_length(0, 0) == 1 and count_partitions_length(3, 0) == 0


@pytest.mark.parametrize("N", range(21))
def test_dp_matches_enumeration(N):
    for n in range(N + 1):
        brute = sum(1 for lam in partitions(N) if lam.length == n)
        assert count_partitions_length(N, n) == brute
        no_ones = sum(1 for lam in partitions(N) if lam.length == n and lam.multiplicity(1) == 0)
        assert count_partitions_length(N, n, 2) == no_ones


@pytest.mark.parametrize("n", range(2, 7))
def test_difference_counts_partitions_with_repeated_top_part(n):
    for N in range(21):
        assert count_partitions_length(N, n) - count_partitions_length(N - 1, n) == equal_top_parts(N, n)


def test_symmetric_powers_of_h1():
    # S^1(H^1) is H^1 itself
    assert sym_power_multiplicities(1, 10) == [0, 1] + [0] * 9
    assert sym_power_multiplicities(2, 12) == [0, 0] + [1 - k % 2 for k in range(2, 13)]
    s3 = sym_power_multiplicities(3, 12)
    assert {N: m for N, m in enumerate(s3) if m} == {3: 1, 5: 1, 6: 1, 7: 1, 8: 1, 9: 2, 10: 1, 11: 2, 12: 2}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_multiplicities_rebuild_character(n):
    Nmax = 25
    mult = sym_power_multiplicities(n, Nmax)
    rebuilt = [sum(mult[: N + 1]) for N in range(Nmax + 1)]
    assert rebuilt == [count_partitions_length(N, n) for N in range(Nmax + 1)]


def test_symmetric_powers_of_h2():
    # S^n(H^2): partitions with n parts, none equal to 1, differenced in N
    assert sym_power_multiplicities(1, 8, source=2) == [0, 0, 1] + [0] * 6
    s2 = sym_power_multiplicities(2, 14, source=2)
    assert {N for N, m in enumerate(s2) if m} == {4, 6, 8, 10, 12, 14}
    for n in [2, 3]:
        m = sym_power_multiplicities(n, 20, source=2)
        assert all(v >= 0 for v in m)
        assert sum(m) == count_partitions_length(20, n, 2)


def test_wedge_square_equals_sym_square():
    wedge = {int(w): m for w, m in wedge_halfform_weights(2, 40)}
    sym = sym_power_multiplicities(2, 40)
    assert [wedge.get(N, 0) for N in range(41)] == sym


def test_wedge_low_cases():
    assert wedge_halfform_weights(1, 6) == [(Fraction(1, 2), 1)]
    assert wedge_halfform_weights(2, 10) == [(Fraction(k), 1) for k in (2, 4, 6, 8, 10)]
    assert [w for w in stated_wedge_weights(2, 10)] == [2, 4, 6, 8, 10]


def test_wedge_cube_is_not_multiplicity_free():
    got = dict(wedge_halfform_weights(3, 12))
    assert got == {
        Fraction(9, 2): 1,
        Fraction(13, 2): 1,
        Fraction(15, 2): 1,
        Fraction(17, 2): 1,
        Fraction(19, 2): 1,
        Fraction(21, 2): 2,
        Fraction(23, 2): 1,
    }
    assert set(stated_wedge_weights(3, 12)) != set(got)
    assert dict(wedge_halfform_weights(4, 12))[Fraction(12)] == 2


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_wedge_character_closed_form(n):
    # q^(n^2/2) / ((1-q)..(1-q^n)) counts partitions into parts of size <= n
    order = 15
    ch = wedge_character(n, order)
    assert ch.offset2 == n * n
    at_most_n = [sum(1 for lam in partitions(k) if all(p <= n for p in lam.parts)) for k in range(order + 1)]
    assert ch.coeffs == at_most_n


def test_tensor_products():
    res = tensor_decomp_check(Fraction(1, 2), Fraction(1, 2), 30)
    assert res["holds"]
    assert [w for w, _ in res["weights"]] == list(range(1, 32))
    res = tensor_decomp_check(1, 1, 10)
    assert res["weights"] == [(Fraction(k), 1) for k in range(2, 13)]
    res = tensor_decomp_check(Fraction(3, 2), Fraction(3, 2), 0)
    assert res["holds"] and res["lhs"] == [1] and res["weights"] == [(Fraction(3), 1)]


@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 20))
def test_tensor_identity_property(s2, t2, N):
    assert tensor_decomp_check(Fraction(s2, 2), Fraction(t2, 2), N)["holds"]


def test_character_series_decompose():
    ch = CharacterSeries.of_discrete_series(3, 5)
    assert decompose(ch) == [(Fraction(3, 2), 1)]
