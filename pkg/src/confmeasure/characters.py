"""Characters of the discrete-series spaces H^s and multiplicity bookkeeping.

The character of H^s is q^s / (1 - q).  Weights may be half-integers, so
every q-expansion here keeps the exponent doubled: a ``CharacterSeries``
with ``offset2 = 2 s`` and integer coefficients a_k stands for
sum_k a_k q^(s + k).  Everything is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        if any(p <= 0 for p in self.parts) or list(self.parts) != sorted(self.parts, reverse=True):
            raise ValueError("parts must be positive and weakly decreasing")

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def multiplicity(self, k: int) -> int:
        return self.parts.count(k)


def partitions(N: int, max_part: int | None = None):
    """All partitions of N, largest part first."""
    max_part = N if max_part is None else max_part
    if N == 0:
        yield Partition(())
        return
    for first in range(min(N, max_part), 0, -1):
        for rest in partitions(N - first, first):
            yield Partition((first,) + rest.parts)


@lru_cache(maxsize=None)
def _table(Nmax: int, min_part: int) -> tuple[tuple[int, ...], ...]:
    # t[N][n] = #partitions of N into exactly n parts, all parts >= min_part
    t = [[0] * (Nmax + 1) for _ in range(Nmax + 1)]
    t[0][0] = 1
    for part in range(min_part, Nmax + 1):
        for N in range(part, Nmax + 1):
            for n in range(1, N + 1):
                t[N][n] += t[N - part][n - 1]
    return tuple(tuple(row) for row in t)


def count_partitions_length(N: int, n: int, min_part: int = 1) -> int:
    """p_n(N): partitions of N with exactly n parts (each part >= min_part)."""
    if N < 0 or n < 0:
        return 0
    if n > N:
        return int(N == 0 and n == 0)
    return _table(N, min_part)[N][n]


def count_partitions(N: int) -> int:
    return sum(count_partitions_length(N, n) for n in range(N + 1))


def sym_power_multiplicities(n: int, Nmax: int, source: int = 1) -> list[int]:
    """Multiplicity of H^N in S^n(H^source) for N = 0 .. Nmax (source 1 or 2).

    The character of S^n(H^1) is q^n / ((1-q)..(1-q^n)) = sum_N p_n(N) q^N,
    so peeling one factor 1/(1-q) leaves p_n(N) - p_n(N-1).  For H^2 the
    character is q^(2n) / ((1-q)..(1-q^n)), which counts partitions with n
    parts all >= 2, and the same difference applies.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if source not in (1, 2):
        raise ValueError("source must be 1 or 2")
    return [count_partitions_length(N, n, source) - count_partitions_length(N - 1, n, source) for N in range(Nmax + 1)]


def equal_top_parts(N: int, n: int) -> int:
    """#{partitions of N into n parts whose two largest parts are equal} (n >= 2).

    Adding 1 to the largest part embeds the n-part partitions of N - 1 into
    those of N with a strictly largest part, so this count is p_n(N) - p_n(N-1).
    """
    return sum(1 for lam in partitions(N) if lam.length == n and lam.parts[0] == lam.parts[1])


@dataclass
class CharacterSeries:
    """sum_k coeffs[k] q^(offset2/2 + k)."""

    offset2: int
    coeffs: list[int] = field(default_factory=list)

    @classmethod
    def of_discrete_series(cls, s2: int, order: int) -> "CharacterSeries":
        """q^s / (1 - q) with s = s2 / 2, to ``order`` terms past the leading one."""
        return cls(s2, [1] * (order + 1))

    def __mul__(self, other: "CharacterSeries") -> "CharacterSeries":
        n = min(len(self.coeffs), len(other.coeffs))
        out = [0] * n
        for i in range(n):
            for j in range(n - i):
                out[i + j] += self.coeffs[i] * other.coeffs[j]
        return CharacterSeries(self.offset2 + other.offset2, out)

    def times_one_minus_q(self) -> "CharacterSeries":
        c = self.coeffs
        return CharacterSeries(self.offset2, [c[0]] + [c[k] - c[k - 1] for k in range(1, len(c))])

    def weights(self) -> list[tuple[Fraction, int]]:
        """(exponent, coefficient) for the nonzero terms."""
        return [(Fraction(self.offset2 + 2 * k, 2), a) for k, a in enumerate(self.coeffs) if a]


def decompose(char: CharacterSeries) -> list[tuple[Fraction, int]]:
    """Lowest weights and multiplicities: char = sum mult * q^w / (1 - q)."""
    return char.times_one_minus_q().weights()


def wedge_character(n: int, order: int) -> CharacterSeries:
    """Character of the n-th exterior power of H^(1/2).

    H^(1/2) has weights 1/2, 3/2, ...; the n-th exterior power is the
    coefficient of t^n in prod_j (1 + t q^(j + 1/2)), which is
    q^(n^2/2) / ((1-q)..(1-q^n)).  Computed here from the product.
    """
    lead = n * (n - 1) // 2  # t^n first appears at q^(n/2 + lead)
    M = order + lead
    # e[k][m] = coefficient of t^k q^(k/2 + m) after the factors so far
    e = [[0] * (M + 1) for _ in range(n + 1)]
    e[0][0] = 1
    for j in range(M + 1):
        for k in range(n, 0, -1):
            for m in range(M, j - 1, -1):
                e[k][m] += e[k - 1][m - j]
    return CharacterSeries(n * n, e[n][lead:])


def wedge_halfform_weights(n: int, Kmax) -> list[tuple[Fraction, int]]:
    """Lowest weights (with multiplicity) of the n-th exterior power of H^(1/2), up to Kmax."""
    order = (int(2 * Fraction(Kmax)) - n * n) // 2
    if order < 0:
        return []
    return decompose(wedge_character(n, order))


def stated_wedge_weights(n: int, Kmax: int) -> list[Fraction]:
    """The arithmetic progression n^2/2 + k n, k >= 0, up to Kmax."""
    out = []
    k = 0
    while Fraction(n * n, 2) + k * n <= Kmax:
        out.append(Fraction(n * n, 2) + k * n)
        k += 1
    return out


def tensor_decomp_check(s, t, Nmax: int) -> dict:
    """Compare q^s/(1-q) * q^t/(1-q) with sum_{k>=0} q^(s+t+k)/(1-q) through order Nmax."""
    s2, t2 = int(2 * Fraction(s)), int(2 * Fraction(t))
    if Fraction(s2, 2) != Fraction(s) or Fraction(t2, 2) != Fraction(t):
        raise ValueError("weights must be integers or half-integers")
    lhs = CharacterSeries.of_discrete_series(s2, Nmax) * CharacterSeries.of_discrete_series(t2, Nmax)
    rhs = CharacterSeries(s2 + t2, [k + 1 for k in range(Nmax + 1)])
    weights = decompose(lhs)
    return {"holds": lhs.coeffs == rhs.coeffs and lhs.offset2 == rhs.offset2, "lhs": lhs.coeffs, "weights": weights}
