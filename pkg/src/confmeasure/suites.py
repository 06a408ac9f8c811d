"""Verification suites: each returns a list of named checks.

A check records what was expected, what was observed, the tolerance and
whether it passed.  Suites are deterministic given an ``RNGStream``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import characters, hankel, loop, measures, schwarzian
from .series import MatrixSeries, PowerSeries, compositions, deriv, series_compose, series_mul
from .streams import RNGStream


@dataclass
class Check:
    name: str
    expected: object
    observed: object
    tolerance: object
    passed: bool

    def to_json(self) -> dict:
        d = asdict(self)
        d["pass"] = bool(d.pop("passed"))
        for k in ("expected", "observed", "tolerance"):
            d[k] = _jsonable(d[k])
        return d


def _jsonable(v):
    if isinstance(v, (bool, str, int)) or v is None:
        return v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return str(v)


def _close(name, expected, observed, tol, relative=False) -> Check:
    err = abs(observed - expected)
    if relative:
        err /= abs(expected)
    return Check(name, expected, observed, tol, bool(err <= tol))


# ---------------------------------------------------------------------------


PARTITION_CASES = [(1, 2.0), (2, 2.5), (3, 3.0)]


def suite_partition(stream: RNGStream, threads: int = 1, N=None, p=None, samples=None) -> list[Check]:
    """Importance-sampling partition integrals against the closed form (4 standard errors)."""
    cases = PARTITION_CASES if N is None and p is None else [(N or 3, p or 3.0)]
    samples = samples or 1_000_000
    out = []
    for idx, (n, pp) in enumerate(cases):
        exact = hankel.partition_closed_form(pp, n)
        est = hankel.partition_mc(hankel.PartitionMCConfig(N=n, p=pp, samples=samples), stream.child(idx), threads)
        z = abs(est.zscore(exact))
        out.append(Check(f"partition N={n} p={pp}", exact, est.estimate, "4 stderr", bool(z < 4)))
    for n in range(1, 13):
        for pp in (2.3, 3.7):
            rec = hankel.partition_recursion(pp, n)
            out.append(_close(f"recursion N={n} p={pp}", hankel.partition_closed_form(pp, n), rec, 1e-13, True))
    return out


def suite_gaussian(stream: RNGStream, threads: int = 1, samples=None) -> list[Check]:
    samples = samples or 100_000
    g = stream.child(0).generator()
    out = []
    for k in range(5):
        F = 0.4 * (g.normal(size=6) + 1j * g.normal(size=6))
        spec = measures.GaussianSpec(1.0, 1.0)
        est = measures.ft_estimate(spec, F, samples, stream.child(1, k))
        exact = measures.ft_closed_form(spec, F)
        dev = est.deviation(exact)
        out.append(Check(f"gaussian FT #{k}", exact.real, est.value, "4 stderr", bool(dev < 4)))
    return out


def suite_product_ft(stream: RNGStream, threads: int = 1, samples=None) -> list[Check]:
    samples = samples or 100_000
    g = stream.child(0).generator()
    out = []
    for k, (m, n, S, T) in enumerate([(1.0, 1.0, 1.0, 1.0), (0.5, 0.5, 0.7, 1.3), (1.5, 0.5, 1.0, 0.8)]):
        F = 0.5 * (g.normal(size=9) + 1j * g.normal(size=9))  # truncation 8
        spec = measures.ProductSpec(measures.GaussianSpec(m, S), measures.GaussianSpec(n, T))
        est = measures.ft_estimate(spec, F, samples, stream.child(1, k))
        exact = measures.ft_closed_form(spec, F)
        out.append(Check(f"product FT m={m} n={n}", exact.real, est.value, "4 stderr", bool(est.deviation(exact) < 4)))
    return out


def suite_quotient(stream: RNGStream, threads: int = 1, samples=None) -> list[Check]:
    samples = samples or 100_000
    out = []
    for m in (1, 2):
        res = measures.quotient_onepoint_stat(
            measures.GaussianSpec(m, 1.0), measures.GaussianSpec(m - 1, 1.0), samples, stream.child(m)
        )
        out.append(Check(f"quotient one-point KS m={m}", 0.0, res.statistic, res.threshold, res.passed))
    return out


def _rational_theta(stream: RNGStream, order: int, d: int) -> MatrixSeries:
    g = stream.generator()
    arr = np.empty((order + 1, d, d), dtype=object)
    arr[0] = Fraction(0)
    for k in range(1, order + 1):
        num = g.integers(-5, 6, size=(d, d))
        den = g.integers(1, 5, size=(d, d))
        arr[k] = np.vectorize(lambda a, b: Fraction(int(a), int(b)), otypes=[object])(num, den)
    return MatrixSeries(arr, exact=True)


def suite_loop_w(stream: RNGStream, threads: int = 1) -> list[Check]:
    out = []
    mismatched = 0
    total = 0
    for rep in range(2):
        theta = _rational_theta(stream.child(rep), 6, 2)
        W = loop.w_oracle_from_theta(theta, 6)
        for i in range(6):
            for j in range(1, 7 - i):
                total += 1
                mismatched += int(not np.all(loop.w_entries_combinatorial(theta, i, j) == W[i, j - 1]))
    out.append(Check("W combinatorial == oracle (i+j<=6, d=2)", 0, mismatched, 0, mismatched == 0))
    bad = sum(1 for n in range(1, 13) for I in compositions(n) if loop.c_coeff(I) != loop.c_coeff_subset(I))
    out.append(Check("c(I) two formulas through order 12", 0, bad, 0, bad == 0))
    return out


def suite_abelian(stream: RNGStream, threads: int = 1, K=None) -> list[Check]:
    K = K or 400
    out = []
    for deg in range(1, 5):
        x = [Fraction(0)] + [Fraction((-1) ** k * (k + 2), k + 3) for k in range(deg)]
        W, H = loop.nilpotent_reduce(x, 6)
        ok = bool(np.all(W[0::2, 1::2] == H) and np.all(W[1::2, :] == 0) and np.all(W[:, 0::2] == 0))
        out.append(Check(f"nilpotent pattern deg={deg}", True, ok, "exact", ok))
    g = stream.generator()
    for rep in range(3):
        c = g.uniform(0, 0.2, 3) * np.exp(2j * np.pi * g.uniform(size=3))
        det, closed = loop.abelian_det_check([0, *c], K)
        out.append(_close(f"abelian det #{rep} K={K}", closed, det, 1e-4, True))
    return out


def suite_schwarzian(stream: RNGStream, threads: int = 1) -> list[Check]:
    out = []
    worst = 0.0
    for c in (0.3, 0.9, -0.9j, 0.5 + 0.5j):
        u = PowerSeries([0] + [c ** (k - 1) for k in range(1, 41)])
        worst = max(worst, float(np.abs(schwarzian.schwarzian(u).coeffs.c).max()))
    out.append(Check("S(Moebius) = 0", 0.0, worst, 1e-12, worst < 1e-12))
    res = cocycle_residual(stream.child(0))
    out.append(Check("cocycle residual", 0.0, res, 1e-10, res < 1e-10))
    ok = True
    g = stream.child(1).generator()
    for _ in range(5):
        vals = {n: Fraction(int(g.integers(-9, 10)), int(g.integers(1, 7))) for n in range(2, 9)}
        Q = schwarzian.QuadDifferential.from_values(vals, 8)
        ok &= schwarzian.schwarzian(schwarzian.invert_schwarzian(Q)).coeffs.equals(Q.coeffs)
    out.append(Check("inversion roundtrip through order 8", True, bool(ok), "exact", bool(ok)))
    Q = schwarzian.QuadDifferential.from_values({2: Fraction(5, 3), 3: Fraction(-7, 2)}, 3)
    u = schwarzian.invert_schwarzian(Q)
    out.append(Check("u2 = Q2/6", Q.Q(2) / 6, u.coeffs[1], "exact", u.coeffs[1] == Q.Q(2) / 6))
    out.append(Check("u3 = Q3/24", Q.Q(3) / 24, u.coeffs[2], "exact", u.coeffs[2] == Q.Q(3) / 24))
    out.extend(w_display_checks(stream.child(2)))
    return out


def cocycle_residual(stream: RNGStream, n: int = 8, pairs: int = 5) -> float:
    """max |S(f o g) - S(f) o g g'^2 - S(g)| over valid coefficients of random pairs."""
    g = stream.generator()
    worst = 0.0
    for _ in range(pairs):
        cf, cg = (0.3 * (g.normal(size=n) + 1j * g.normal(size=n)) / np.arange(1, n + 1) for _ in range(2))
        f = schwarzian.UnivalentSeries(tuple(cf)).series()
        h = schwarzian.UnivalentSeries(tuple(cg)).series()
        Sf, Sh = schwarzian.schwarzian(f).coeffs, schwarzian.schwarzian(h).coeffs
        Sfh = schwarzian.schwarzian(series_compose(f, h)).coeffs
        dh = deriv(h)
        rhs = series_mul(series_compose(Sf, h.truncate(Sf.order)), series_mul(dh, dh).truncate(Sf.order)) + Sh
        top = f.order - 3
        worst = max(worst, float(np.abs(Sfh.c[: top + 1] - rhs.c[: top + 1]).max()))
    return worst


def w_display_checks(stream: RNGStream) -> list[Check]:
    """Linear terms of W(u) against the printed display, and refit stability of c, c', c'', d."""
    g1, g2 = stream.child(0).generator(), stream.child(1).generator()
    f1 = schwarzian.fit_w_constants(schwarzian.random_q_samples(g1, 10))
    f2 = schwarzian.fit_w_constants(schwarzian.random_q_samples(g2, 10))
    out = []
    for (i, j), printed, got, ok in schwarzian.compare_with_display(f1):
        out.append(Check(f"W({i},-{j}) linear coefficient vs display", float(printed), got, 1e-10, ok))
    for name in schwarzian.DISPLAY_CONSTANTS:
        a, b = f1[name].quadratic, f2[name].quadratic
        out.append(Check(f"constant {name} refit stability", a, b, 1e-8, abs(a - b) <= 1e-8 and f1[name].consistent))
    return out


def suite_characters(stream: RNGStream | None = None, threads: int = 1) -> list[Check]:
    s3 = characters.sym_power_multiplicities(3, 12)
    expected = [0, 0, 0, 1, 0, 1, 1, 1, 1, 2, 1, 2, 2]
    out = [Check("S^3(H^1) multiplicities N<=12", expected, s3, "exact", s3 == expected)]
    wedge = {int(w): m for w, m in characters.wedge_halfform_weights(2, 40)}
    sym = characters.sym_power_multiplicities(2, 40)
    wl = [wedge.get(N, 0) for N in range(41)]
    out.append(Check("S^2(H^1) = wedge^2(H^1/2) through N=40", sym, wl, "exact", wl == sym))
    res = characters.tensor_decomp_check(Fraction(1, 2), Fraction(1, 2), 30)
    out.append(Check("H^1/2 tensor H^1/2 character identity", True, res["holds"], "exact", res["holds"]))
    return out


SUITES: dict[str, tuple[Callable, frozenset]] = {
    "partition": (suite_partition, frozenset({"N", "p", "samples"})),
    "gaussian": (suite_gaussian, frozenset({"samples"})),
    "product-ft": (suite_product_ft, frozenset({"samples"})),
    "quotient": (suite_quotient, frozenset({"samples"})),
    "loop-w": (suite_loop_w, frozenset()),
    "abelian": (suite_abelian, frozenset({"K"})),
    "schwarzian": (suite_schwarzian, frozenset()),
    "characters": (suite_characters, frozenset()),
}


def run_suite(name: str, stream: RNGStream, threads: int = 1, **params) -> list[Check]:
    """Run one suite (or "all", each on its own child stream)."""
    if name == "all":
        out = []
        for idx, (key, (fn, allowed)) in enumerate(SUITES.items()):
            kw = {k: v for k, v in params.items() if k in allowed}
            for c in fn(stream.child(idx), threads, **kw):
                c.name = f"{key}: {c.name}"
                out.append(c)
        return out
    fn, allowed = SUITES[name]
    extra = set(params) - allowed
    if extra:
        raise ValueError(f"suite {name!r} does not take {sorted(extra)}")
    idx = list(SUITES).index(name)
    return fn(stream.child(idx), threads, **params)
