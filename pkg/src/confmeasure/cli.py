"""Command line entry point: ``confmeasure verify|sample|table``.

Exit status is 0 when every check passes, 1 when a check fails and 2 on
usage errors.  Reports are JSON (``report_version`` 1) or CSV.  Wall time
is left out of reports unless ``--timing`` is given, so a fixed seed gives
byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import characters, hankel, schwarzian
from .measures import DetHankelSpec, sample_batch
from .specgrammar import SpecError, format_spec, parse_spec
from .streams import DEFAULT_SEED, SEED_ENV, RNGStream, resolve_seed
from .suites import SUITES, run_suite

REPORT_VERSION = 1
TABLES = ("partition-function", "critical-exponents", "sym-power-mults", "wedge-weights", "w-constants")

class UsageError(Exception):
    pass

@dataclass
class RunConfig:
    command: str
    target: str
    params: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    seed_source: str = "default"
    out: str | None = None
    format: str = "json"
    threads: int = 1
    timing: bool = False

    def echo(self) -> dict:
        # threads are left out: results do not depend on them
        return {"name": self.command, "target": self.target, "params": self.params}

    def provenance(self, keys) -> dict:
        return {"seed": self.seed, "seed_source": self.seed_source, "generator": "numpy PCG64 via SeedSequence", "stream_keys": keys}

def _number_list(kind):
    def parse(text: str):
        try:
            vals = [kind(v) for v in text.split(",") if v]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad value {text!r}") from None
        return vals if len(vals) != 1 else vals[0]

    return parse

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="confmeasure", description="Invariant measures on spaces of holomorphic differentials.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help=f"RNG seed (default ${SEED_ENV}, else {DEFAULT_SEED})")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--timing", action="store_true", help="include wall time in the report")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=list(SUITES) + ["all"])
    v.add_argument("--N", type=int)
    v.add_argument("--p", type=float)
    v.add_argument("--samples", type=int)
    v.add_argument("--K", type=int)

    s = sub.add_parser("sample", parents=[common], help="draw coefficient rows from a measure spec")
    s.add_argument("spec")
    s.add_argument("--N", type=int, default=16, help="number of coefficients per row")
    s.add_argument("--count", type=int, default=None, help="number of rows (default 1000)")
    s.add_argument("--steps", type=int, default=None, help="post burn-in MCMC sweeps for dethankel specs")

    t = sub.add_parser("table", parents=[common], help="emit a closed-form or combinatorial table")
    t.add_argument("name", choices=TABLES)
    t.add_argument("--N", type=_number_list(int))
    t.add_argument("--p", type=_number_list(float))
    t.add_argument("--Nmax", type=int)
    t.add_argument("--n", type=int)
    t.add_argument("--source", type=int, choices=(1, 2))
    t.add_argument("--Kmax", type=float)
    t.add_argument("--samples", type=int)
    return ap

def _config(ns: argparse.Namespace) -> RunConfig:
    if ns.seed is not None:
        source = "flag"
    elif os.environ.get(SEED_ENV):
        source = "env"
    else:
        source = "default"
    target = {"verify": "suite", "sample": "spec", "table": "name"}[ns.command]
    skip = {"command", "seed", "out", "format", "threads", "timing", target}
    params = {k: v for k, v in vars(ns).items() if k not in skip and v is not None}
    if ns.threads < 1:
        raise UsageError("--threads must be positive")
    try:
        seed = resolve_seed(ns.seed)
    except ValueError:
        raise UsageError(f"${SEED_ENV} is not an integer") from None
    return RunConfig(ns.command, getattr(ns, target), params, seed, source, ns.out, ns.format, ns.threads, ns.timing)

def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()

def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"

# ---------------------------------------------------------------------------

def _suite_keys(target: str) -> dict:
    names = list(SUITES) if target == "all" else [target]
    return {n: [list(SUITES).index(n)] for n in names}

def run_verify(cfg: RunConfig) -> int:
    params = dict(cfg.params)
    if cfg.target != "all":
        allowed = SUITES[cfg.target][1]
        extra = set(params) - allowed
        if extra:
            raise UsageError(f"suite {cfg.target!r} does not take {sorted('--' + e for e in extra)}")
    t0 = time.perf_counter()
    checks = run_suite(cfg.target, RNGStream(cfg.seed), cfg.threads, **params)
    wall = time.perf_counter() - t0
    passed = all(c.passed for c in checks)
    if cfg.format == "json":
        report = {
            "report_version": REPORT_VERSION,
            "command": cfg.echo(),
            "rng": cfg.provenance(_suite_keys(cfg.target)),
            "checks": [c.to_json() for c in checks],
            "pass": passed,
            "wall_time": round(wall, 3) if cfg.timing else None,
        }
        _emit(_json(report), cfg)
    else:
        rows = [[c.name, json.dumps(d["expected"]), json.dumps(d["observed"]), json.dumps(d["tolerance"]), d["pass"]] for c, d in ((c, c.to_json()) for c in checks)]
        _emit(_csv(["name", "expected", "observed", "tolerance", "pass"], rows), cfg)
    if not cfg.timing:
        print(f"wall time {wall:.2f} s", file=sys.stderr)
    return 0 if passed else 1

def run_sample(cfg: RunConfig) -> int:
    try:
        spec = parse_spec(cfg.target)
    except SpecError as e:
        raise UsageError(f"malformed spec: {e}") from None
    N = cfg.params.get("N", 16)
    steps = cfg.params.get("steps")
    stream = RNGStream(cfg.seed)
    if N < 1:
        raise UsageError("--N must be positive")
    if isinstance(spec, DetHankelSpec):
        cfg_m = hankel.MCMCConfig(N=spec.N, l=spec.l)
        count = cfg.params.get("count") or (steps // cfg_m.thin if steps else 1000)
        res = hankel.mcmc_sample_det(hankel.MCMCConfig(N=spec.N, l=spec.l, samples=count), stream)
        data, ks = res.samples, list(range(1, spec.N + 1))
    else:
        if steps is not None:
            raise UsageError("--steps only applies to dethankel specs")
        count = cfg.params.get("count") or 1000
        data, ks = sample_batch(spec, N - 1, stream, count), list(range(N))
    header = [f"{part}_{k}" for k in ks for part in ("re", "im")]
    rows = [[float(v) for z in row for v in (z.real, z.imag)] for row in data]
    if cfg.format == "csv":
        _emit(_csv(header, rows), cfg)
    else:
        _emit(_json({"report_version": REPORT_VERSION, "command": cfg.echo(), "spec": format_spec(spec), "rng": cfg.provenance({"sample": []}), "columns": header, "rows": rows}), cfg)
    return 0

def _table(cfg: RunConfig) -> tuple[list[str], list[list]]:
    p = cfg.params
    name = cfg.target
    allowed = {
        "partition-function": {"N", "p"},
        "critical-exponents": {"Nmax"},
        "sym-power-mults": {"n", "Nmax", "source"},
        "wedge-weights": {"n", "Kmax"},
        "w-constants": {"samples"},
    }[name]
    extra = set(p) - allowed
    if extra:
        raise UsageError(f"table {name!r} does not take {sorted('--' + e for e in extra)}")
    if name == "partition-function":
        Ns = p.get("N", [1, 2, 3])
        ps = p.get("p", [2.0, 2.5, 3.0])
        Ns = Ns if isinstance(Ns, list) else [Ns]
        ps = ps if isinstance(ps, list) else [ps]
        rows = []
        for N in Ns:
            for pp in ps:
                finite = pp > hankel.critical_exponent(N)
                rows.append([N, float(pp), float(hankel.partition_closed_form(pp, N)) if finite else "inf"])
        return ["N", "p", "Z"], rows
    if name == "critical-exponents":
        return ["N", "p_N", "value"], [[N, str(hankel.critical_exponent(N)), float(hankel.critical_exponent(N))] for N in range(1, p.get("Nmax", 10) + 1)]
    if name == "sym-power-mults":
        n, Nmax = p.get("n", 2), p.get("Nmax", 20)
        mult = characters.sym_power_multiplicities(n, Nmax, p.get("source", 1))
        return ["N", "multiplicity"], [[N, m] for N, m in enumerate(mult)]
    if name == "wedge-weights":
        n, Kmax = p.get("n", 2), Fraction(p.get("Kmax", 20)).limit_denominator(2)
        return ["weight", "multiplicity"], [[str(w), m] for w, m in characters.wedge_halfform_weights(n, Kmax)]
    # w-constants
    g = RNGStream(cfg.seed).generator()
    fits = schwarzian.fit_w_constants(schwarzian.random_q_samples(g, p.get("samples", 10)))
    rows = []
    for key, fit in fits.items():
        i, j = fit.entry
        printed = schwarzian.DISPLAY_LINEAR[(i, j)]
        rows.append([key, i, j, fit.linear, float(printed), fit.quadratic if fit.quadratic is not None else "", fit.residual])
    return ["name", "i", "j", "linear", "display_linear", "Q2^2", "residual"], rows

def run_table(cfg: RunConfig) -> int:
    header, rows = _table(cfg)
    if cfg.format == "csv":
        _emit(_csv(header, rows), cfg)
    else:
        _emit(_json({"report_version": REPORT_VERSION, "command": cfg.echo(), "columns": header, "rows": rows}), cfg)
    return 0

def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = _config(ns)
        return {"verify": run_verify, "sample": run_sample, "table": run_table}[cfg.command](cfg)
    except UsageError as e:
        print(f"confmeasure: error: {e}", file=sys.stderr)
        return 2

if __name__ == "__main__":
    sys.exit(main())
