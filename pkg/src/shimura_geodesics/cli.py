"""Command-line entry point.

    shimura-geodesics verify  CONFIG
    shimura-geodesics coeffs  CONFIG [--n-max N] [--method theta|oracle|both] [--format tsv|json]
    shimura-geodesics hilbert CONFIG [--trace-max N] [--format tsv|json]
    shimura-geodesics selftest [--tol TOL]

CONFIG is a path to a JSON config or the name of a bundled one
(disc14, disc15, disc6_level5, disc6).

Exit codes: 0 ok, 1 invalid config, 2 the two methods disagree,
3 numeric self-test failure, 4 precision exhausted.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from fractions import Fraction
from typing import List, Optional

from .config import ConfigError, load_config
from .exact import PrecisionExhausted
from .series import hilbert_coeffs, report

EXIT_OK, EXIT_CONFIG, EXIT_MISMATCH, EXIT_SELFTEST, EXIT_PRECISION = 0, 1, 2, 3, 4


def _frac(q: Fraction) -> str:
    return str(Fraction(q))


def _bool(b: bool) -> str:
    return "true" if b else "false"


def _na(v: Optional[int]) -> str:
    return "NA" if v is None else str(v)


def cmd_verify(config: str, out=None) -> int:
    out = out or sys.stdout
    try:
        cfg = load_config(config)
        cfg.build()
    except ConfigError as exc:
        for c in getattr(locals().get("cfg"), "checks", []):
            print(f"{'ok  ' if c.ok else 'FAIL'} {c.name}{': ' + c.detail if c.detail else ''}", file=out)
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"config {cfg.name} ({cfg.config_hash()[:12]})", file=out)
    for c in cfg.checks:
        print(f"ok   {c.name}{': ' + c.detail if c.detail else ''}", file=out)
    return EXIT_OK


def cmd_coeffs(config: str, n_max: Optional[int] = None, method: str = "both", fmt: str = "tsv", out=None) -> int:
    out = out or sys.stdout
    try:
        cfg = load_config(config)
        ctx = cfg.build()
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if n_max is None:
        n_max = cfg.n_max
    methods = ("theta", "oracle") if method == "both" else (method,)
    table = report(ctx, n_max, methods)
    rows = table.rows()
    if fmt == "json":
        doc = {
            "config_hash": cfg.config_hash(),
            "calibration_sign": table.calibration_sign,
            "rows": [
                {
                    "n": r.n,
                    "a_theta": r.a_n_theta,
                    "a_oracle": r.a_n_oracle,
                    "match": r.match,
                    "coprime": r.coprime_to_level,
                }
                for r in rows
            ],
        }
        out.write(json.dumps(doc, indent=1) + "\n")
    else:
        out.write("n\ta_theta\ta_oracle\tmatch\tcoprime\n")
        for r in rows:
            out.write(
                f"{r.n}\t{_na(r.a_n_theta)}\t{_na(r.a_n_oracle)}\t{_bool(r.match)}\t{_bool(r.coprime_to_level)}\n"
            )
    if method == "both" and table.mismatch:
        print(f"mismatch at n = {table.mismatches}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def format_beta(beta) -> str:
    u, v = beta.a, beta.b
    sign = "-" if v < 0 else "+"
    return f"{_frac(u)} {sign} {_frac(abs(v))}√{beta.D}"


def cmd_hilbert(config: str, trace_max: Optional[int] = None, fmt: str = "tsv", out=None) -> int:
    out = out or sys.stdout
    try:
        cfg = load_config(config)
        ctx = cfg.build()
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if trace_max is None:
        trace_max = cfg.n_max
    coeffs = hilbert_coeffs(trace_max, ctx) if trace_max >= 1 else {}
    if fmt == "json":
        doc = {
            "config_hash": cfg.config_hash(),
            "D": ctx.D,
            "rows": [
                {"trace": _frac(b.trace()), "u": _frac(b.a), "v": _frac(b.b), "c": c} for b, c in coeffs.items()
            ],
        }
        out.write(json.dumps(doc, indent=1) + "\n")
    else:
        out.write("trace\tbeta\tc\n")
        for b, c in coeffs.items():
            out.write(f"{_frac(b.trace())}\t{format_beta(b)}\t{c}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# self-test


def _selftest_checks(tol: float):
    from . import archimedean as A
    from .exact import QuadElem, fundamental_unit, is_squarefree, radical_sign
    from .quaternion import QuatAlgebra, hilbert_symbol, ramified_primes

    grid = [-2, -1, -0.5, 0.25, 0.5, 1, 2]
    worst = max(abs(A.I_quadrature(x, y, tol) - A.I_closed(x, y)) for x in grid for y in grid)
    yield "orbital integral: quadrature vs closed form", worst < tol, f"max error {worst:.2e}"

    rng = random.Random(1)
    ok = True
    for _ in range(50):
        x, y, t, lam = rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.2, 3), rng.uniform(0.2, 3)
        ok &= math.isclose(A.km_coeff(x, y, lam * t), A.km_coeff(x / lam, lam * y, t), rel_tol=1e-12, abs_tol=1e-15)
        ok &= math.isclose(A.km_coeff(x, y, 1.0), A.phi_inf(x, y), rel_tol=1e-12, abs_tol=1e-15)
    yield "Kudla-Millson coefficient identities", ok, ""

    bad = []
    for D in range(2, 100):
        if not is_squarefree(D):
            continue
        u = fundamental_unit(D)
        k = 4 if D % 4 == 1 else 1
        den = 2 if D % 4 == 1 else 1
        for y in range(1, 10**6):
            x2 = [D * y * y + s for s in (-k, k)]
            hit = [math.isqrt(v) for v in x2 if v >= 0 and math.isqrt(v) ** 2 == v]
            if hit:
                if u != QuadElem(Fraction(hit[0], den), Fraction(y, den), D):
                    bad.append(D)
                break
    yield "fundamental units vs brute-force Pell search (D < 100)", not bad, f"failures {bad}" if bad else ""

    ok = True
    for _ in range(40):
        a, b = rng.choice([-1, 1]) * rng.randint(1, 60), rng.choice([-1, 1]) * rng.randint(1, 60)
        places = ramified_primes(a, b)
        ok &= len(places) % 2 == 0
        ok &= (math.inf in places) == (a < 0 and b < 0)
        ok &= all(hilbert_symbol(a, b, p) == hilbert_symbol(b, a, p) for p in (2, 3, 5, 7))
    yield "Hilbert symbols: product formula and symmetry", ok, ""

    ok = True
    for _ in range(200):
        terms = {m: Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for m in rng.sample([1, 2, 3, 5, 6, 7, 10, 15], 3)}
        val = sum(float(c) * math.sqrt(m) for m, c in terms.items())
        if abs(val) > 1e-6:
            ok &= radical_sign(terms) == (1 if val > 0 else -1)
    yield "exact radical signs vs floating point", ok, ""


def cmd_selftest(tol: float = 1e-9, out=None) -> int:
    out = out or sys.stdout
    from .archimedean import ToleranceNotAchieved

    failed = False
    try:
        for name, ok, detail in _selftest_checks(tol):
            failed |= not ok
            print(f"{'ok  ' if ok else 'FAIL'} {name}{'  (' + detail + ')' if detail else ''}", file=out)
    except ToleranceNotAchieved as exc:
        print(f"FAIL tolerance not achieved: {exc}", file=out)
        return EXIT_SELFTEST
    return EXIT_SELFTEST if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="shimura-geodesics", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="check every invariant of a config")
    v.add_argument("config")
    c = sub.add_parser("coeffs", help="coefficients a_n by the theta formula and/or the geodesic oracle")
    c.add_argument("config")
    c.add_argument("--n-max", type=int, default=None)
    c.add_argument("--method", choices=("theta", "oracle", "both"), default="both")
    c.add_argument("--format", choices=("tsv", "json"), default="tsv")
    h = sub.add_parser("hilbert", help="Hilbert coefficients c(beta) for Tr(beta) <= trace-max")
    h.add_argument("config")
    h.add_argument("--trace-max", type=int, default=None)
    h.add_argument("--format", choices=("tsv", "json"), default="tsv")
    s = sub.add_parser("selftest", help="numeric and arithmetic self-checks")
    s.add_argument("--tol", type=float, default=1e-9)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args.config)
        if args.command == "coeffs":
            return cmd_coeffs(args.config, args.n_max, args.method, args.format)
        if args.command == "hilbert":
            return cmd_hilbert(args.config, args.trace_max, args.format)
        return cmd_selftest(args.tol)
    except PrecisionExhausted as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
