"""The elliptic generating series a_n and its Hilbert-modular refinement c(beta).

``a_n`` is computed two ways:

* ``theta``  -- sum of varsigma(b) over the orbit representatives of norm n;
* ``oracle`` -- signed crossing count of geodesic axes (see ``geodesics``).

The two agree up to one global sign per configuration, fixed at the first
nonzero coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .exact import QuadElem, totally_positive
from .fform import FFormContext
from .geodesics import crossing_of
from .orbits import enumerate_orbits, enumerator

METHODS = ("theta", "oracle")


def _as_positive_int(n) -> Optional[int]:
    """``n`` as a positive int, or None when the coefficient is zero by definition."""
    try:
        q = Fraction(n)
    except (TypeError, ValueError):
        return None
    if q.denominator != 1 or q <= 0:
        return None
    return int(q)


def elliptic_coeff(n, ctx: FFormContext) -> int:
    """a_n = sum of varsigma(b) over orbit representatives with nrd(b) = n.

    Zero for n <= 0 and for non-integral n.
    """
    m = _as_positive_int(n)
    if m is None:
        return 0
    total = sum(ctx.varsigma(rep.b) for rep in enumerate_orbits(m, ctx))
    assert isinstance(total, int)
    return total


def oracle_coeffs(n_max: int, ctx: FFormContext) -> Dict[int, int]:
    enumerator(ctx).orbits_up_to(n_max)
    return {n: sum(crossing_of(r.b, ctx) for r in enumerate_orbits(n, ctx)) for n in range(1, n_max + 1)}


def theta_coeffs(n_max: int, ctx: FFormContext) -> Dict[int, int]:
    enumerator(ctx).orbits_up_to(n_max)
    return {n: elliptic_coeff(n, ctx) for n in range(1, n_max + 1)}


def hilbert_coeffs(trace_bound: int, ctx: FFormContext) -> Dict[QuadElem, int]:
    """c(beta) = sum of varsigma(b) over orbits with q_F(b) = beta, Tr(beta) <= trace_bound.

    Only beta attained by some orbit are listed (every other c(beta) is 0).
    """
    if trace_bound < 1:
        raise ValueError("trace_bound must be >= 1")
    out: Dict[QuadElem, int] = {}
    for n, reps in enumerator(ctx).orbits_up_to(int(trace_bound)).items():
        for rep in reps:
            beta = ctx.q_F(rep.b)
            assert totally_positive(beta) and beta.trace() == n
            out[beta] = out.get(beta, 0) + ctx.varsigma(rep.b)
    return dict(sorted(out.items(), key=lambda kv: (kv[0].trace(), kv[0].b)))


def diagonal_restriction(hilbert: Dict[QuadElem, int]) -> Dict[int, int]:
    """Group c(beta) by Tr(beta)."""
    out: Dict[int, int] = {}
    for beta, c in hilbert.items():
        t = beta.trace()
        assert t.denominator == 1
        out[int(t)] = out.get(int(t), 0) + c
    return out


def calibrate(theta: Dict[int, int], oracle: Dict[int, int]) -> int:
    """Sign relating the two methods, read off at the first n where either is nonzero.

    +1 when both series vanish identically, or when only one side is nonzero
    there (that row then shows up as a mismatch).
    """
    for n in sorted(set(theta) | set(oracle)):
        t, o = theta.get(n, 0), oracle.get(n, 0)
        if t or o:
            return 1 if (t * o >= 0) else -1
    return 1


@dataclass
class CoeffRow:
    n: int
    a_n_theta: Optional[int]
    a_n_oracle: Optional[int]
    match: bool
    coprime_to_level: bool


@dataclass
class CoeffTable:
    n_max: int
    level: int
    discriminant: int
    elliptic: Dict[str, Dict[int, int]] = field(default_factory=dict)
    hilbert: Dict[QuadElem, int] = field(default_factory=dict)
    calibration_sign: int = 1

    def coprime(self, n: int) -> bool:
        return math.gcd(n, self.level * self.discriminant) == 1

    def match(self, n: int) -> bool:
        th, orc = self.elliptic.get("theta"), self.elliptic.get("oracle")
        if th is None or orc is None:
            return True
        return th[n] == self.calibration_sign * orc[n]

    @property
    def mismatches(self) -> List[int]:
        return [n for n in range(1, self.n_max + 1) if not self.match(n)]

    @property
    def mismatch(self) -> bool:
        return bool(self.mismatches)

    def rows(self) -> List[CoeffRow]:
        th, orc = self.elliptic.get("theta", {}), self.elliptic.get("oracle", {})
        return [
            CoeffRow(n, th.get(n), orc.get(n), self.match(n), self.coprime(n)) for n in range(1, self.n_max + 1)
        ]


def report(
    ctx: FFormContext, n_max: int, methods: Sequence[str] = METHODS, with_hilbert: bool = False
) -> CoeffTable:
    """Run the requested methods for 1 <= n <= n_max and calibrate."""
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}")
    table = CoeffTable(n_max, ctx.level, ctx.algebra.discriminant())
    if n_max < 1:
        return table
    if "theta" in methods:
        table.elliptic["theta"] = theta_coeffs(n_max, ctx)
    if "oracle" in methods:
        table.elliptic["oracle"] = oracle_coeffs(n_max, ctx)
    if len(table.elliptic) == 2:
        table.calibration_sign = calibrate(table.elliptic["theta"], table.elliptic["oracle"])
    if with_hilbert:
        table.hilbert = hilbert_coeffs(n_max, ctx)
    return table
