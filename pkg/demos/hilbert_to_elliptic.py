"""From a Hilbert q-expansion to an elliptic one.

The theta coefficients are naturally indexed by totally positive beta in
F = Q(sqrt D): c(beta) collects the orbits with q_F(b) = beta.  Restricting to
the diagonal tau1 = tau2 groups them by the trace of beta.

For the genus-one bundled configurations the resulting series lives in a
one-dimensional space of weight-2 cusp forms, so it must be a multiple of the
newform of an elliptic curve.  We compare against a_p obtained by counting
points on the curve modulo p.

    python3 demos/hilbert_to_elliptic.py
"""

import math

from shimura_geodesics import load_context
from shimura_geodesics.cli import format_beta
from shimura_geodesics.series import diagonal_restriction, hilbert_coeffs

# Weierstrass coefficients [a1, a2, a3, a4, a6] of the curve with matching conductor
CURVES = {"disc14": [1, 0, 1, 4, -6], "disc15": [1, 1, 1, -10, -10], "disc6_level5": [1, 0, 1, 1, 2]}


def a_p(ainvs, p):
    a1, a2, a3, a4, a6 = ainvs
    points = sum(
        1
        for x in range(p)
        for y in range(p)
        if (y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6) % p == 0
    )
    return p - points


ctx = load_context("disc15")
h = hilbert_coeffs(6, ctx)
print(f"disc15: nonzero Hilbert coefficients c(beta) with Tr(beta) <= 6 (D = {ctx.D})")
for beta, c in h.items():
    if c:
        print(f"  beta = {format_beta(beta):<22} c = {c:+d}")
print("  grouped by trace:", diagonal_restriction(h))
print()

for name, ainvs in CURVES.items():
    ctx = load_context(name)
    series = diagonal_restriction(hilbert_coeffs(30, ctx))
    primes = [p for p in range(2, 31) if all(p % q for q in range(2, math.isqrt(p) + 1))]
    conductor = ctx.level * ctx.algebra.discriminant()
    print(f"{name} (conductor {conductor}), a_1 = {series.get(1, 0)}")
    print("   p   a_p(theta)/a_1   a_p(curve)")
    for p in primes:
        print(f"  {p:>2}   {series.get(p, 0) // series[1]:>14}   {a_p(ainvs, p):>10}")
    print()
