"""Two ways to get the same integers.

For a quaternion order with two optimal embeddings of real quadratic orders,
the signed number of times the first closed geodesic meets the n-th Hecke
translate of the second can be computed

  * algebraically: sum a sign varsigma(b) over orbits of elements of norm n
    whose F-valued norm q_F(b) is totally positive, or
  * geometrically: split the algebra into 2x2 matrices, take the axes of the
    two unit groups in the upper half-plane, and count signed crossings of
    the first axis with b applied to the second.

This script does both for a bundled configuration and prints them side by side.

    python3 demos/two_ways_to_count.py [config] [n_max]
"""

import sys

from shimura_geodesics import load_context
from shimura_geodesics.series import report

name = sys.argv[1] if len(sys.argv) > 1 else "disc14"
n_max = int(sys.argv[2]) if len(sys.argv) > 2 else 20

ctx = load_context(name)
print(f"config {name}: B = ({ctx.algebra.a}, {ctx.algebra.b} | Q), "
      f"D_B = {ctx.algebra.discriminant()}, level {ctx.level}")
print(f"embeddings of discriminant {ctx.D1} and {ctx.D2}; F = Q(sqrt {ctx.D}), alpha = q_F(1) = {ctx.alpha}")
print(f"totally positive units u1 = {ctx.u1}, u2 = {ctx.u2}")
print()

table = report(ctx, n_max)
print(f"calibration sign (read off at the first nonzero coefficient): {table.calibration_sign:+d}")
print(f"{'n':>3} {'theta':>6} {'crossings':>10}  match  gcd(n, N D_B) = 1")
for row in table.rows():
    print(f"{row.n:>3} {row.a_n_theta:>6} {row.a_n_oracle:>10}  {'yes' if row.match else 'NO':>5}  {row.coprime_to_level}")

print()
print("all rows agree" if not table.mismatch else f"disagreement at n = {table.mismatches}")
