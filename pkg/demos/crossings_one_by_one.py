"""Orbit by orbit: does the sign varsigma(b) predict the crossing?

The two methods are only guaranteed to agree in total.  Here we look at each
orbit of norm n separately, print where the translated geodesic ends up, and
compare the algebraic sign with the crossing sign.  We also scan a small box
of elements whose q_F is *not* totally positive and check that none of them
produces a crossing.

    python3 demos/crossings_one_by_one.py [config] [n]
"""

import sys

from shimura_geodesics import load_context
from shimura_geodesics.geodesics import _axes, mobius_image, split_matrix, termwise_compare
from shimura_geodesics.series import report

name = sys.argv[1] if len(sys.argv) > 1 else "disc6_level5"
n = int(sys.argv[2]) if len(sys.argv) > 2 else 7

ctx = load_context(name)
sign = report(ctx, n).calibration_sign
A1, A2 = _axes(ctx)
print(f"{name}: axis 1 runs from {A1.p_rep.value():.6f} to {A1.p_att.value():.6f}")
print(f"{name}: axis 2 runs from {A2.p_rep.value():.6f} to {A2.p_att.value():.6f}")
print()

rep = termwise_compare(n, ctx, calibration_sign=sign, scan_radius=3)
for row in rep.rows:
    G = mobius_image(split_matrix(row.b), A2)
    print(f"b = {row.b!r}")
    print(f"    b . axis 2 = ({G.p_rep.value():+.6f}, {G.p_att.value():+.6f})"
          f"   varsigma {row.varsigma:+d}   crossing {row.crossing:+d}")
print()
print(f"agreement after calibration ({sign:+d}): {rep.agreement_rate:.0%}; totals {rep.totals}")
print(f"scanned {rep.scanned} elements of norm {n} with q_F not totally positive: "
      f"{len(rep.nonpositive_crossings)} crossings")
