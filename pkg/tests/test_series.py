import math
from fractions import Fraction

import pytest

from shimura_geodesics.exact import totally_positive
from shimura_geodesics.series import (
    CoeffTable,
    calibrate,
    diagonal_restriction,
    elliptic_coeff,
    hilbert_coeffs,
    oracle_coeffs,
    report,
    theta_coeffs,
)

from conftest import bundled, random_norm_one
from oracles import CURVES, ec_an


def test_zero_and_non_integral_coefficients(any_ctx):
    for n in (0, -1, Fraction(1, 2), 2.5, "x"):
        assert elliptic_coeff(n, any_ctx) == 0
    assert elliptic_coeff(3.0, any_ctx) == elliptic_coeff(3, any_ctx)


def test_genus_zero_series_vanishes():
    # maximal order in the discriminant-6 algebra: the curve has genus 0, no cusp forms
    assert set(theta_coeffs(30, bundled("disc6")).values()) == {0}


@pytest.mark.parametrize("name", sorted(CURVES))
def test_theta_series_is_an_elliptic_newform(name):
    """The diagonal restriction lands in S_2(D_B N), one-dimensional here: a multiple of
    the newform of an elliptic curve, whose a_p come from independent point counting."""
    ctx = bundled(name)
    theta = theta_coeffs(50, ctx)
    ainvs, conductor = CURVES[name]
    assert conductor == ctx.level * ctx.algebra.discriminant()
    an = ec_an(ainvs, conductor, 50)
    a1 = theta[1]
    assert a1 != 0
    assert all(theta[n] == a1 * an[n] for n in range(1, 51)), name


def test_hilbert_keys(ctx14):
    ctx = ctx14
    h = hilbert_coeffs(20, ctx)
    assert h
    for beta in h:
        assert totally_positive(beta)
        n = beta.trace()
        assert n.denominator == 1 and 1 <= n <= 20
        # beta = n/2 + v sqrt D with |v| < n / (2 sqrt D)
        assert beta.a == n / 2
        assert 4 * beta.b ** 2 * ctx.D < n ** 2
    keys = list(h)
    assert keys == sorted(keys, key=lambda b: (b.trace(), b.b))
    with pytest.raises(ValueError):
        hilbert_coeffs(0, ctx)


def test_diagonal_restriction(any_ctx):
    d = diagonal_restriction(hilbert_coeffs(30, any_ctx))
    theta = theta_coeffs(30, any_ctx)
    assert all(d.get(n, 0) == theta[n] for n in range(1, 31))


def test_calibrate():
    assert calibrate({}, {}) == 1
    assert calibrate({1: 0, 2: 0}, {1: 0, 2: 0}) == 1
    assert calibrate({1: 0, 2: 3}, {1: 0, 2: -3}) == -1
    assert calibrate({1: 2}, {1: 2}) == 1


def test_report_matches_and_flags():
    ctx = bundled("disc6_level5")
    t = report(ctx, 20)
    assert t.calibration_sign == -1 and not t.mismatch
    rows = t.rows()
    assert [r.n for r in rows] == list(range(1, 21))
    assert all(r.coprime_to_level == (math.gcd(r.n, 30) == 1) for r in rows)
    assert report(ctx, 0).rows() == []
    only = report(ctx, 5, methods=("theta",))
    assert all(r.a_n_oracle is None and r.match for r in only.rows())
    with pytest.raises(ValueError):
        report(ctx, 5, methods=("magic",))
    # a corrupted table is flagged
    bad = CoeffTable(3, 1, 6, {"theta": {1: 1, 2: 0, 3: 1}, "oracle": {1: 1, 2: 0, 3: 2}})
    assert bad.mismatches == [3]


def test_sign_convention_flips_theta_only():
    ctx = bundled("disc14")
    flipped = ctx.with_sign_convention(-1)
    a, b = theta_coeffs(20, ctx), theta_coeffs(20, flipped)
    assert all(b[n] == -a[n] for n in a)
    t1, t2 = report(ctx, 20), report(flipped, 20)
    assert t1.calibration_sign == -t2.calibration_sign
    assert not t1.mismatch and not t2.mismatch


def test_conjugation_invariance(rng):
    ctx = bundled("disc15")
    base = theta_coeffs(12, ctx)
    for _ in range(2):
        c = ctx.conjugated(random_norm_one(ctx, rng))
        assert theta_coeffs(12, c) == base
        assert oracle_coeffs(12, c) == oracle_coeffs(12, ctx)


def test_swap_negates_the_intersection_numbers():
    ctx = bundled("disc14")
    s = ctx.swapped()
    th, orc = theta_coeffs(15, ctx), oracle_coeffs(15, ctx)
    assert theta_coeffs(15, s) == th  # the theta side is symmetric; the swap shows up in the calibration sign
    assert oracle_coeffs(15, s) == {n: -v for n, v in orc.items()}
    assert report(s, 15).calibration_sign == -report(ctx, 15).calibration_sign
