import cmath
import math
import random

import pytest

from shimura_geodesics.archimedean import (
    I_closed,
    I_quadrature,
    ToleranceNotAchieved,
    fourier_term,
    fourier_term_quadrature,
    integrate_log,
    iota_sigma,
    km_coeff,
    phi_inf,
)
from shimura_geodesics.orbits import enumerate_orbits
from shimura_geodesics.series import elliptic_coeff

from conftest import bundled, random_element

GRID = [-2, -1, -0.5, 0.25, 0.5, 1, 2]


def test_phi_inf():
    assert phi_inf(0, 0) == 0
    assert phi_inf(1, 0) == pytest.approx(math.exp(-math.pi), rel=1e-15)
    rng = random.Random(0)
    for _ in range(20):
        x, y = rng.uniform(-3, 3), rng.uniform(-3, 3)
        assert phi_inf(x, y) == phi_inf(y, x)


def test_closed_form_values():
    assert I_closed(1, 1) == pytest.approx(math.exp(-2 * math.pi), rel=1e-15)
    assert I_closed(1, -1) == 0
    assert I_closed(-2, -1) == pytest.approx(-math.exp(-4 * math.pi), rel=1e-15)
    assert I_closed(0, 3) == 0


def test_quadrature_against_closed_form_on_grid():
    for x in GRID:
        for y in GRID:
            assert abs(I_quadrature(x, y, 1e-9) - I_closed(x, y)) < 1e-9, (x, y)
    assert abs(I_quadrature(0.5, 2) - I_closed(0.5, 2)) < 1e-9


def test_quadrature_errors():
    with pytest.raises(ValueError):
        I_quadrature(1, 1, tol=0)
    with pytest.raises(ToleranceNotAchieved):
        I_quadrature(1, 1, tol=1e-30)
    # an integrand that has not decayed at the truncation point
    with pytest.raises(ToleranceNotAchieved):
        integrate_log(lambda s: 1.0, 1e-9)


def test_km_coeff_identities():
    rng = random.Random(1)
    for _ in range(100):
        x, y = rng.uniform(-2, 2), rng.uniform(-2, 2)
        t, lam = rng.uniform(0.1, 4), rng.uniform(0.1, 4)
        assert km_coeff(x, y, 1.0) == phi_inf(x, y)
        assert km_coeff(x, y, lam * t) == pytest.approx(km_coeff(x / lam, lam * y, t), rel=1e-12, abs=1e-300)
    with pytest.raises(ValueError):
        km_coeff(1, 1, 0)


def test_iota_sigma():
    rng = random.Random(2)
    assert iota_sigma(0.3, -0.7, 1) == (0.3, -0.7)
    assert iota_sigma(0.3, -0.7, -1) == (0.3, 0.7)
    for _ in range(50):
        x, y, sa = rng.uniform(-3, 3), rng.uniform(-3, 3), rng.choice([-1, 1]) * rng.uniform(0.01, 5)
        xp, yp = iota_sigma(x, y, sa)
        assert xp * yp == pytest.approx(sa * x * y, rel=1e-12)
    with pytest.raises(ValueError):
        iota_sigma(1, 1, 0)


def test_fourier_term_support_and_modulus(ctx14, rng):
    ctx = ctx14
    tau1, tau2 = 0.3 + 1j, -0.2 + 2j
    zero = nonzero = 0
    for _ in range(200):
        b = random_element(ctx, rng)
        v = fourier_term(b, tau1, tau2, ctx)
        q = ctx.q_F(b)
        if b.nrd() <= 0 or not ctx.qF_totally_positive(b):
            assert v == 0
            zero += 1
        else:
            expected = math.exp(-2 * math.pi * (q.embed(1) * tau1.imag + q.embed(-1) * tau2.imag))
            assert abs(v) == pytest.approx(expected, rel=1e-12)
            nonzero += 1
    assert zero and nonzero
    with pytest.raises(ValueError):
        fourier_term(ctx.algebra.one, 1j, -1j, ctx)


def _positive_elements(ctx, rng, count):
    out = []
    while len(out) < count:
        b = random_element(ctx, rng, radius=3)
        if b.nrd() > 0 and ctx.qF_totally_positive(b):
            out.append(b)
    return out


@pytest.mark.parametrize("name", ["disc14", "disc15"])
def test_closed_form_matches_quadrature(name, rng):
    ctx = bundled(name)
    for b in _positive_elements(ctx, rng, 20):
        closed = fourier_term(b, 1j, 2j, ctx)
        quad = fourier_term_quadrature(b, 1j, 2j, ctx)
        assert abs(closed - quad) < 1e-8


def test_quadrature_term_vanishes_off_support(ctx14, rng):
    compared = 0
    for _ in range(80):
        b = random_element(ctx14, rng, radius=3)
        if not (b.nrd() > 0 and ctx14.qF_totally_positive(b)):
            try:
                value = fourier_term_quadrature(b, 1j, 2j, ctx14)
            except ToleranceNotAchieved:
                continue  # x y too close to 0 for the truncated range
            assert abs(value) < 1e-8
            compared += 1
    assert compared >= 5


def test_theta_shadow_at_i(ctx14):
    tau = 1j
    for n in range(1, 11):
        total = sum(fourier_term(r.b, tau, tau, ctx14) for r in enumerate_orbits(n, ctx14))
        a = elliptic_coeff(n, ctx14)
        assert abs(total - a * cmath.exp(2j * math.pi * n * tau)) / max(1, abs(a)) < 1e-8
