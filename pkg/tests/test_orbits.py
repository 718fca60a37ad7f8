import itertools
from fractions import Fraction

import numpy as np
import pytest

from shimura_geodesics.orbits import (
    _lll,
    canonicalize,
    enumerate_orbits,
    enumerate_orbits_oracle,
    enumerator,
    short_vectors,
)
from shimura_geodesics.quaternion import quat_mul

from conftest import bundled, random_element


def _unit_translate(ctx, b, m, k, sign=1):
    g = ctx.g1 ** m if m >= 0 else ctx.g1_inv ** (-m)
    h = ctx.g2 ** k if k >= 0 else ctx.g2_inv ** (-k)
    out = quat_mul(quat_mul(g, b), h)
    return out if sign > 0 else -out


def test_canonicalize_is_idempotent_and_orbit_constant(any_ctx, rng):
    ctx = any_ctx
    for _ in range(60):
        b = random_element(ctx, rng)
        rep = canonicalize(b, ctx)
        assert canonicalize(rep.b, ctx) == rep
        assert 0 <= rep.t[0] < 1 + 1e-9 and 0 <= rep.t[1] < 1 + 1e-9
        m, k = rng.randint(-3, 3), rng.randint(-3, 3)
        assert canonicalize(_unit_translate(ctx, b, m, k, rng.choice((1, -1))), ctx) == rep


def test_canonicalize_zero():
    ctx = bundled("disc14")
    with pytest.raises(ValueError):
        canonicalize(0 * ctx.algebra.one, ctx)


def test_degenerate_n(any_ctx):
    assert enumerate_orbits(0, any_ctx) == []
    assert enumerate_orbits(-3, any_ctx) == []
    with pytest.raises(ValueError):
        enumerate_orbits(Fraction(5, 2), any_ctx)
    with pytest.raises(ValueError):
        enumerate_orbits(2.5, any_ctx)


@pytest.mark.parametrize("name", ["disc14", "disc15", "disc6_level5", "disc6"])
def test_enumerated_orbits_are_valid_and_distinct(name):
    ctx = bundled(name)
    for n in range(1, 21):
        reps = enumerate_orbits(n, ctx)
        for r in reps:
            assert r.b.nrd() == n and r.n == n
            assert ctx.order.contains(r.b)
            assert ctx.qF_totally_positive(r.b)
            assert ctx.q_F(r.b).trace() == n
        # no two representatives are related by the unit action
        keys = {r.key for r in reps}
        assert len(keys) == len(reps)
        for r in reps[:4]:
            for m, k in itertools.product(range(-2, 3), repeat=2):
                for s in (1, -1):
                    t = _unit_translate(ctx, r.b, m, k, s)
                    if (m, k, s) != (0, 0, 1):
                        assert t.coords != r.b.coords
                    if t.coords in keys:
                        assert t.coords == r.key


def test_identity_orbit_when_alpha_totally_positive(any_ctx):
    ctx = any_ctx
    assert ctx.qF_totally_positive(ctx.algebra.one)
    assert canonicalize(ctx.algebra.one, ctx).key in {r.key for r in enumerate_orbits(1, ctx)}


@pytest.mark.parametrize("name", ["disc14", "disc6_level5"])
def test_wider_box_finds_nothing_new(name):
    ctx = bundled(name)
    for n in range(1, 13):
        assert enumerate_orbits_oracle(n, ctx, box_scale=2.0) == enumerate_orbits(n, ctx)
    with pytest.raises(ValueError):
        enumerate_orbits_oracle(3, ctx, box_scale=0.5)


def test_raw_points_collapse_to_orbits(ctx14):
    ctx = ctx14
    for n in (1, 2, 5, 8):
        raw = enumerate_orbits_oracle(n, ctx, canonical=False)
        assert all(b.nrd() == n for b in raw)
        keys = {canonicalize(b, ctx).key for b in raw}
        assert keys == {r.key for r in enumerate_orbits(n, ctx)}


def test_brute_force_box_is_covered(ctx14):
    """Every element of a coordinate box with small nrd and q_F >> 0 lands in an enumerated orbit."""
    ctx = ctx14
    en = enumerator(ctx)
    known = {n: {r.key for r in enumerate_orbits(n, ctx)} for n in range(1, 9)}
    hits = 0
    for v in itertools.product(range(-4, 5), repeat=4):
        n = en.nrd(v)
        if n < 1 or n > 8 or n.denominator != 1 or not en.qF_positive(v):
            continue
        hits += 1
        assert canonicalize(ctx.order.element(v), ctx).key in known[int(n)]
    assert hits > 20


def test_exact_invariants_from_coordinates(ctx14, rng):
    ctx = ctx14
    en = enumerator(ctx)
    for _ in range(100):
        v = [rng.randint(-5, 5) for _ in range(4)]
        if not any(v):
            continue
        b = ctx.order.element(v)
        assert en.nrd(v) == b.nrd()
        assert en.qF_positive(v) == (b.nrd() > 0 and ctx.qF_totally_positive(b))


def test_short_vectors_against_brute_force():
    rng = np.random.default_rng(7)
    for _ in range(5):
        A = rng.normal(size=(4, 4))
        G = A.T @ A + 0.3 * np.eye(4)
        bound = 6.0
        got = set(short_vectors(G, bound))
        r = range(-5, 6)  # G >= 0.3 I, so |v_i| <= sqrt(6 / 0.3) < 5
        want = set()
        for v in itertools.product(r, repeat=4):
            x = np.array(v, dtype=float)
            if any(v) and x @ G @ x <= bound:
                want.add(v)
        assert got == want


def test_lll_is_unimodular_and_reduces():
    rng = np.random.default_rng(3)
    for _ in range(10):
        B = rng.integers(-30, 30, size=(4, 4)).astype(float)
        if abs(np.linalg.det(B)) < 1:
            continue
        G = B.T @ B
        U = _lll(G)
        assert abs(round(float(np.linalg.det(np.array(U, dtype=float))))) == 1
        Gr = np.array(U.T.dot(G.astype(object)).dot(U), dtype=float)
        assert Gr[0, 0] <= G[0, 0] + 1e-9
