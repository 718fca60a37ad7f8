from fractions import Fraction
from types import SimpleNamespace

import pytest

from shimura_geodesics.exact import QuadElem, rel_norm, totally_positive
from shimura_geodesics.fform import DegenerateConfiguration, FFormContext
from shimura_geodesics.quaternion import EmbeddingData, quat_mul

from conftest import bundled, random_element, random_norm_one


def test_alpha_has_trace_one(any_ctx):
    assert any_ctx.alpha.trace() == 1
    assert any_ctx.q_F(any_ctx.algebra.one) == any_ctx.alpha


def test_known_alpha():
    assert bundled("disc14").alpha == QuadElem(Fraction(1, 2), Fraction(1, 30), 15)
    assert bundled("disc15").alpha == QuadElem(Fraction(1, 2), Fraction(13, 184), 46)


def test_trace_identity(any_ctx, rng):
    for _ in range(300):
        b = random_element(any_ctx, rng)
        assert any_ctx.q_F(b).trace() == b.nrd()


def test_isometry_and_round_trip(any_ctx, rng):
    ctx = any_ctx
    one = ctx.algebra.one
    for _ in range(200):
        b = random_element(ctx, rng)
        x = ctx.iota_L(b)
        assert ctx.act_L(x, one) == b
        assert ctx.alpha * rel_norm(x) == ctx.q_F(b)


def test_action_is_a_module_structure(ctx14, rng):
    ctx = ctx14
    for _ in range(50):
        b = random_element(ctx, rng)
        x, y = ctx.iota_L(random_element(ctx, rng)), ctx.iota_L(random_element(ctx, rng))
        assert ctx.act_L(x * y, b) == ctx.act_L(x, ctx.act_L(y, b))


def test_pair_F_is_symmetric_bilinear(ctx14, rng):
    ctx = ctx14
    for _ in range(50):
        p, q, r = (random_element(ctx, rng) for _ in range(3))
        assert ctx.pair_F(p, q) == ctx.pair_F(q, p)
        assert ctx.pair_F(p + r, q) == ctx.pair_F(p, q) + ctx.pair_F(r, q)
        assert ctx.pair_F(p, p).trace() == 2 * p.nrd()


def test_unit_invariance(any_ctx, rng):
    ctx = any_ctx
    for _ in range(40):
        b = random_element(ctx, rng)
        q = ctx.q_F(b)
        for m in (-1, 1):
            g = ctx.g1 if m > 0 else ctx.g1_inv
            h = ctx.g2 if m > 0 else ctx.g2_inv
            assert ctx.q_F(quat_mul(g, b)) == q
            assert ctx.q_F(quat_mul(b, h)) == q


def test_units_are_norm_one_and_in_order(any_ctx):
    ctx = any_ctx
    for g in (ctx.g1, ctx.g2, ctx.g1_inv, ctx.g2_inv):
        assert g.nrd() == 1 and ctx.order.contains(g)
    assert totally_positive(ctx.u1) and totally_positive(ctx.u2)


def test_alpha_invariant_under_conjugation(any_ctx, rng):
    for _ in range(3):
        u = random_norm_one(any_ctx, rng)
        assert any_ctx.conjugated(u).alpha == any_ctx.alpha


def test_varsigma_basic(ctx14, rng):
    ctx = ctx14
    one = ctx.algebra.one
    assert ctx.varsigma(one) == ctx.varsigma(-one)
    assert ctx.with_sign_convention(-1).varsigma(one) == -ctx.varsigma(one)
    with pytest.raises(ValueError):
        ctx.varsigma(0 * one)
    found = False
    while not found:
        b = random_element(ctx, rng)
        if b.nrd() > 0 and not ctx.qF_totally_positive(b):
            found = True
            with pytest.raises(ValueError):
                ctx.varsigma(b)


def test_varsigma_matches_float_evaluation(ctx14, rng):
    ctx = ctx14
    checked = 0
    while checked < 50:
        b = random_element(ctx, rng)
        if b.nrd() <= 0 or not ctx.qF_totally_positive(b):
            continue
        f = 1
        for s in (1, -1):
            b1, _ = ctx.place_values(b, s)
            f *= 1 if b1 > 0 else -1
        assert ctx.varsigma(b) == f
        checked += 1


def test_place_values_multiply_to_q_sigma(ctx14, rng):
    ctx = ctx14
    for _ in range(20):
        b = random_element(ctx, rng)
        q = ctx.q_F(b)
        for s in (1, -1):
            b1, b2 = ctx.place_values(b, s)
            assert abs(ctx.alpha.embed(s) * b1 * b2 - q.embed(s)) < 1e-9 * (1 + abs(q.embed(s)))


def test_configuration_errors():
    ctx = bundled("disc14")
    with pytest.raises(ValueError, match="coprime"):
        FFormContext(ctx.algebra, ctx.order, ctx.emb1, EmbeddingData(5, ctx.w1))
    with pytest.raises(ValueError):
        ctx.with_sign_convention(0)
    # 1, w1, w2, w1 w2 dependent: only reachable with inconsistent input data
    fake = SimpleNamespace(D=3, w=ctx.w1, f=None)
    with pytest.raises(DegenerateConfiguration):
        FFormContext(ctx.algebra, ctx.order, ctx.emb1, fake)


def test_swapped_context(ctx14):
    s = ctx14.swapped()
    assert (s.D1, s.D2) == (ctx14.D2, ctx14.D1)
    assert s.alpha == ctx14.alpha  # q_F(1) = 1/2 + trd(w1 w2)/(4D) sqrt(D) is symmetric
