import functools
import itertools
import random
import sys

import pytest

from shimura_geodesics.config import BUNDLED, load_context
from shimura_geodesics.quaternion import quat_mul


@functools.lru_cache(maxsize=None)
def bundled(name):
    """Context for a bundled configuration (shared, so orbit caches are reused)."""
    return load_context(name)


@pytest.fixture(params=BUNDLED)
def any_ctx(request):
    return bundled(request.param)


@pytest.fixture
def ctx14():
    return bundled("disc14")


def random_element(ctx, rng, radius=6):
    while True:
        v = [rng.randint(-radius, radius) for _ in range(4)]
        if any(v):
            return ctx.order.element(v)


def small_norm_one(ctx, radius=2):
    """Norm-one elements of the order with small coordinates."""
    out = []
    for v in itertools.product(range(-radius, radius + 1), repeat=4):
        q = ctx.order.element(v)
        if q.nrd() == 1:
            out.append(q)
    return out


def random_norm_one(ctx, rng, length=3):
    """A product of a few norm-one units of the order (including g1, g2 and inverses)."""
    gens = small_norm_one(ctx) + [ctx.g1, ctx.g1_inv, ctx.g2, ctx.g2_inv]
    u = ctx.algebra.one
    for _ in range(length):
        u = quat_mul(u, rng.choice(gens))
    return u


@pytest.fixture
def rng():
    return random.Random(20261016)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
