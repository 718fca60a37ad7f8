"""Floating-point checks of the archimedean integrals behind the coefficient formula.

Everything here is double precision; it validates closed forms numerically and
is never used by the exact pipeline.
"""

from __future__ import annotations

import cmath
import math

from .exact import totally_positive
from .fform import FFormContext
from .quaternion import Quaternion

#: quadrature is done in s = log t on [-S_MAX, S_MAX]
S_MAX = 12.0
_MAX_LEVELS = 16


class ToleranceNotAchieved(ArithmeticError):
    pass


def phi_inf(x: float, y: float) -> float:
    return (x + y) * math.exp(-math.pi * (x * x + y * y))


def I_closed(x: float, y: float) -> float:
    """Closed form of the integral of phi_inf(x/t, y t) dt/t over t > 0."""
    if x * y > 0:
        return math.copysign(1.0, x) * math.exp(-2 * math.pi * x * y)
    return 0.0


def km_coeff(x: float, y: float, t: float) -> float:
    """Coefficient of dt/t of the Kudla-Millson form at (x, y) on the line t > 0."""
    if t <= 0:
        raise ValueError("t must be positive")
    u, v = x / t, y * t
    return (u + v) * math.exp(-math.pi * (u * u + v * v))


def _trapezoid(f, h: float) -> float:
    n = int(round(2 * S_MAX / h))
    total = 0.5 * (f(-S_MAX) + f(S_MAX))
    for k in range(1, n):
        total += f(-S_MAX + k * h)
    return total * h


def integrate_log(f, tol: float) -> float:
    """Integrate ``f(s)`` over ``[-S_MAX, S_MAX]``, halving the step until two
    successive trapezoid sums differ by less than ``tol / 2``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    edge = max(abs(f(-S_MAX)), abs(f(S_MAX)))
    if edge * 10 > tol:
        raise ToleranceNotAchieved(f"integrand is {edge:.3g} at the truncation point")
    h = 1.0
    prev = _trapezoid(f, h)
    for _ in range(_MAX_LEVELS):
        h /= 2
        cur = _trapezoid(f, h)
        if abs(cur - prev) < tol / 2:
            return cur
        prev = cur
    raise ToleranceNotAchieved(f"step refinement stalled at tol = {tol:g}")


def I_quadrature(x: float, y: float, tol: float = 1e-9) -> float:
    """Numerical value of the integral of phi_inf(x/t, y t) dt/t, via t = e^s."""
    return integrate_log(lambda s: km_coeff(x, y, math.exp(s)), tol)


def iota_sigma(x: float, y: float, sa: float):
    """(sqrt|sa| x, sgn(sa) sqrt|sa| y): carries sa * x * y to the form x' * y'."""
    if sa == 0:
        raise ValueError("sa must be nonzero")
    r = math.sqrt(abs(sa))
    return r * x, math.copysign(r, sa) * y


def _check_tau(*taus):
    for tau in taus:
        if complex(tau).imag <= 0:
            raise ValueError("tau must lie in the upper half-plane")


def fourier_term(b: Quaternion, tau1: complex, tau2: complex, ctx: FFormContext) -> complex:
    """Closed form of the b-term: varsigma(b) e^{2 pi i (q_sigma tau1 + q_sigma' tau2)}
    when q_F(b) >> 0, else 0.  tau1 belongs to the place sqrt(D) -> +sqrt(D)."""
    if not b:
        raise ValueError("b must be nonzero")
    _check_tau(tau1, tau2)
    q = ctx.q_F(b)
    if not totally_positive(q):
        return 0j
    phase = q.embed(1) * complex(tau1) + q.embed(-1) * complex(tau2)
    return ctx.varsigma(b) * cmath.exp(2j * math.pi * phase)


def fourier_term_quadrature(
    b: Quaternion, tau1: complex, tau2: complex, ctx: FFormContext, tol: float = 1e-10
) -> complex:
    """The same term assembled place by place: the components of iota_L(b) at the
    two extensions of each place, scaled by sqrt(Im tau) and carried to R^{1,1} by
    iota_sigma, then integrated numerically against the Kudla-Millson coefficient."""
    if not b:
        raise ValueError("b must be nonzero")
    _check_tau(tau1, tau2)
    total = complex(ctx.sign_convention)
    for f_sign, tau in ((1, complex(tau1)), (-1, complex(tau2))):
        b1, b2 = ctx.place_values(b, f_sign)
        sa = ctx.alpha.embed(f_sign)
        q_sigma = sa * b1 * b2
        r = math.sqrt(tau.imag)
        x, y = iota_sigma(r * b1, r * b2, sa)
        total *= cmath.exp(2j * math.pi * q_sigma * tau.real) * I_quadrature(x, y, tol)
    return total
