"""Exact arithmetic in real quadratic fields and the biquadratic algebra L.

Rationals are :class:`fractions.Fraction`.  Elements of a real quadratic
field are stored on the basis ``(1, sqrt(D))`` with ``D`` squarefree, and
elements of ``L = Q(sqrt(D1)) (x) Q(sqrt(D2))`` on the basis
``(1, sqrt(D1), sqrt(D2), sqrt(D1*D2))``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Tuple

#: default floor of the precision ladder used by :func:`radical_sign`
DEFAULT_PRECISION_BITS = 128
#: the ladder gives up (raises PrecisionExhausted) beyond this many bits
MAX_PRECISION_BITS = 1 << 16


class PrecisionExhausted(ArithmeticError):
    """The interval ladder could not separate a value from zero."""


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction (no floats)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as an exact rational")


def squarefree_part(n: int) -> Tuple[int, int]:
    """Return ``(s, m)`` with ``n = s * m**2`` and ``s`` squarefree (``n > 0``)."""
    if n <= 0:
        raise ValueError("squarefree_part needs a positive integer")
    s, m = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            m *= p ** (e // 2)
            if e % 2:
                s *= p
        p += 1
    return s * n, m


def is_squarefree(n: int) -> bool:
    return n > 0 and squarefree_part(n)[0] == n


_configured_floor: int | None = None


def set_precision_floor(bits: int | None) -> None:
    """Set the starting precision of the ladder (``None`` restores the default).

    The ``PRECISION_BITS`` environment variable, when set, takes precedence.
    """
    global _configured_floor
    if bits is not None and bits < 2:
        raise ValueError("precision floor must be at least 2 bits")
    _configured_floor = bits


def floor_bits() -> int:
    env = os.environ.get("PRECISION_BITS")
    if env:
        bits = int(env)
        if bits < 2:
            raise ValueError("PRECISION_BITS must be at least 2")
        return bits
    return _configured_floor or DEFAULT_PRECISION_BITS


def radical_sign(terms: Dict[int, Fraction], start_bits: int | None = None) -> int:
    """Exact sign of ``sum(c * sqrt(m) for m, c in terms.items())``.

    Every ``m`` must be a distinct positive squarefree integer; square roots
    of such integers are linearly independent over Q, so the sum vanishes
    exactly when all coefficients do.  Otherwise the value is bracketed with
    integer square roots at ``start_bits`` bits of precision, doubling until
    the bracket excludes zero.
    """
    terms = {m: c for m, c in terms.items() if c}
    if not terms:
        return 0
    if len(terms) == 1:
        ((_, c),) = terms.items()
        return 1 if c > 0 else -1
    den = 1
    for c in terms.values():
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [(m, int(c * den)) for m, c in terms.items()]
    bits = start_bits or floor_bits()
    while bits <= MAX_PRECISION_BITS:
        scale = 1 << (2 * bits)
        lo = hi = 0
        for m, c in ints:
            if m == 1:
                r_lo = r_hi = 1 << bits
            else:
                r_lo = math.isqrt(m * scale)
                r_hi = r_lo + 1
            if c > 0:
                lo += c * r_lo
                hi += c * r_hi
            else:
                lo += c * r_hi
                hi += c * r_lo
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2
    raise PrecisionExhausted(f"sign undecided at {MAX_PRECISION_BITS} bits")


# ---------------------------------------------------------------------------
# real quadratic fields


class QuadElem:
    """``a + b*sqrt(D)`` with rational ``a, b`` and squarefree ``D > 1``."""

    __slots__ = ("a", "b", "D")

    def __init__(self, a, b, D: int):
        if D < 2:
            raise ValueError("D must be a squarefree integer > 1")
        self.a = as_fraction(a)
        self.b = as_fraction(b)
        self.D = D

    @classmethod
    def from_radicand(cls, a, b, radicand: int) -> "QuadElem":
        """Build ``a + b*sqrt(radicand)`` for any non-square ``radicand > 1``,
        normalising to the squarefree basis."""
        s, m = squarefree_part(radicand)
        return cls(a, as_fraction(b) * m, s)

    def _coerce(self, other) -> "QuadElem":
        if isinstance(other, QuadElem):
            if other.D != self.D:
                raise ValueError(f"mixed fields Q(sqrt({self.D})) and Q(sqrt({other.D}))")
            return other
        return QuadElem(as_fraction(other), 0, self.D)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadElem(self.a + o.a, self.b + o.b, self.D)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.a, -self.b, self.D)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return QuadElem(self.a * o.a + self.b * o.b * self.D, self.a * o.b + self.b * o.a, self.D)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadElem":
        return QuadElem(self.a, -self.b, self.D)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.D

    def trace(self) -> Fraction:
        return 2 * self.a

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadElem(self.a / n, -self.b / n, self.D)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = QuadElem(1, 0, self.D)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QuadElem):
            return (self.a, self.b, self.D) == (other.a, other.b, other.D)
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __float__(self):
        return self.embed(1)

    def embed(self, s: int) -> float:
        """Floating-point value at the real place ``sqrt(D) -> s*sqrt(D)``."""
        return float(self.a) + s * float(self.b) * math.sqrt(self.D)

    def __repr__(self):
        return f"QuadElem({self.a}, {self.b}, D={self.D})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        sign = "-" if self.b < 0 else "+"
        return f"{self.a} {sign} {abs(self.b)}√{self.D}"


def quad_sign(x: QuadElem, s: int = 1) -> int:
    """Exact sign of ``a + s*b*sqrt(D)``."""
    a, b = x.a, s * x.b
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: the larger of a^2 and b^2 D wins
    diff = a * a - b * b * x.D
    return sa if diff > 0 else sb


def totally_positive(x: QuadElem) -> bool:
    return quad_sign(x, 1) == 1 and quad_sign(x, -1) == 1


# ---------------------------------------------------------------------------
# the biquadratic algebra L


@dataclass(frozen=True)
class RealPlace:
    """The embedding of L sending sqrt(D1) -> s1*sqrt(D1), sqrt(D2) -> s2*sqrt(D2)."""

    s1: int
    s2: int

    @property
    def f_sign(self) -> int:
        """Sign of sqrt(D1*D2) under this place, i.e. which place of F it extends."""
        return self.s1 * self.s2


#: the four real places, ordered (++), (+-), (-+), (--)
PLACES = (RealPlace(1, 1), RealPlace(1, -1), RealPlace(-1, 1), RealPlace(-1, -1))


def distinguished_place(f_sign: int) -> RealPlace:
    """The extension with ``s1 = +1`` of the place of F with ``sqrt(D) -> f_sign*sqrt(D)``."""
    return RealPlace(1, f_sign)


class BiquadElem:
    """``c0 + c1 sqrt(D1) + c2 sqrt(D2) + c3 sqrt(D1 D2)`` in L."""

    __slots__ = ("c", "D1", "D2")

    def __init__(self, coeffs: Iterable, D1: int, D2: int):
        c = tuple(as_fraction(v) for v in coeffs)
        if len(c) != 4:
            raise ValueError("BiquadElem needs four coordinates")
        if math.gcd(D1, D2) != 1:
            raise ValueError("D1 and D2 must be coprime")
        self.c = c
        self.D1 = D1
        self.D2 = D2

    @classmethod
    def from_quad(cls, x: QuadElem, D1: int, D2: int) -> "BiquadElem":
        """Embed an element of F1, F2 or F = Q(sqrt(D1 D2)) into L."""
        if x.D == D1:
            return cls((x.a, x.b, 0, 0), D1, D2)
        if x.D == D2:
            return cls((x.a, 0, x.b, 0), D1, D2)
        if x.D == D1 * D2:
            return cls((x.a, 0, 0, x.b), D1, D2)
        raise ValueError(f"Q(sqrt({x.D})) is not a subfield of L")

    def _coerce(self, other) -> "BiquadElem":
        if isinstance(other, BiquadElem):
            if (other.D1, other.D2) != (self.D1, self.D2):
                raise ValueError("mixed biquadratic algebras")
            return other
        if isinstance(other, QuadElem):
            return BiquadElem.from_quad(other, self.D1, self.D2)
        return BiquadElem((as_fraction(other), 0, 0, 0), self.D1, self.D2)

    def __add__(self, other):
        o = self._coerce(other)
        return BiquadElem([p + q for p, q in zip(self.c, o.c)], self.D1, self.D2)

    __radd__ = __add__

    def __neg__(self):
        return BiquadElem([-p for p in self.c], self.D1, self.D2)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        o = self._coerce(other)
        a0, a1, a2, a3 = self.c
        b0, b1, b2, b3 = o.c
        D1, D2 = self.D1, self.D2
        return BiquadElem(
            (
                a0 * b0 + D1 * a1 * b1 + D2 * a2 * b2 + D1 * D2 * a3 * b3,
                a0 * b1 + a1 * b0 + D2 * (a2 * b3 + a3 * b2),
                a0 * b2 + a2 * b0 + D1 * (a1 * b3 + a3 * b1),
                a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1,
            ),
            D1,
            D2,
        )

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, BiquadElem):
            return (self.c, self.D1, self.D2) == (other.c, other.D1, other.D2)
        return NotImplemented

    def __hash__(self):
        return hash((self.c, self.D1, self.D2))

    def __bool__(self):
        return any(self.c)

    def __repr__(self):
        return f"BiquadElem({[str(v) for v in self.c]}, D1={self.D1}, D2={self.D2})"

    def terms_at(self, place: RealPlace) -> Dict[int, Fraction]:
        c0, c1, c2, c3 = self.c
        return {
            1: c0,
            self.D1: place.s1 * c1,
            self.D2: place.s2 * c2,
            self.D1 * self.D2: place.s1 * place.s2 * c3,
        }

    def sign_at(self, place: RealPlace) -> int:
        """Exact sign of the image under ``place`` (precision ladder)."""
        return radical_sign(self.terms_at(place))

    def embed(self, place: RealPlace) -> float:
        return sum(float(c) * math.sqrt(m) for m, c in self.terms_at(place).items())


def eps_involution(x: BiquadElem) -> BiquadElem:
    """The involution negating sqrt(D1) and sqrt(D2); its fixed algebra is F."""
    c0, c1, c2, c3 = x.c
    return BiquadElem((c0, -c1, -c2, c3), x.D1, x.D2)


def _to_F(x: BiquadElem) -> QuadElem:
    c0, c1, c2, c3 = x.c
    if c1 or c2:
        raise ValueError("element does not lie in F")
    return QuadElem(c0, c3, x.D1 * x.D2)


def rel_trace(x: BiquadElem) -> QuadElem:
    """Trace from L down to F = Q(sqrt(D1 D2))."""
    return _to_F(x + eps_involution(x))


def rel_norm(x: BiquadElem) -> QuadElem:
    """Norm from L down to F = Q(sqrt(D1 D2))."""
    return _to_F(x * eps_involution(x))


def norm_to_F1(x: BiquadElem) -> QuadElem:
    """Norm from L to F1 = Q(sqrt(D1)): multiply by the conjugate negating sqrt(D2)."""
    c0, c1, c2, c3 = x.c
    y = x * BiquadElem((c0, c1, -c2, -c3), x.D1, x.D2)
    assert not y.c[2] and not y.c[3]
    return QuadElem(y.c[0], y.c[1], x.D1)


def norm_to_F2(x: BiquadElem) -> QuadElem:
    """Norm from L to F2 = Q(sqrt(D2)): multiply by the conjugate negating sqrt(D1)."""
    c0, c1, c2, c3 = x.c
    y = x * BiquadElem((c0, -c1, c2, -c3), x.D1, x.D2)
    assert not y.c[1] and not y.c[3]
    return QuadElem(y.c[0], y.c[2], x.D2)


# ---------------------------------------------------------------------------
# units of real quadratic orders


def _maximal_order_generator(D: int) -> Tuple[Fraction, Fraction]:
    """Coordinates (on 1, sqrt D) of the standard generator of the maximal order."""
    if D % 4 == 1:
        return Fraction(1, 2), Fraction(1, 2)
    return Fraction(0), Fraction(1)


def order_coordinates(x: QuadElem) -> Tuple[Fraction, Fraction]:
    """Write ``x = u + v*omega`` with omega the maximal-order generator."""
    g0, g1 = _maximal_order_generator(x.D)
    v = x.b / g1
    return x.a - v * g0, v


def in_order(x: QuadElem, conductor: int) -> bool:
    """Membership in the order ``Z + conductor * O_max``."""
    u, v = order_coordinates(x)
    return u.denominator == 1 and v.denominator == 1 and v.numerator % conductor == 0


def fundamental_unit(D: int) -> QuadElem:
    """Fundamental unit (> 1) of the maximal order of Q(sqrt(D)).

    Walks the continued fraction of omega = (1+sqrt D)/2 or sqrt D and returns
    the first convergent p/q for which p - q*omega' is a unit.
    """
    if not is_squarefree(D) or D < 2:
        raise ValueError("D must be a squarefree integer > 1")
    g0, g1 = _maximal_order_generator(D)
    # omega = (P + sqrt(D)) / Q in the form used by the expansion
    if D % 4 == 1:
        P, Q, disc = 1, 2, D
    else:
        P, Q, disc = 0, 1, D
    r = math.isqrt(disc)
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    omega = QuadElem(g0, g1, D)
    for _ in range(10_000):
        a_k = (P + r) // Q
        p_prev, p = p, a_k * p + p_prev
        q_prev, q = q, a_k * q + q_prev
        cand = p - q * omega.conjugate()
        if abs(cand.norm()) == 1:
            return cand if quad_sign(cand - 1) > 0 else cand.inverse()
        # next complete quotient of (P + sqrt D)/Q
        P = a_k * Q - P
        Q = (disc - P * P) // Q
    raise RuntimeError(f"no unit found for D={D}")


def fundamental_tp_unit(D: int, f: int = 1) -> QuadElem:
    """Generator (> 1 at the identity place) of the totally positive units of
    the order of conductor ``f`` in Q(sqrt(D))."""
    if f < 1:
        raise ValueError("conductor must be >= 1")
    eta = fundamental_unit(D)
    if eta.norm() == -1:
        eta = eta * eta
    u = eta
    while not in_order(u, f):
        u = u * eta
    return u
