"""Quaternion algebras over Q, orders given by a Z-basis, and embeddings of
real quadratic fields.

The algebra ``(a, b | Q)`` has basis ``1, i, j, k`` with ``i^2 = a``,
``j^2 = b`` and ``k = ij = -ji``.  Orders and embeddings are input data; this
module only checks the properties they are supposed to have.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from . import linalg
from .exact import QuadElem, as_fraction, is_squarefree, _maximal_order_generator

INF = math.inf


class OrderError(ValueError):
    """A lattice failed one of the order axioms."""


class EmbeddingError(ValueError):
    """An embedding datum is inconsistent (wrong square, wrong conductor, ...)."""


def factorize(n: int) -> dict:
    n = abs(n)
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _split_power(n: int, p: int):
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e, n


def hilbert_symbol(a, b, p) -> int:
    """Local Hilbert symbol ``(a, b)_p`` for nonzero rationals; ``p`` is a prime
    or ``math.inf``."""
    a, b = as_fraction(a), as_fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    if p == INF:
        return -1 if (a < 0 and b < 0) else 1
    # a*den^2 lies in the same square class as a
    A = a.numerator * a.denominator
    Bv = b.numerator * b.denominator
    alpha, u = _split_power(A, p)
    beta, v = _split_power(Bv, p)
    if p == 2:
        def eps(t):
            return 1 if t % 4 == 3 else 0

        def omega(t):
            return 1 if t % 8 in (3, 5) else 0

        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1

    def legendre(t):
        r = pow(t % p, (p - 1) // 2, p)
        return -1 if r == p - 1 else 1

    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        sign *= legendre(u)
    if alpha % 2:
        sign *= legendre(v)
    return sign


def ramified_primes(a, b) -> List:
    """Places where ``(a, b | Q)`` ramifies; ``math.inf`` stands for the real place."""
    a, b = as_fraction(a), as_fraction(b)
    candidates = {2}
    for r in (a, b):
        candidates |= set(factorize(r.numerator)) | set(factorize(r.denominator))
    places = [p for p in sorted(candidates) if hilbert_symbol(a, b, p) == -1]
    if hilbert_symbol(a, b, INF) == -1:
        places.append(INF)
    return places


@dataclass(frozen=True)
class QuatAlgebra:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", as_fraction(self.a))
        object.__setattr__(self, "b", as_fraction(self.b))
        if self.a == 0 or self.b == 0:
            raise ValueError("structure constants must be nonzero")

    def __call__(self, t=0, x=0, y=0, z=0) -> "Quaternion":
        return Quaternion(self, t, x, y, z)

    @property
    def one(self):
        return self(1)

    @property
    def i(self):
        return self(0, 1)

    @property
    def j(self):
        return self(0, 0, 1)

    @property
    def k(self):
        return self(0, 0, 0, 1)

    def ramified_places(self) -> List:
        return ramified_primes(self.a, self.b)

    def discriminant(self) -> int:
        return math.prod(p for p in self.ramified_places() if p != INF)

    def is_indefinite(self) -> bool:
        return self.a > 0 or self.b > 0

    def is_division(self) -> bool:
        return bool(self.ramified_places())


class Quaternion:
    __slots__ = ("alg", "t", "x", "y", "z")

    def __init__(self, alg: QuatAlgebra, t=0, x=0, y=0, z=0):
        self.alg = alg
        self.t = as_fraction(t)
        self.x = as_fraction(x)
        self.y = as_fraction(y)
        self.z = as_fraction(z)

    @property
    def coords(self):
        return (self.t, self.x, self.y, self.z)

    def _coerce(self, other):
        if isinstance(other, Quaternion):
            if other.alg != self.alg:
                raise ValueError("quaternions from different algebras")
            return other
        return Quaternion(self.alg, as_fraction(other))

    def __add__(self, other):
        o = self._coerce(other)
        return Quaternion(self.alg, self.t + o.t, self.x + o.x, self.y + o.y, self.z + o.z)

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(self.alg, -self.t, -self.x, -self.y, -self.z)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Quaternion):
            s = as_fraction(other)
            return Quaternion(self.alg, s * self.t, s * self.x, s * self.y, s * self.z)
        return quat_mul(self, other)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if isinstance(other, Quaternion):
            return self * other.inverse()
        s = as_fraction(other)
        return Quaternion(self.alg, self.t / s, self.x / s, self.y / s, self.z / s)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.alg.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Quaternion):
            return self.alg == other.alg and self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.coords == (as_fraction(other), 0, 0, 0)
        return NotImplemented

    def __hash__(self):
        return hash(self.coords)

    def __bool__(self):
        return any(self.coords)

    def __repr__(self):
        return "Quaternion(" + ", ".join(str(c) for c in self.coords) + ")"

    def conj(self):
        return conj(self)

    def trd(self):
        return trd(self)

    def nrd(self):
        return nrd(self)

    def inverse(self):
        n = nrd(self)
        if n == 0:
            raise ZeroDivisionError("quaternion has zero reduced norm")
        return conj(self) / n


def quat_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    if p.alg != q.alg:
        raise ValueError("quaternions from different algebras")
    a, b = p.alg.a, p.alg.b
    t1, x1, y1, z1 = p.coords
    t2, x2, y2, z2 = q.coords
    return Quaternion(
        p.alg,
        t1 * t2 + a * x1 * x2 + b * y1 * y2 - a * b * z1 * z2,
        t1 * x2 + x1 * t2 - b * y1 * z2 + b * z1 * y2,
        t1 * y2 + y1 * t2 + a * x1 * z2 - a * z1 * x2,
        t1 * z2 + z1 * t2 + x1 * y2 - y1 * x2,
    )


def conj(q: Quaternion) -> Quaternion:
    return Quaternion(q.alg, q.t, -q.x, -q.y, -q.z)


def trd(q: Quaternion) -> Fraction:
    return 2 * q.t


def nrd(q: Quaternion) -> Fraction:
    a, b = q.alg.a, q.alg.b
    return q.t * q.t - a * q.x * q.x - b * q.y * q.y + a * b * q.z * q.z


def norm_form_matrix(alg: QuatAlgebra) -> List[List[Fraction]]:
    """Gram matrix of nrd on the basis 1, i, j, k."""
    a, b = alg.a, alg.b
    return [[Fraction(1), 0, 0, 0], [0, -a, 0, 0], [0, 0, -b, 0], [0, 0, 0, a * b]]


# ---------------------------------------------------------------------------
# orders


class EichlerOrderLattice:
    """A rank-4 lattice in B given by a Z-basis; ``verify`` checks it is an order.

    ``matrix`` has the basis elements as columns, in (1, i, j, k) coordinates.
    """

    def __init__(self, alg: QuatAlgebra, basis: Sequence):
        self.alg = alg
        self.basis = [e if isinstance(e, Quaternion) else alg(*e) for e in basis]
        if len(self.basis) != 4:
            raise OrderError("an order needs exactly four basis elements")
        self.matrix = linalg.transpose([e.coords for e in self.basis])
        try:
            self.inv = linalg.inverse(self.matrix)
        except ZeroDivisionError:
            raise OrderError("basis matrix is singular") from None
        self._disc: Optional[int] = None

    def coordinates(self, q: Quaternion) -> List[Fraction]:
        return linalg.matvec(self.inv, q.coords)

    def contains(self, q: Quaternion) -> bool:
        return linalg.is_integral(self.coordinates(q))

    def element(self, coeffs: Sequence[int]) -> Quaternion:
        return Quaternion(self.alg, *linalg.matvec(self.matrix, coeffs))

    def gram_trd(self) -> List[List[Fraction]]:
        return [[trd(quat_mul(p, conj(q))) for q in self.basis] for p in self.basis]

    @property
    def reduced_disc(self) -> int:
        if self._disc is None:
            d = abs(linalg.det(self.gram_trd()))
            if d.denominator != 1:
                raise OrderError("non-integral discriminant")
            r = math.isqrt(d.numerator)
            if r * r != d.numerator or r == 0:
                raise OrderError("non-integral discriminant")
            self._disc = r
        return self._disc

    def verify(self) -> int:
        """Check the order axioms; return the reduced discriminant."""
        if not self.contains(self.alg.one):
            raise OrderError("missing unity")
        for p in self.basis:
            if not self.contains(conj(p)):
                raise OrderError("not closed under conjugation")
            for q in self.basis:
                if not self.contains(quat_mul(p, q)):
                    raise OrderError("not a ring")
        return self.reduced_disc

    def level(self) -> int:
        DB = self.alg.discriminant()
        d = self.reduced_disc
        if d % DB:
            raise OrderError(f"reduced discriminant {d} is not divisible by D_B = {DB}")
        return d // DB


def order_verify(L: EichlerOrderLattice) -> int:
    return L.verify()


def order_contains(L: EichlerOrderLattice, q: Quaternion) -> bool:
    return L.contains(q)


# ---------------------------------------------------------------------------
# embeddings of real quadratic fields


class EmbeddingData:
    """An embedding Q(sqrt(D)) -> B sending sqrt(D) to ``w`` (with ``w^2 = D``)."""

    def __init__(self, D: int, w: Quaternion, f: Optional[int] = None):
        if not is_squarefree(D) or D < 2:
            raise EmbeddingError(f"D = {D} is not a squarefree integer > 1")
        if trd(w) != 0 or quat_mul(w, w) != w.alg(D):
            raise EmbeddingError("embedding square mismatch")
        self.D = D
        self.w = w
        self.f = f

    def conjugated(self, u: Quaternion) -> "EmbeddingData":
        return EmbeddingData(self.D, u * self.w * u.inverse(), self.f)

    def __repr__(self):
        return f"EmbeddingData(D={self.D}, w={self.w!r}, f={self.f})"


def embed_elem(e: EmbeddingData, t: QuadElem) -> Quaternion:
    if t.D != e.D:
        raise ValueError(f"element of Q(sqrt({t.D})) given to an embedding of Q(sqrt({e.D}))")
    return t.a * e.w.alg.one + t.b * e.w


def optimal_conductor(O: EichlerOrderLattice, e: EmbeddingData) -> int:
    """Conductor of the order ``{t : embed(t) in O}``; checks any declared value."""
    g0, g1 = _maximal_order_generator(e.D)
    omega = embed_elem(e, QuadElem(g0, g1, e.D))
    # with 1 in O, f*omega lies in O exactly when f clears every denominator
    if not O.contains(e.w.alg.one):
        raise OrderError("missing unity")
    coords = O.coordinates(omega)
    f = 1
    for c in coords:
        f = f * c.denominator // math.gcd(f, c.denominator)
    if e.f is not None and e.f != f:
        raise EmbeddingError(f"declared conductor {e.f} but the embedding is optimal for conductor {f}")
    return f
