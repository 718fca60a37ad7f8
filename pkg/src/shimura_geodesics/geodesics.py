"""Signed crossing counts of geodesic axes in the upper half-plane.

This is an independent route to the intersection numbers: the algebra is
split over ``Q(sqrt s)`` (``s`` a positive structure constant), the unit
``g_j`` of each embedding becomes a hyperbolic matrix whose axis is the lift
of the closed geodesic, and the n-th number is the signed count of crossings
between the first axis and the translates ``b . axis_2`` over the orbit set.

Boundary points are kept projectively as column vectors ``(p0, p1)`` whose
entries are exact sums of square roots (``RadicalSum``); ``infinity`` is
``(1, 0)``.  The only thing ever needed is the cyclic order of points on
``R P^1``, which is the sign of a product of 2x2 determinants and so is
decided by ``radical_sign`` exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .exact import as_fraction, radical_sign, squarefree_part
from .fform import FFormContext
from .orbits import enumerate_orbits, enumerator
from .quaternion import EmbeddingData, Quaternion


class NonTransversal(ValueError):
    """The two geodesics share an endpoint."""


class RadicalSum:
    """A finite sum ``sum c_m sqrt(m)`` over distinct squarefree ``m >= 1``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[int, Fraction]] = None):
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def rational(cls, c) -> "RadicalSum":
        return cls({1: as_fraction(c)})

    @classmethod
    def sqrt(cls, r) -> "RadicalSum":
        """sqrt of a positive rational ``r``."""
        r = as_fraction(r)
        if r <= 0:
            raise ValueError("sqrt of a non-positive number")
        # sqrt(p/q) = sqrt(p q) / q
        s, m = squarefree_part(r.numerator * r.denominator)
        return cls({s: Fraction(m, r.denominator)})

    def _coerce(self, other) -> "RadicalSum":
        return other if isinstance(other, RadicalSum) else RadicalSum.rational(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return RadicalSum(out)

    __radd__ = __add__

    def __neg__(self):
        return RadicalSum({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: Dict[int, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                g = math.gcd(m1, m2)
                m = (m1 // g) * (m2 // g)
                out[m] = out.get(m, 0) + c1 * c2 * g
        return RadicalSum(out)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, RadicalSum):
            try:
                other = RadicalSum.rational(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sign(self) -> int:
        return radical_sign(self.terms)

    def __float__(self):
        return float(sum(float(c) * math.sqrt(m) for m, c in self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = [f"{c}" if m == 1 else f"{c}*sqrt({m})" for m, c in sorted(self.terms.items())]
        return " + ".join(parts)


Matrix2 = Tuple[Tuple[RadicalSum, RadicalSum], Tuple[RadicalSum, RadicalSum]]


def mat2_mul(A: Matrix2, B: Matrix2) -> Matrix2:
    return (
        (A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]),
        (A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]),
    )


def mat2_det(A: Matrix2) -> RadicalSum:
    return A[0][0] * A[1][1] - A[0][1] * A[1][0]


def mat2_trace(A: Matrix2) -> RadicalSum:
    return A[0][0] + A[1][1]


def split_matrix(q: Quaternion) -> Matrix2:
    """Image of ``q`` in M_2(R) under the splitting over Q(sqrt s).

    With ``s = a > 0``: i -> diag(sqrt a, -sqrt a), j -> [[0, b], [1, 0]].
    When only ``b > 0`` the roles of i and j are exchanged.
    """
    alg = q.alg
    a, b = alg.a, alg.b
    t, x, y, z = q.coords
    if a > 0:
        r = RadicalSum.sqrt(a)
        # k = ij -> [[0, b sqrt a], [-sqrt a, 0]]
        return (
            (t + x * r, y * b + z * b * r),
            (RadicalSum.rational(y) - z * r, t - x * r),
        )
    if b > 0:
        r = RadicalSum.sqrt(b)
        # i -> [[0, a], [1, 0]], j -> diag(sqrt b, -sqrt b), k = ij -> [[0, -a sqrt b], [sqrt b, 0]]
        return (
            (t + y * r, x * a - z * a * r),
            (x + z * r, t - y * r),
        )
    raise ValueError("algebra is definite: no positive structure constant")


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of R P^1 = R u {oo} given by a nonzero column vector (p0, p1)."""

    p0: RadicalSum
    p1: RadicalSum

    def __post_init__(self):
        if not self.p0 and not self.p1:
            raise ValueError("zero vector is not a boundary point")

    @classmethod
    def infinity(cls) -> "BoundaryPoint":
        return cls(RadicalSum.rational(1), RadicalSum())

    @classmethod
    def of(cls, x) -> "BoundaryPoint":
        return cls(x if isinstance(x, RadicalSum) else RadicalSum.rational(x), RadicalSum.rational(1))

    def is_infinity(self) -> bool:
        return not self.p1

    def value(self) -> float:
        return math.inf if self.is_infinity() else float(self.p0) / float(self.p1)

    def same_point(self, other: "BoundaryPoint") -> bool:
        return not _det(self, other)


def _det(p: BoundaryPoint, q: BoundaryPoint) -> RadicalSum:
    return p.p0 * q.p1 - p.p1 * q.p0


def cyclic_orientation(p: BoundaryPoint, q: BoundaryPoint, r: BoundaryPoint) -> int:
    """+1 if p, q, r occur in increasing cyclic order on R u {oo}, -1 if decreasing,
    0 if two coincide."""
    return (_det(p, q) * _det(q, r) * _det(r, p)).sign()


@dataclass(frozen=True)
class OrientedGeodesic:
    p_rep: BoundaryPoint
    p_att: BoundaryPoint

    def __post_init__(self):
        if self.p_rep.same_point(self.p_att):
            raise ValueError("a geodesic needs two distinct endpoints")

    def reversed(self) -> "OrientedGeodesic":
        return OrientedGeodesic(self.p_att, self.p_rep)


def apply_mobius(g: Matrix2, p: BoundaryPoint) -> BoundaryPoint:
    return BoundaryPoint(g[0][0] * p.p0 + g[0][1] * p.p1, g[1][0] * p.p0 + g[1][1] * p.p1)


def mobius_image(g: Matrix2, G: OrientedGeodesic) -> OrientedGeodesic:
    if mat2_det(g).sign() <= 0:
        raise ValueError("mobius_image needs det(g) > 0")
    return OrientedGeodesic(apply_mobius(g, G.p_rep), apply_mobius(g, G.p_att))


def _eigenvector(W: Matrix2, mu: RadicalSum) -> BoundaryPoint:
    """Kernel of W - mu for an eigenvalue mu of W."""
    (A, B), (C, D) = W
    # each row of W - mu gives a candidate; a diagonal W needs the coordinate axes
    for p0, p1 in ((B, mu - A), (mu - D, C)):
        if p0 or p1:
            return BoundaryPoint(p0, p1)
    return BoundaryPoint(RadicalSum.rational(1), RadicalSum()) if A == mu else BoundaryPoint(RadicalSum(), RadicalSum.rational(1))


def axis_of_pure(w: Quaternion, D: int) -> OrientedGeodesic:
    """Axis of ``p + q w`` (q > 0, p + q sqrt D > 1), oriented toward the
    fixed point on the sqrt(D)-eigenline of split(w)."""
    W = split_matrix(w)
    r = RadicalSum.sqrt(D)
    return OrientedGeodesic(_eigenvector(W, -r), _eigenvector(W, r))


def axis(e: EmbeddingData, ctx: Optional[FFormContext] = None) -> OrientedGeodesic:
    """Oriented axis of the image of the totally positive fundamental unit.

    ``u = p + q sqrt D`` with ``u > 1 > u'`` has ``q > 0``; its attracting
    fixed point is the eigenvector of split(w) for +sqrt(D).
    """
    G = axis_of_pure(e.w, e.D)
    if ctx is not None:
        u = ctx.u1 if e is ctx.emb1 else ctx.u2 if e is ctx.emb2 else None
        if u is not None:
            g = split_matrix(u.a + u.b * e.w)
            if mat2_trace(g).sign() <= 0 or (mat2_trace(g) * mat2_trace(g) - 4).sign() <= 0:
                raise ValueError("not hyperbolic")
    return G


def crossing_sign(G1: OrientedGeodesic, G2: OrientedGeodesic) -> int:
    """0 if the endpoint pairs do not interlace; otherwise +1 when
    (p1_rep, p2_rep, p1_att, p2_att) is in increasing cyclic order, else -1."""
    for p in (G1.p_rep, G1.p_att):
        for q in (G2.p_rep, G2.p_att):
            if p.same_point(q):
                raise NonTransversal("geodesics share an endpoint")
    o_rep = cyclic_orientation(G1.p_rep, G1.p_att, G2.p_rep)
    o_att = cyclic_orientation(G1.p_rep, G1.p_att, G2.p_att)
    if o_rep == o_att:
        return 0
    return cyclic_orientation(G1.p_rep, G2.p_rep, G1.p_att)


def _axes(ctx: FFormContext) -> Tuple[OrientedGeodesic, OrientedGeodesic]:
    cached = ctx.__dict__.get("_axes")
    if cached is None:
        cached = (axis(ctx.emb1, ctx), axis(ctx.emb2, ctx))
        ctx._axes = cached
    return cached


def crossing_of(b: Quaternion, ctx: FFormContext) -> int:
    """Signed crossing of axis_1 with split(b) . axis_2."""
    A1, A2 = _axes(ctx)
    return crossing_sign(A1, mobius_image(split_matrix(b), A2))


def oracle_coeff(n, ctx: FFormContext) -> int:
    """Signed crossing count summed over the orbit representatives of norm n."""
    q = Fraction(n)
    if q.denominator != 1 or q <= 0:
        return 0
    return sum(crossing_of(rep.b, ctx) for rep in enumerate_orbits(int(q), ctx))


# ---------------------------------------------------------------------------
# exploratory comparison


@dataclass
class TermwiseRow:
    b: Quaternion
    varsigma: int
    crossing: int
    agree: bool


@dataclass
class TermwiseReport:
    n: int
    calibration_sign: int
    rows: List[TermwiseRow] = field(default_factory=list)
    scan_radius: int = 0
    scanned: int = 0
    nonpositive_crossings: List[Quaternion] = field(default_factory=list)

    @property
    def agreement_rate(self) -> float:
        return sum(r.agree for r in self.rows) / len(self.rows) if self.rows else 1.0

    @property
    def totals(self) -> Tuple[int, int]:
        return sum(r.varsigma for r in self.rows), sum(r.crossing for r in self.rows)

    def format(self) -> str:
        lines = [f"n = {self.n}: {len(self.rows)} orbits, agreement rate {self.agreement_rate:.3f}"]
        for r in self.rows:
            lines.append(f"  {r.b!r}\tvarsigma={r.varsigma:+d}\tcrossing={r.crossing:+d}\t{'ok' if r.agree else 'DIFF'}")
        lines.append(
            f"  scanned {self.scanned} elements with q_F not totally positive "
            f"(radius {self.scan_radius}); crossings among them: {len(self.nonpositive_crossings)}"
        )
        return "\n".join(lines)


def termwise_compare(n: int, ctx: FFormContext, calibration_sign: int = 1, scan_radius: int = 3) -> TermwiseReport:
    """Compare varsigma(b) with the crossing sign orbit by orbit, and scan a
    coordinate box for elements of norm n with q_F(b) not totally positive
    that nevertheless cross."""
    rep = TermwiseReport(n, calibration_sign, scan_radius=scan_radius)
    for o in enumerate_orbits(n, ctx):
        s = ctx.varsigma(o.b)
        c = crossing_of(o.b, ctx)
        rep.rows.append(TermwiseRow(o.b, s, c, s == calibration_sign * c))
    en = enumerator(ctx)
    rng = range(-scan_radius, scan_radius + 1)
    for v in itertools.product(rng, repeat=4):
        if en.nrd(v) != n or en.qF_positive(v):
            continue
        rep.scanned += 1
        b = ctx.order.element(v)
        if crossing_of(b, ctx):
            rep.nonpositive_crossings.append(b)
    return rep
