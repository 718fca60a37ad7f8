"""Orbits of ``{b in O : nrd(b) = n, q_F(b) >> 0}`` under ``+-1 x <g1> x <g2>``.

Write ``x = iota_L(b)`` and let ``y_j`` be the norm of ``x`` down to ``F_j``.
Left multiplication by ``g1`` multiplies ``y1`` by ``u1^2`` and fixes ``y2``;
right multiplication by ``g2`` does the same with the indices swapped.  So

    t_j(b) = log|y_j / y_j'| / (4 log u_j)

are free coordinates for the unit action, and each orbit has exactly one
representative with ``t_1, t_2 in [0, 1)`` (decided exactly, in ``F_j``).

Enumeration covers the strip ``t in [-delta, 1 + delta]^2`` by cells.  On a
cell the quadratic form ``sum_P w_P x_P^2`` (weights chosen from the cell
centre) is at most ``2 n cosh(spread)`` for every vector of the orbit set, so
a Fincke-Pohst search of that ellipsoid finds them all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from . import linalg
from .exact import PLACES, QuadElem, norm_to_F1, norm_to_F2, quad_sign
from .fform import FFormContext
from .quaternion import Quaternion, norm_form_matrix, quat_mul

DEFAULT_BOX_SLACK = 0.01
# largest log-spread of a cell; the ellipsoid radius grows like cosh(spread)
_CELL_SPREAD = 1.2


@dataclass(frozen=True)
class OrbitRep:
    b: Quaternion
    key: Tuple[Fraction, ...]
    t: Tuple[float, float] = field(compare=False, default=(0.0, 0.0))

    @property
    def n(self) -> int:
        return int(self.b.nrd())


@dataclass(frozen=True)
class UnitLogData:
    """Logarithmic embeddings of u1 (x) 1 and 1 (x) u2 over the four places of L."""

    log_u1: float
    log_u2: float

    @property
    def logs(self):
        L1, L2 = self.log_u1, self.log_u2
        # places ordered (++), (+-), (-+), (--)
        return (L1, L1, -L1, -L1), (L2, -L2, L2, -L2)

    @property
    def lattice(self):
        """Translation of (d1, d2) = (l_{++} - l_{--}, l_{+-} - l_{-+}) by each unit."""
        L1, L2 = self.log_u1, self.log_u2
        return ((2 * L1, 2 * L1), (2 * L2, -2 * L2))


def unit_log_data(ctx: FFormContext) -> UnitLogData:
    return UnitLogData(math.log(ctx.u1.embed(1)), math.log(ctx.u2.embed(1)))


def _sign_normalize(b: Quaternion) -> Quaternion:
    for c in b.coords:
        if c:
            return b if c > 0 else -b
    raise ValueError("cannot normalise the zero quaternion")


def _log_frac(q: Fraction) -> float:
    return math.log(q.numerator) - math.log(q.denominator)


def _log_abs_ratio(y: QuadElem) -> float:
    """log|y/y'| without cancellation (y and y' may differ by many orders of magnitude)."""
    z = y * y / abs(y.norm())  # totally positive of norm 1, equal to |y/y'| at the identity place
    if not z.b:
        return 0.0
    # the larger conjugate |a| + |b| sqrt(D) has no cancellation
    big = _log_frac(abs(z.a)) + math.log1p(float(abs(z.b) / abs(z.a)) * math.sqrt(z.D)) if z.a else 0.0
    return big if z.b > 0 else -big


def _floor_log_ratio(y: QuadElem, unit4: QuadElem, log_unit4: float) -> int:
    """The integer m with unit4^m <= |y/y'| < unit4^(m+1), decided exactly."""
    z = y * y / abs(y.norm())
    m = math.floor(_log_abs_ratio(y) / log_unit4)
    while quad_sign(z - unit4 ** m, 1) < 0:
        m -= 1
    while quad_sign(z - unit4 ** (m + 1), 1) >= 0:
        m += 1
    return m


class _UnitPowers:
    def __init__(self, ctx: FFormContext):
        self.ctx = ctx
        self.cache: Dict[Tuple[int, int], Quaternion] = {}

    def get(self, which: int, m: int) -> Quaternion:
        key = (which, m)
        if key not in self.cache:
            g, g_inv = (self.ctx.g1, self.ctx.g1_inv) if which == 1 else (self.ctx.g2, self.ctx.g2_inv)
            self.cache[key] = g ** m if m >= 0 else g_inv ** (-m)
        return self.cache[key]


def _unit_data(ctx: FFormContext):
    data = getattr(ctx, "_orbit_unit_data", None)
    if data is None:
        u14, u24 = ctx.u1 ** 4, ctx.u2 ** 4
        data = (u14, u24, math.log(u14.embed(1)), math.log(u24.embed(1)), _UnitPowers(ctx))
        ctx._orbit_unit_data = data
    return data


def unit_coordinates(b: Quaternion, ctx: FFormContext) -> Tuple[float, float]:
    """Floating-point (t1, t2) of ``b`` (for reporting)."""
    x = ctx.iota_L(b)
    out = []
    for y, u in ((norm_to_F1(x), ctx.u1), (norm_to_F2(x), ctx.u2)):
        out.append(_log_abs_ratio(y) / (4 * math.log(u.embed(1))))
    return out[0], out[1]


def canonicalize(b: Quaternion, ctx: FFormContext) -> OrbitRep:
    """Canonical representative of the +-1 x <g1> x <g2> orbit of ``b``."""
    if not b:
        raise ValueError("cannot canonicalize 0")
    u14, u24, lu14, lu24, powers = _unit_data(ctx)
    x = ctx.iota_L(b)
    m1 = _floor_log_ratio(norm_to_F1(x), u14, lu14)
    m2 = _floor_log_ratio(norm_to_F2(x), u24, lu24)
    c = b
    if m1:
        c = quat_mul(powers.get(1, -m1), c)
    if m2:
        c = quat_mul(c, powers.get(2, -m2))
    c = _sign_normalize(c)
    return OrbitRep(c, c.coords, unit_coordinates(c, ctx))


# ---------------------------------------------------------------------------
# lattice machinery


def _lll(G, delta: float = 0.99) -> np.ndarray:
    """LLL-reduce the basis with Gram matrix ``G``; returns the integer transform.

    Works over floats or, for badly conditioned forms, over Fractions.
    """
    G = [list(row) for row in (G.tolist() if isinstance(G, np.ndarray) else G)]
    n = len(G)
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def gso():
        mu = [[0] * n for _ in range(n)]
        B = [0] * n
        for i in range(n):
            for j in range(i):
                mu[i][j] = (G[i][j] - sum(mu[j][k] * mu[i][k] * B[k] for k in range(j))) / B[j]
            B[i] = G[i][i] - sum(mu[i][k] ** 2 * B[k] for k in range(i))
        return mu, B

    def reduce(k, j, q):  # b_k -= q b_j
        for i in range(n):
            G[i][k] -= q * G[i][j]
        for i in range(n):
            G[k][i] -= q * G[j][i]
        for row in U:
            row[k] -= q * row[j]

    def swap(k):  # b_{k-1} <-> b_k
        G[k - 1], G[k] = G[k], G[k - 1]
        for row in G:
            row[k - 1], row[k] = row[k], row[k - 1]
        for row in U:
            row[k - 1], row[k] = row[k], row[k - 1]

    k = 1
    for _ in range(10_000):
        if k >= n:
            break
        mu, B = gso()
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                reduce(k, j, q)
                mu, B = gso()
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            swap(k)
            k = max(k - 1, 1)
    return np.array(U, dtype=object)


def short_vectors(G: np.ndarray, bound: float) -> Iterator[Tuple[int, ...]]:
    """All nonzero integer vectors ``v`` with ``v^T G v <= bound`` (Fincke-Pohst)."""
    n = G.shape[0]
    Q = G.astype(float).copy()
    for i in range(n):
        for j in range(i + 1, n):
            Q[j, i] = Q[i, j]
            Q[i, j] = Q[i, j] / Q[i, i]
        for k in range(i + 1, n):
            for l in range(k, n):
                Q[k, l] -= Q[k, i] * Q[i, l]
    diag = [Q[i, i] for i in range(n)]
    upper = [[Q[i, j] for j in range(n)] for i in range(n)]
    x = [0] * n

    def rec(i: int, remaining: float):
        centre = -sum(upper[i][j] * x[j] for j in range(i + 1, n))
        r = math.sqrt(max(remaining, 0.0) / diag[i])
        lo, hi = math.ceil(centre - r - 1e-12), math.floor(centre + r + 1e-12)
        for v in range(lo, hi + 1):
            x[i] = v
            rem = remaining - diag[i] * (v - centre) ** 2
            if rem < -1e-9 * (1 + bound):
                continue
            if i == 0:
                if any(x):
                    yield tuple(x)
            else:
                yield from rec(i - 1, rem)
        x[i] = 0

    yield from rec(n - 1, bound)


def _int_form(F) -> Tuple[List[List[int]], int]:
    den = 1
    for row in F:
        for c in row:
            den = den * c.denominator // math.gcd(den, c.denominator)
    return [[int(c * den) for c in row] for row in F], den


def _qform(F: List[List[int]], v) -> int:
    return sum(F[i][j] * v[i] * v[j] for i in range(4) for j in range(4))


class OrbitEnumerator:
    """Finds all orbits with ``nrd <= n_max`` in one pass and caches them."""

    def __init__(self, ctx: FFormContext, box_slack: float = DEFAULT_BOX_SLACK):
        self.ctx = ctx
        self.box_slack = box_slack
        order = ctx.order
        Bas = order.matrix
        K = linalg.matmul(ctx.M_inv, Bas)  # O-coordinates -> L-coordinates
        self.K = K
        # integer Gram matrices for nrd and for trd(w1 b w2 conj(b))
        Nq = linalg.matmul(linalg.matmul(linalg.transpose(Bas), norm_form_matrix(ctx.algebra)), Bas)
        self.nrd_form, self.nrd_den = _int_form(Nq)
        cols = [quat_mul(quat_mul(ctx.w1, e), ctx.w2).coords for e in order.basis]
        A = linalg.transpose(cols)  # b (in O-coords) -> w1 b w2 (in 1,i,j,k coords)
        Gtr = [[2 * c for c in row] for row in norm_form_matrix(ctx.algebra)]
        T = linalg.matmul(linalg.matmul(linalg.transpose(A), Gtr), Bas)
        Tsym = [[(T[i][j] + T[j][i]) / 2 for j in range(4)] for i in range(4)]
        self.tw_form, self.tw_den = _int_form(Tsym)
        self.unit_logs = unit_log_data(ctx)
        self.alpha_abs = (abs(ctx.alpha.embed(1)), abs(ctx.alpha.embed(-1)))
        # A conjugated or otherwise skewed order basis makes the float forms
        # useless, so reduce once exactly at the middle of the strip; the
        # cells then work in the reduced coordinates y, with v = U0 y.
        self.U0 = self._prereduce()
        KU = linalg.matmul(K, self.U0.tolist())
        r1, r2 = math.sqrt(ctx.D1), math.sqrt(ctx.D2)
        V = np.array([[1.0, p.s1 * r1, p.s2 * r2, p.s1 * p.s2 * r1 * r2] for p in PLACES])
        self.Lam = V @ np.array([[float(c) for c in row] for row in KU])
        self._cache: Dict[float, Tuple[int, Dict[int, List[OrbitRep]]]] = {}

    def _prereduce(self) -> np.ndarray:
        def root(D, bits=200):
            return Fraction(math.isqrt(D << (2 * bits)), 1 << bits)

        r1, r2 = root(self.ctx.D1), root(self.ctx.D2)
        V = [[1, p.s1 * r1, p.s2 * r2, p.s1 * p.s2 * r1 * r2] for p in PLACES]
        Lam = linalg.matmul(V, self.K)
        L1, L2 = self.unit_logs.log_u1, self.unit_logs.log_u2
        d1, d2 = L1 + L2, L1 - L2  # t = (1/2, 1/2)
        a_s, a_t = self.alpha_abs
        W = [Fraction(w) for w in (a_s * math.exp(-d1), a_t * math.exp(-d2), a_t * math.exp(d2), a_s * math.exp(d1))]
        G = [
            [sum((W[p] * Lam[p][i] * Lam[p][j] for p in range(4)), Fraction(0)) for j in range(4)]
            for i in range(4)
        ]
        return _lll(G)

    # exact invariants from O-coordinates
    def nrd(self, v) -> Fraction:
        return Fraction(_qform(self.nrd_form, v), self.nrd_den)

    def qF_positive(self, v) -> bool:
        n = _qform(self.nrd_form, v)
        if n <= 0:
            return False
        t = _qform(self.tw_form, v)
        # q_F = nrd/2 + (tw/(4D)) sqrt(D): totally positive iff 4 D nrd^2 > tw^2
        return 4 * self.ctx.D * n * n * self.tw_den ** 2 > t * t * self.nrd_den ** 2

    def cells(self, box_scale: float = 1.0):
        """Yield ``(d1c, d2c, spread)`` for cells covering t in [-s*delta, 1 + s*delta]^2."""
        L1, L2 = self.unit_logs.log_u1, self.unit_logs.log_u2
        lo, hi = -self.box_slack * box_scale, 1 + self.box_slack * box_scale
        h1, h2 = _CELL_SPREAD / (4 * L1), _CELL_SPREAD / (4 * L2)
        m1 = max(1, math.ceil((hi - lo) / (2 * h1)))
        m2 = max(1, math.ceil((hi - lo) / (2 * h2)))
        w1, w2 = (hi - lo) / m1, (hi - lo) / m2
        spread = L1 * w1 + L2 * w2
        for a in range(m1):
            t1 = lo + (a + 0.5) * w1
            for c in range(m2):
                t2 = lo + (c + 0.5) * w2
                yield 2 * L1 * t1 + 2 * L2 * t2, 2 * L1 * t1 - 2 * L2 * t2, spread

    def raw_points(self, n_max: int, box_scale: float = 1.0) -> Dict[Tuple[int, ...], Quaternion]:
        """Distinct lattice elements with 1 <= nrd <= n_max and q_F >> 0 found in the cells."""
        a_s, a_t = self.alpha_abs
        found: Dict[Tuple[int, ...], Quaternion] = {}
        seen = set()
        order = self.ctx.order
        for d1, d2, spread in self.cells(box_scale):
            # places (++), (+-), (-+), (--)
            W = np.array([a_s * math.exp(-d1), a_t * math.exp(-d2), a_t * math.exp(d2), a_s * math.exp(d1)])
            G = self.Lam.T @ (W[:, None] * self.Lam)
            U = _lll(G)
            Gr = np.array(U.T.dot(G.astype(object)).dot(U), dtype=float)
            bound = 2 * n_max * math.cosh(spread) * box_scale ** 2 * (1 + 1e-9) + 1e-9
            Ul = self.U0.dot(U).tolist()
            for y in short_vectors(Gr, bound):
                v = tuple(int(sum(Ul[i][j] * y[j] for j in range(4))) for i in range(4))
                if v in seen:
                    continue
                seen.add(v)
                nv = self.nrd(v)
                if nv < 1 or nv > n_max or nv.denominator != 1:
                    continue
                if not self.qF_positive(v):
                    continue
                found[v] = order.element(v)
        return found

    def orbits_up_to(self, n_max: int, box_scale: float = 1.0) -> Dict[int, List[OrbitRep]]:
        cached = self._cache.get(box_scale)
        if cached is not None and cached[0] >= n_max:
            return {n: reps for n, reps in cached[1].items() if n <= n_max}
        if n_max < 1:
            return {}
        by_key: Dict[Tuple, OrbitRep] = {}
        for b in self.raw_points(n_max, box_scale).values():
            rep = canonicalize(b, self.ctx)
            by_key.setdefault(rep.key, rep)
        out: Dict[int, List[OrbitRep]] = {n: [] for n in range(1, n_max + 1)}
        for rep in by_key.values():
            out[rep.n].append(rep)
        for reps in out.values():
            reps.sort(key=lambda r: r.key)
        self._cache[box_scale] = (n_max, out)
        return out

    def orbits(self, n: int, box_scale: float = 1.0) -> List[OrbitRep]:
        """Orbits of norm ``n``; a cache miss enumerates up to the next power of two."""
        cached = self._cache.get(box_scale)
        if cached is None or cached[0] < n:
            self.orbits_up_to(max(8, 1 << (n - 1).bit_length()), box_scale)
        return self._cache[box_scale][1][n]


def enumerator(ctx: FFormContext, box_slack: Optional[float] = None) -> OrbitEnumerator:
    if box_slack is None:
        box_slack = getattr(ctx, "box_slack", DEFAULT_BOX_SLACK)
    slack = box_slack
    cache = ctx.__dict__.setdefault("_enumerators", {})
    if slack not in cache:
        cache[slack] = OrbitEnumerator(ctx, slack)
    return cache[slack]


def _check_n(n) -> int:
    if isinstance(n, bool):
        raise TypeError("n must be a number")
    q = Fraction(n)
    if q.denominator != 1:
        raise ValueError(f"n = {n} is not an integer")
    return int(q)


def enumerate_orbits(n, ctx: FFormContext, box_slack: Optional[float] = None) -> List[OrbitRep]:
    """Canonical representatives of the orbits with nrd(b) = n and q_F(b) >> 0."""
    n = _check_n(n)
    if n <= 0:
        return []
    return enumerator(ctx, box_slack).orbits(n)


def enumerate_orbits_oracle(
    n, ctx: FFormContext, box_scale: float = 1.0, canonical: bool = True, box_slack: Optional[float] = None
):
    """Same search with every bound scaled by ``box_scale``.

    With ``canonical=False`` returns the distinct raw lattice elements found,
    before any quotienting.
    """
    if box_scale < 1:
        raise ValueError("box_scale must be >= 1")
    n = _check_n(n)
    if n <= 0:
        return []
    en = enumerator(ctx, box_slack)
    if not canonical:
        return [b for b in en.raw_points(n, box_scale).values() if b.nrd() == n]
    return en.orbits(n, box_scale)
