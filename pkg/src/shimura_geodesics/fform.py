"""The F-valued quadratic form on B attached to a pair of embeddings.

Given embeddings ``sqrt(D1) -> w1`` and ``sqrt(D2) -> w2``, the algebra
``L = Q(sqrt D1) (x) Q(sqrt D2)`` acts on B by ``(x (x) y) . b = x b y`` and B
becomes a free L-module of rank one generated by 1.  Over the subfield
``F = Q(sqrt(D1 D2))`` the norm form lifts to ``q_F`` with
``Tr_{F/Q} q_F = nrd``, and ``b -> iota_L(b)`` (the unique ``x`` with
``x . 1 = b``) carries ``q_F`` to ``alpha * Nm_{L/F}`` where ``alpha = q_F(1)``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

from . import linalg
from .exact import (
    BiquadElem,
    QuadElem,
    RealPlace,
    distinguished_place,
    fundamental_tp_unit,
    totally_positive,
)
from .quaternion import (
    EichlerOrderLattice,
    EmbeddingData,
    QuatAlgebra,
    Quaternion,
    conj,
    embed_elem,
    optimal_conductor,
    quat_mul,
    trd,
)


class DegenerateConfiguration(ValueError):
    """1, w1, w2, w1*w2 do not span B."""


class FFormContext:
    """Everything derived from (B, O, embedding 1, embedding 2)."""

    def __init__(
        self,
        algebra: QuatAlgebra,
        order: EichlerOrderLattice,
        emb1: EmbeddingData,
        emb2: EmbeddingData,
        sign_convention: int = 1,
    ):
        if math.gcd(emb1.D, emb2.D) != 1:
            raise ValueError(f"D1 = {emb1.D} and D2 = {emb2.D} are not coprime")
        if sign_convention not in (1, -1):
            raise ValueError("sign_convention must be +1 or -1")
        self.algebra = algebra
        self.order = order
        self.emb1 = emb1
        self.emb2 = emb2
        self.sign_convention = sign_convention
        self.D1, self.D2 = emb1.D, emb2.D
        self.D = self.D1 * self.D2
        w1, w2 = emb1.w, emb2.w
        self.w1, self.w2 = w1, w2
        self.w12 = quat_mul(w1, w2)
        cols = [algebra.one, w1, w2, self.w12]
        self.M = linalg.transpose([c.coords for c in cols])
        try:
            self.M_inv = linalg.inverse(self.M)
        except ZeroDivisionError:
            raise DegenerateConfiguration("1, w1, w2, w1*w2 are linearly dependent") from None

        self.f1 = optimal_conductor(order, emb1)
        self.f2 = optimal_conductor(order, emb2)
        self.alpha = self.q_F(algebra.one)
        if self.alpha.trace() != 1:
            raise AssertionError("Tr(alpha) != 1")
        self.u1 = fundamental_tp_unit(self.D1, self.f1)
        self.u2 = fundamental_tp_unit(self.D2, self.f2)
        self.g1 = embed_elem(emb1, self.u1)
        self.g2 = embed_elem(emb2, self.u2)
        self.g1_inv = embed_elem(emb1, self.u1.inverse())
        self.g2_inv = embed_elem(emb2, self.u2.inverse())

    # -- variants --------------------------------------------------------

    def conjugated(self, u: Quaternion) -> "FFormContext":
        """Same data with both embeddings conjugated by ``u``."""
        return FFormContext(
            self.algebra, self.order, self.emb1.conjugated(u), self.emb2.conjugated(u), self.sign_convention
        )

    def swapped(self) -> "FFormContext":
        return FFormContext(self.algebra, self.order, self.emb2, self.emb1, self.sign_convention)

    def with_sign_convention(self, sign: int) -> "FFormContext":
        return FFormContext(self.algebra, self.order, self.emb1, self.emb2, sign)

    @property
    def level(self) -> int:
        return self.order.level()

    # -- the L-module structure -----------------------------------------

    def act_L(self, x: BiquadElem, b: Quaternion) -> Quaternion:
        c0, c1, c2, c3 = x.c
        w1, w2 = self.w1, self.w2
        w1b = quat_mul(w1, b)
        return c0 * b + c1 * w1b + c2 * quat_mul(b, w2) + c3 * quat_mul(w1b, w2)

    def iota_L(self, b: Quaternion) -> BiquadElem:
        return BiquadElem(linalg.matvec(self.M_inv, b.coords), self.D1, self.D2)

    # -- forms -------------------------------------------------------------

    @staticmethod
    def pair_Q(b1: Quaternion, b2: Quaternion) -> Fraction:
        """trd(b1 * conj(b2)), so that pair_Q(b, b) = 2 nrd(b)."""
        return trd(quat_mul(b1, conj(b2)))

    def pair_F(self, b1: Quaternion, b2: Quaternion) -> QuadElem:
        u = self.pair_Q(b1, b2) / 2
        twisted = quat_mul(quat_mul(self.w1, b1), self.w2)
        v = self.pair_Q(twisted, b2) / (2 * self.D)
        return QuadElem(u, v, self.D)

    def q_F(self, b: Quaternion) -> QuadElem:
        p = self.pair_F(b, b)
        return QuadElem(p.a / 2, p.b / 2, self.D)

    def qF_totally_positive(self, b: Quaternion) -> bool:
        return totally_positive(self.q_F(b))

    def varsigma(self, b: Quaternion, x: Optional[BiquadElem] = None) -> int:
        """Product over the two places of F of the sign of iota_L(b) at the
        extension with sqrt(D1) -> +sqrt(D1), times ``sign_convention``."""
        if not b:
            raise ValueError("varsigma needs b != 0")
        if not self.qF_totally_positive(b):
            raise ValueError("varsigma needs q_F(b) totally positive")
        if x is None:
            x = self.iota_L(b)
        s = x.sign_at(distinguished_place(1)) * x.sign_at(distinguished_place(-1))
        return s * self.sign_convention

    def varsigma_place(self, b: Quaternion, f_sign: int) -> int:
        """The single-place factor of varsigma (without sign_convention)."""
        return self.iota_L(b).sign_at(distinguished_place(f_sign))

    def place_values(self, b: Quaternion, f_sign: int):
        """Floats ``(b1, b2)``: iota_L(b) at the distinguished extension of the
        given place of F and at the other extension."""
        x = self.iota_L(b)
        return x.embed(RealPlace(1, f_sign)), x.embed(RealPlace(-1, -f_sign))

    def describe(self) -> str:
        return (
            f"B = ({self.algebra.a}, {self.algebra.b} | Q), D_B = {self.algebra.discriminant()}, "
            f"level N = {self.level}, D1 = {self.D1} (f1 = {self.f1}), D2 = {self.D2} (f2 = {self.f2}), "
            f"alpha = {self.alpha}"
        )
