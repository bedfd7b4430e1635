"""Exact big-rational ground truth, independent of the modular pipeline.

Dense polynomials in one variable over exact rationals carry the two sides
of the product-sum identity and its three-term recurrence certificate; the
remaining checks compare closed forms as exact fractions.  No floating
point anywhere, and no computer-algebra dependency.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import List, Tuple, Union

from .congruences import FamilyTag
from .errors import BoundExceeded, NotPIntegral
from .legendre import legendre_exact
from .modring import PrimeContext, Rational, ResidueZ

LEMMA_2_2_BOUND = 40
LEMMA_2_1_BOUND = 30
IDENTITY_1_7_BOUND = 200
REDUCE_P_BOUND = 512


class RatPoly:
    """Dense univariate polynomial over exact rationals.

    Coefficients are a trimmed tuple of Fractions, lowest degree first;
    instances are immutable and compare coefficientwise.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()) -> None:
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("RatPoly is immutable")

    @classmethod
    def zero(cls) -> "RatPoly":
        return cls(())

    @classmethod
    def one(cls) -> "RatPoly":
        return cls((1,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other):
        if not isinstance(other, RatPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RatPoly(out)

    def __sub__(self, other):
        if not isinstance(other, RatPoly):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "RatPoly":
        return RatPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RatPoly(())
            return RatPoly(tuple(c * other for c in self.coeffs))
        if not isinstance(other, RatPoly):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return RatPoly(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, ci in enumerate(self.coeffs):
            if ci:
                for j, cj in enumerate(other.coeffs):
                    if cj:
                        out[i + j] += ci * cj
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RatPoly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers need a non-negative integer")
        out = RatPoly.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, point: Rational) -> Fraction:
        point = Fraction(point)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return acc

    def __repr__(self) -> str:
        return f"RatPoly({list(self.coeffs)!r})"


def binom_frac(a: Rational, k: int) -> Fraction:
    """Exact C(a, k) for a rational (or integer) upper argument."""
    a = Fraction(a)
    num = Fraction(1)
    for i in range(k):
        num *= a - i
    return num / factorial(k)


@lru_cache(maxsize=None)
def _pair_poly(k: int) -> RatPoly:
    """C(a,k) * C(-1-a,k) as an exact polynomial in a (degree 2k)."""
    top = RatPoly.one()
    bot = RatPoly.one()
    for i in range(k):
        top = top * RatPoly((-i, 1))  # (a - i)
        bot = bot * RatPoly((-1 - i, -1))  # (-1 - a - i)
    return top * bot * Fraction(1, factorial(k) ** 2)


@lru_cache(maxsize=None)
def _sides(n: int) -> Tuple[RatPoly, RatPoly]:
    s1 = RatPoly.zero()
    for k in range(n + 1):
        s1 = s1 + _pair_poly(k) * _pair_poly(n - k)
    s2 = RatPoly.zero()
    for k in range(n + 1):
        c = comb(2 * k, k) * comb(k, n - k) * (-1) ** (n - k)
        if c:
            s2 = s2 + _pair_poly(k) * c
    return s1, s2


def lemma_2_2_sides(n: int, bound: int = LEMMA_2_2_BOUND) -> Tuple[RatPoly, RatPoly]:
    """Both sides of the convolution identity as exact polynomials in a.

    Side 1 convolves the C(a,k) C(-1-a,k) pairs; side 2 runs the
    C(2k,k)-weighted alternating form.  Comparing them coefficientwise is a
    complete proof of the identity for this n.
    """
    if not 0 <= n <= bound:
        raise BoundExceeded(f"n must be in [0, {bound}], got {n}")
    return _sides(n)


def zeilberger_certificate_check(n: int, side: int, bound: int = LEMMA_2_2_BOUND) -> bool:
    """Verify the certified three-term recurrence at n as a polynomial identity:

    n^3 S(n) = (2n-1)(n^2 - n - 2a(a+1)) S(n-1) + (n-1)(2a+n)(2a+2-n) S(n-2).
    """
    if not 2 <= n <= bound:
        raise BoundExceeded(f"n must be in [2, {bound}], got {n}")
    if side not in (1, 2):
        raise ValueError(f"side must be 1 or 2, got {side!r}")
    i = side - 1
    lhs = _sides(n)[i] * (n**3)
    q1 = RatPoly((n * n - n, -2, -2)) * (2 * n - 1)
    q2 = RatPoly((n, 2)) * RatPoly((2 - n, 2)) * (n - 1)
    rhs = q1 * _sides(n - 1)[i] + q2 * _sides(n - 2)[i]
    return lhs == rhs


def lemma_2_1_exact_check(n: int, bound: int = LEMMA_2_1_BOUND) -> bool:
    """Expand P_n(y)^2 with y^2 -> 1+4x symbolically and compare it with
    sum_k C(n,k) C(n+k,k) C(2k,k) x^k, coefficient by coefficient."""
    if not 0 <= n <= bound:
        raise BoundExceeded(f"n must be in [0, {bound}], got {n}")
    c = legendre_exact(n, bound=max(n, 1))
    sq = [Fraction(0)] * (2 * n + 1)
    for i, ci in enumerate(c):
        if ci:
            for j, cj in enumerate(c):
                if cj:
                    sq[i + j] += ci * cj
    if any(sq[j] for j in range(1, 2 * n + 1, 2)):  # parity must kill odd powers
        return False
    lhs = RatPoly.zero()
    base = RatPoly((1, 4))
    powt = RatPoly.one()
    for t in range(n + 1):
        if sq[2 * t]:
            lhs = lhs + powt * sq[2 * t]
        powt = powt * base
    rhs = RatPoly([comb(n, k) * comb(n + k, k) * comb(2 * k, k) for k in range(n + 1)])
    return lhs == rhs


def identity_1_7_check(k: int, bound: int = IDENTITY_1_7_BOUND) -> bool:
    """All four dictionary equalities at this k, as exact rationals."""
    if not 0 <= k <= bound:
        raise BoundExceeded(f"k must be in [0, {bound}], got {k}")
    c2 = comb(2 * k, k)
    c3 = comb(3 * k, k)
    c4 = comb(4 * k, 2 * k)
    c6 = comb(6 * k, 3 * k)
    return (
        binom_frac(Fraction(-1, 2), k) ** 2 == Fraction(c2 * c2, 16**k)
        and binom_frac(Fraction(-1, 3), k) * binom_frac(Fraction(-2, 3), k)
        == Fraction(c2 * c3, 27**k)
        and binom_frac(Fraction(-1, 4), k) * binom_frac(Fraction(-3, 4), k)
        == Fraction(c2 * c4, 64**k)
        and binom_frac(Fraction(-1, 6), k) * binom_frac(Fraction(-5, 6), k)
        == Fraction(c3 * c6, 432**k)
    )


def exact_reduce_sum(
    a: Rational,
    x: Rational,
    ctx: PrimeContext,
    which: Union[str, FamilyTag],
    max_p: int = REDUCE_P_BOUND,
) -> ResidueZ:
    """Ground truth: the designated truncated sum as one exact rational,
    then reduced mod p^e.

    ``which`` is "core", "plain", or a FamilyTag (whose sum ignores ``a``).
    Deliberately independent of the modular pipeline: exact fractions,
    integer binomials, and one final inversion.
    """
    p = ctx.p
    if p > max_p:
        raise BoundExceeded(f"exact summation is bounded at p <= {max_p}")
    x = Fraction(x)
    if x.denominator % p == 0:
        raise NotPIntegral(f"{x} has denominator divisible by {p}")
    total = Fraction(1)
    if isinstance(which, FamilyTag):
        xp = Fraction(1)
        for k in range(1, p):
            xp *= x
            total += which.numerator(k) * xp
    elif which in ("core", "plain"):
        a = Fraction(a)
        if a.denominator % p == 0:
            raise NotPIntegral(f"{a} has denominator divisible by {p}")
        c = Fraction(-1) - a
        b_a = Fraction(1)
        b_c = Fraction(1)
        xp = Fraction(1)
        for k in range(1, p):
            b_a = b_a * (a - k + 1) / k
            b_c = b_c * (c - k + 1) / k
            xp *= x
            t = b_a * b_c * xp
            if which == "core":
                t *= comb(2 * k, k)
            total += t
    else:
        raise ValueError(f"which must be 'core', 'plain' or a FamilyTag, got {which!r}")
    if total.denominator % p == 0:  # cannot happen for p-integral inputs
        raise NotPIntegral(f"sum {total} is not p-integral")
    m = ctx.modulus
    return ResidueZ(total.numerator * pow(total.denominator, -1, m) % m, ctx)


# Deterministic parameter grids for the modular-vs-exact equivalence sweeps;
# combinations whose denominators vanish mod p are skipped per prime.
GRID_A = (
    Fraction(0),
    Fraction(1),
    Fraction(-1, 2),
    Fraction(-1, 3),
    Fraction(-1, 4),
    Fraction(-1, 6),
    Fraction(2, 3),
    Fraction(7, 5),
    Fraction(-9, 4),
    Fraction(5),
)
GRID_X = (
    Fraction(0),
    Fraction(1),
    Fraction(-1),
    Fraction(1, 2),
    Fraction(-1, 3),
    Fraction(2, 5),
    Fraction(-7, 4),
    Fraction(9, 8),
    Fraction(3),
    Fraction(-5, 6),
)
