"""Binomial coefficients and Pochhammer symbols over Z/p^e.

Rational upper arguments go through a falling-factorial product of residues
times a precomputed inverse-factorial unit (no per-call rational arithmetic);
integer arguments up to 2p-2 go through the stripped factorial tables so the
single hidden factor p survives reduction mod p^e.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import KTooLarge, NotPIntegral, RangeError
from .modring import PrimeContext, Rational, ResidueZ, ValuedResidue


def ap_of(a: Rational, ctx: PrimeContext) -> int:
    """The canonical residue of a mod p, in [0, p-1]."""
    a = Fraction(a)
    p = ctx.p
    if a.denominator % p == 0:
        raise NotPIntegral(f"{a} has denominator divisible by {p}")
    return a.numerator * pow(a.denominator, -1, p) % p


def binom_rational(a: Rational, k: int, ctx: PrimeContext) -> ResidueZ:
    """C(a, k) = a(a-1)...(a-k+1)/k! mod p^e for p-integral rational a.

    Restricted to 0 <= k <= p-1 so that k! stays a unit; the result is a
    plain residue (it may well be divisible by p, which needs no stripping
    because nothing ever divides by it).
    """
    if not 0 <= k < ctx.p:
        raise KTooLarge(f"k must be in [0, {ctx.p - 1}], got {k}")
    a = Fraction(a)
    if a.denominator % ctx.p == 0:
        raise NotPIntegral(f"{a} has denominator divisible by {ctx.p}")
    m = ctx.modulus
    ah = a.numerator * pow(a.denominator, -1, m) % m
    num = 1
    for i in range(k):
        num = num * (ah - i) % m
    return ResidueZ(num * ctx.inv_fact_units[k], ctx)


def pochhammer_rational(a: Rational, k: int, ctx: PrimeContext) -> ResidueZ:
    """Rising factorial (a)_k = a(a+1)...(a+k-1) mod p^e."""
    a = Fraction(a)
    if a.denominator % ctx.p == 0:
        raise NotPIntegral(f"{a} has denominator divisible by {ctx.p}")
    m = ctx.modulus
    ah = a.numerator * pow(a.denominator, -1, m) % m
    num = 1
    for i in range(k):
        num = num * (ah + i) % m
    return ResidueZ(num, ctx)


def central_binom(k: int, ctx: PrimeContext) -> ResidueZ:
    """C(2k, k) mod p^e via stripped factorials, for 0 <= k <= p-1.

    The p-divisibility for k > p/2 emerges exactly: (2k)! carries one factor
    p there, which is re-applied after the unit division by (k!)^2.
    """
    if not 0 <= k < ctx.p:
        raise KTooLarge(f"k must be in [0, {ctx.p - 1}], got {k}")
    m = ctx.modulus
    ik = ctx.inv_fact_units[k]
    u = ctx.fact_units[2 * k] * ik % m * ik % m
    v = ctx.fact_valuations[2 * k]
    if v >= ctx.e:
        return ResidueZ(0, ctx)
    return ResidueZ(u * ctx.p**v, ctx)


def binom_int_valued(n: int, k: int, ctx: PrimeContext) -> ValuedResidue:
    """C(n, k) for 0 <= k <= n <= 2p-2, with its exact p-valuation stripped.

    In this range the valuation is 0 or 1; keeping it out of the unit makes
    division by k! with k >= p well defined mod p^e.
    """
    if not (0 <= k <= n <= 2 * ctx.p - 2):
        raise RangeError(f"need 0 <= k <= n <= {2 * ctx.p - 2}, got n={n}, k={k}")
    m = ctx.modulus
    fu, fv, ifu = ctx.fact_units, ctx.fact_valuations, ctx.inv_fact_units
    u = fu[n] * ifu[k] % m * ifu[n - k] % m
    v = fv[n] - fv[k] - fv[n - k]
    return ValuedResidue(u, v, ctx)
