"""Context construction, residue arithmetic, valuations, roots, and F_p^2."""

import random
from fractions import Fraction

import pytest

from supercong.errors import (
    BadExponent,
    CompositeModulus,
    MixedContext,
    NotInvertible,
    NotPIntegral,
)
from supercong.modring import (
    PrimeContext,
    QuadExtElem,
    ResidueZ,
    ValuedResidue,
    is_prime,
    legendre_symbol,
    make_context,
    mod_inverse,
    quadext_mul,
    reduce_rational,
    sqrt_mod_p,
)

SMALL_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29)


def test_is_prime_agrees_with_trial_division():
    def trial(n):
        if n < 2:
            return False
        return all(n % d for d in range(2, int(n**0.5) + 1))

    for n in range(2000):
        assert is_prime(n) == trial(n), n


def test_is_prime_large_cases():
    assert is_prime(2**31 - 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2,3,5,7
    assert is_prime(99991)
    assert not is_prime(99991 * 99989)


def test_make_context_builds_factorial_tables():
    ctx = make_context(5, 2)
    assert ctx.modulus == 25
    assert (ctx.fact(4).unit, ctx.fact(4).valuation) == (24, 0)
    # 5! = 120 = 24 * 5
    assert (ctx.fact(5).unit, ctx.fact(5).valuation) == (24, 1)
    assert (ctx.fact(0).unit, ctx.fact(0).valuation) == (1, 0)


def test_make_context_rejects_bad_input():
    with pytest.raises(CompositeModulus):
        make_context(9, 2)
    with pytest.raises(CompositeModulus):
        make_context(2, 1)  # odd primes only
    with pytest.raises(BadExponent):
        make_context(5, 0)
    with pytest.raises(BadExponent):
        make_context(5, 4)


def test_fact_table_valuations_and_units():
    for p in (3, 7, 13):
        ctx = make_context(p, 2)
        for k in range(2 * p - 1):
            vr = ctx.fact(k)
            assert vr.unit % p != 0
            assert vr.valuation == (0 if k < p else 1)
    assert len(make_context(7, 2).fact_table) == 13


def test_fact_table_multiplicative_chain():
    for p in (5, 11, 17):
        ctx = make_context(p, 3)
        for k in range(1, 2 * p - 1):
            stepped = ctx.fact(k - 1) * k
            assert (stepped.unit, stepped.valuation) == (
                ctx.fact(k).unit,
                ctx.fact(k).valuation,
            )


def test_inv_fact_units_invert_units():
    ctx = make_context(11, 2)
    for k in range(2 * 11 - 1):
        assert ctx.fact_units[k] * ctx.inv_fact_units[k] % ctx.modulus == 1


def test_reduce_rational_examples():
    assert reduce_rational(Fraction(-1, 2), make_context(7, 2)).value == 24
    assert reduce_rational(Fraction(3), make_context(5, 2)).value == 3
    with pytest.raises(NotPIntegral):
        reduce_rational(Fraction(1, 5), make_context(5, 2))


def test_reduce_rational_is_a_ring_homomorphism():
    rng = random.Random(1001)
    for p in (5, 13, 29):
        for e in (1, 2, 3):
            ctx = make_context(p, e)
            for _ in range(40):
                dens = [d for d in range(1, 12) if d % p]
                q1 = Fraction(rng.randint(-50, 50), rng.choice(dens))
                q2 = Fraction(rng.randint(-50, 50), rng.choice(dens))
                assert (
                    reduce_rational(q1 * q2, ctx)
                    == reduce_rational(q1, ctx) * reduce_rational(q2, ctx)
                )
                assert (
                    reduce_rational(q1 + q2, ctx)
                    == reduce_rational(q1, ctx) + reduce_rational(q2, ctx)
                )


def test_mod_inverse_examples_and_involution():
    ctx = make_context(7, 2)
    assert mod_inverse(ctx.residue(2)).value == 25
    assert mod_inverse(ctx.residue(1)).value == 1
    with pytest.raises(NotInvertible):
        mod_inverse(make_context(5, 2).residue(5))
    rng = random.Random(7)
    for _ in range(50):
        v = rng.randrange(1, 49)
        if v % 7 == 0:
            continue
        r = ctx.residue(v)
        assert mod_inverse(mod_inverse(r)) == r
        assert (r * mod_inverse(r)).value == 1


def test_residue_arithmetic_and_context_mixing():
    ctx = make_context(7, 2)
    a = ctx.residue(40)
    b = ctx.residue(20)
    assert (a + b).value == 11
    assert (a - b).value == 20
    assert (a * b).value == 800 % 49
    assert (-a).value == 9
    assert (a ** 2).value == 1600 % 49
    assert int(a) == 40
    with pytest.raises(MixedContext):
        a + make_context(11, 2).residue(1)
    with pytest.raises(MixedContext):
        a * make_context(7, 1).residue(1)
    # equal (p, e) from distinct context objects interoperate
    assert a == PrimeContext(7, 2).residue(40)


def test_legendre_symbol_examples():
    ctx = make_context(7, 1)
    assert legendre_symbol(ctx.residue(2)) == 1  # 3^2 = 9 = 2
    assert legendre_symbol(ctx.residue(3)) == -1
    assert legendre_symbol(ctx.residue(0)) == 0


def test_legendre_symbol_matches_square_sets():
    for p in SMALL_PRIMES:
        ctx = make_context(p, 1)
        squares = {x * x % p for x in range(1, p)}
        for t in range(p):
            expected = 0 if t == 0 else (1 if t in squares else -1)
            assert legendre_symbol(ctx.residue(t)) == expected


def test_sqrt_mod_p_examples():
    ctx = make_context(7, 1)
    assert sqrt_mod_p(ctx.residue(2)).value == 3  # roots 3 and 4
    assert sqrt_mod_p(ctx.residue(0)).value == 0
    assert sqrt_mod_p(ctx.residue(3)) is None


def test_sqrt_mod_p_all_residues_small_primes():
    # hits both the p % 4 == 3 shortcut and the general iteration (13, 17, 29)
    for p in SMALL_PRIMES:
        ctx = make_context(p, 1)
        for t in range(p):
            s = sqrt_mod_p(ctx.residue(t))
            if legendre_symbol(ctx.residue(t)) == -1:
                assert s is None
            else:
                assert s.value * s.value % p == t
                assert s.value <= p - s.value  # deterministic smaller root


def test_sqrt_mod_p_requires_e1():
    with pytest.raises(BadExponent):
        sqrt_mod_p(make_context(7, 2).residue(2))


def test_valued_residue_basics():
    ctx = make_context(5, 2)
    vr = ValuedResidue.from_int(70, ctx)
    assert (vr.unit, vr.valuation) == (14, 1)
    assert ValuedResidue.from_int(0, ctx).is_zero
    assert ValuedResidue.exact_zero(ctx).is_zero
    assert vr.to_residue().value == 70 % 25
    # valuation >= e collapses to 0
    assert ValuedResidue(3, 2, ctx).to_residue().value == 0
    assert ValuedResidue(3, 1, ctx).to_residue().value == 15


def test_valued_residue_multiplication():
    ctx = make_context(5, 2)
    a = ValuedResidue.from_int(10, ctx)   # (2, 1)
    b = ValuedResidue.from_int(15, ctx)   # (3, 1)
    prod = a * b
    assert (prod.unit, prod.valuation) == (6, 2)
    assert (a * 3).unit == 6 and (a * 3).valuation == 1
    assert (a * ValuedResidue.exact_zero(ctx)).is_zero
    # nonzero elements never collapse to the zero flag
    assert not (a * b).is_zero


def test_quadext_defining_relation_and_identity():
    ctx = make_context(7, 1)
    root = QuadExtElem(0, 1, 3, ctx)
    sq = root * root
    assert (sq.a0, sq.a1) == (3, 0)
    one = QuadExtElem(1, 0, 3, ctx)
    x = QuadExtElem(4, 5, 3, ctx)
    assert one * x == x
    y = QuadExtElem(1, 1, 3, ctx)
    assert (y * y).a0 == 4 and (y * y).a1 == 2  # (1+sqrt3)^2 = 4 + 2 sqrt3
    assert quadext_mul(y, y) == y * y


def test_quadext_mixing_and_e_guard():
    ctx = make_context(7, 1)
    with pytest.raises(MixedContext):
        QuadExtElem(1, 0, 3, ctx) * QuadExtElem(1, 0, 5, ctx)
    with pytest.raises(MixedContext):
        QuadExtElem(1, 0, 3, ctx) * QuadExtElem(1, 0, 3, make_context(11, 1))
    with pytest.raises(BadExponent):
        QuadExtElem(1, 0, 3, make_context(7, 2))


def test_quadext_algebraic_properties():
    rng = random.Random(42)
    for p in (7, 11, 19):
        ctx = make_context(p, 1)
        d = ctx.nonresidue
        elems = [
            QuadExtElem(rng.randrange(p), rng.randrange(p), d, ctx) for _ in range(12)
        ]
        for i in range(0, 12, 3):
            x, y, z = elems[i], elems[i + 1], elems[i + 2]
            assert x * y == y * x
            assert (x * y) * z == x * (y * z)
            assert (x * y).norm() == x.norm() * y.norm() % p
            assert x * (y + z) == x * y + x * z


def test_nonresidue_is_smallest():
    assert make_context(5, 1).nonresidue == 2
    assert make_context(7, 1).nonresidue == 3
    assert make_context(11, 1).nonresidue == 2
    assert make_context(17, 1).nonresidue == 3


def test_context_equality_and_repr():
    assert make_context(7, 2) == make_context(7, 2)
    assert make_context(7, 2) != make_context(7, 1)
    assert hash(make_context(7, 2)) == hash(make_context(7, 2))
    assert "7" in repr(make_context(7, 2))
