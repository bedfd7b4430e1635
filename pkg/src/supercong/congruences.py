"""Truncated binomial-product sums over Z/p^e and the congruence checkers.

Sums iterate k with incremental term updates (falling products, power of x,
and per-family factorial ratios) on plain machine integers; stripped
p-valuations keep every value exact mod p^e.  Checkers wrap the sums into
:class:`CheckReport` records whose status follows one fixed rule.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, List, Tuple, Union

from .binomtab import ap_of
from .errors import (
    BadExponent,
    ExcludedU,
    NotPIntegral,
    RangeError,
    WrongResidueClass,
    ZeroM,
)
from .legendre import legendre_square_at_sqrt
from .modring import PrimeContext, Rational, ResidueZ, make_context, reduce_rational


class FamilyTag(enum.Enum):
    """The four binomial-product families with their parameter dictionary.

    Each family numerator equals C(2k,k) C(a,k) C(-1-a,k) scale^k for its
    (a, scale) pair, which is what makes family_sum(f, x) == core_sum(a_f,
    scale_f * x) a cross-check between two independent computation paths.
    """

    CUBE = ("cube", Fraction(-1, 2), 16)
    TWO_THREE = ("two_three", Fraction(-1, 3), 27)
    TWO_FOUR = ("two_four", Fraction(-1, 4), 64)
    THREE_SIX = ("three_six", Fraction(-1, 6), 432)

    def __init__(self, label: str, a: Fraction, scale: int) -> None:
        self.label = label
        self.a = a
        self.scale = scale

    def numerator(self, k: int) -> int:
        """Exact integer numerator of the k-th term."""
        if self is FamilyTag.CUBE:
            return comb(2 * k, k) ** 3
        if self is FamilyTag.TWO_THREE:
            return comb(2 * k, k) ** 2 * comb(3 * k, k)
        if self is FamilyTag.TWO_FOUR:
            return comb(2 * k, k) ** 2 * comb(4 * k, 2 * k)
        return comb(2 * k, k) * comb(3 * k, k) * comb(6 * k, 3 * k)


# Term ratio N_k / N_{k-1} = const * (c1*k-d1)(c2*k-d2)(c3*k-d3) / k^3,
# obtained by cancelling the even factorial factors.
_RATIO: Dict[FamilyTag, Tuple[int, int, int, int, int, int, int]] = {
    FamilyTag.CUBE: (8, 2, 1, 2, 1, 2, 1),
    FamilyTag.TWO_THREE: (6, 2, 1, 3, 1, 3, 2),
    FamilyTag.TWO_FOUR: (8, 4, 1, 2, 1, 4, 3),
    FamilyTag.THREE_SIX: (8, 6, 1, 6, 3, 6, 5),
}

# Largest factorial index a family numerator reaches, as a multiple of k.
_MAX_FACTOR: Dict[FamilyTag, int] = {
    FamilyTag.CUBE: 2,
    FamilyTag.TWO_THREE: 3,
    FamilyTag.TWO_FOUR: 4,
    FamilyTag.THREE_SIX: 6,
}


def core_sum(a: Rational, x: Rational, ctx: PrimeContext) -> ResidueZ:
    """sum_{k=0}^{p-1} C(2k,k) C(a,k) C(-1-a,k) x^k mod p^e.

    C(2k,k) comes stripped from the factorial tables; the rational binomials
    are falling products of residues divided by the unit k!.  At e == 1 the
    tail k > (p-1)/2 vanishes (p | C(2k,k)) and is skipped.
    """
    x = Fraction(x)
    m, p, e = ctx.modulus, ctx.p, ctx.e
    ah = reduce_rational(Fraction(a), ctx).value
    ch = (m - 1 - ah) % m
    xh = reduce_rational(x, ctx).value
    fu, ifu = ctx.fact_units, ctx.inv_fact_units
    total = 1
    fall_a = 1
    fall_c = 1
    xpow = 1
    kmax = p - 1 if e > 1 else (p - 1) // 2
    for k in range(1, kmax + 1):
        fall_a = fall_a * (ah - k + 1) % m
        fall_c = fall_c * (ch - k + 1) % m
        xpow = xpow * xh % m
        ifk = ifu[k]
        ifk2 = ifk * ifk % m
        t = fu[2 * k] * ifk2 % m * ifk2 % m
        t = t * fall_a % m * fall_c % m * xpow % m
        if 2 * k >= p:  # the single p factor of (2k)!
            t = t * p % m
        total = (total + t) % m
    return ResidueZ(total, ctx)


def plain_sum(a: Rational, x: Rational, ctx: PrimeContext) -> ResidueZ:
    """sum_{k=0}^{p-1} C(a,k) C(-1-a,k) x^k mod p^e."""
    x = Fraction(x)
    m = ctx.modulus
    ah = reduce_rational(Fraction(a), ctx).value
    ch = (m - 1 - ah) % m
    xh = reduce_rational(x, ctx).value
    ifu = ctx.inv_fact_units
    total = 1
    fall_a = 1
    fall_c = 1
    xpow = 1
    for k in range(1, ctx.p):
        fall_a = fall_a * (ah - k + 1) % m
        fall_c = fall_c * (ch - k + 1) % m
        xpow = xpow * xh % m
        ifk = ifu[k]
        total = (total + fall_a * fall_c % m * ifk % m * ifk % m * xpow) % m
    return ResidueZ(total, ctx)


def family_sum(f: FamilyTag, x: Rational, ctx: PrimeContext) -> ResidueZ:
    """sum_{k=0}^{p-1} N_f(k) x^k mod p^e by incremental term ratios.

    The stripped p-factors of the numerator accumulate in a valuation that
    never decreases (the ratio denominators k^3 stay units), so the loop can
    stop as soon as it reaches e.
    """
    xh = reduce_rational(Fraction(x), ctx).value
    m, p, e = ctx.modulus, ctx.p, ctx.e
    const, c1, d1, c2, d2, c3, d3 = _RATIO[f]
    fu, ifu = ctx.fact_units, ctx.inv_fact_units
    pp = (1, p, p * p)
    total = 1
    u = 1
    v = 0
    for k in range(1, p):
        f1 = c1 * k - d1
        f2 = c2 * k - d2
        f3 = c3 * k - d3
        if f1 % p == 0 or f2 % p == 0 or f3 % p == 0:  # rare: strip p factors
            while f1 % p == 0:
                f1 //= p
                v += 1
            while f2 % p == 0:
                f2 //= p
                v += 1
            while f3 % p == 0:
                f3 //= p
                v += 1
            if v >= e:  # v never decreases, so neither can any later term
                break
        w = const * f1 * f2 * f3 % m
        ik = ifu[k] * fu[k - 1] % m  # 1/k mod p^e
        ik2 = ik * ik % m
        u = u * w % m * ik2 % m * ik % m * xh % m
        total = (total + u * pp[v]) % m
    return ResidueZ(total, ctx)


def family_sum_via_tables(f: FamilyTag, x: Rational, ctx: PrimeContext) -> ResidueZ:
    """Same sum from extended factorial tables; kept as the second path."""
    xh = reduce_rational(Fraction(x), ctx).value
    m, p, e = ctx.modulus, ctx.p, ctx.e
    fu, fv, ifu = ctx.extended_factorials(_MAX_FACTOR[f] * (p - 1))
    pp = (1, p, p * p)
    total = 1
    xpow = 1
    for k in range(1, p):
        xpow = xpow * xh % m
        ik = ifu[k]
        if f is FamilyTag.CUBE:
            u2 = fu[2 * k]
            ik2 = ik * ik % m
            u = u2 * u2 % m * u2 % m * ik2 % m * ik2 % m * ik2 % m
            v = 3 * fv[2 * k]
        elif f is FamilyTag.TWO_THREE:
            ik2 = ik * ik % m
            u = fu[2 * k] * fu[3 * k] % m * ik2 % m * ik2 % m * ik % m
            v = fv[2 * k] + fv[3 * k]
        elif f is FamilyTag.TWO_FOUR:
            ik2 = ik * ik % m
            u = fu[4 * k] * ik2 % m * ik2 % m
            v = fv[4 * k]
        else:
            u = fu[6 * k] * ifu[3 * k] % m * ik % m * ik % m * ik % m
            v = fv[6 * k] - fv[3 * k]
        if v >= e:
            continue
        total = (total + u * xpow % m * pp[v]) % m
    return ResidueZ(total, ctx)


# ---------------------------------------------------------------------------
# Check reports

_STATUS_VERIFIED = "verified"
_STATUS_VACUOUS = "vacuous"
_STATUS_FAILED = "FAILED"


def _status_of(hypothesis: bool, conclusion: bool) -> str:
    if not hypothesis:
        return _STATUS_VACUOUS
    return _STATUS_VERIFIED if conclusion else _STATUS_FAILED


@dataclass(frozen=True)
class CheckReport:
    """One checker outcome.

    ``status`` is forced by the two booleans: FAILED iff the hypothesis holds
    and the conclusion does not, vacuous iff the hypothesis fails.  Rational
    parameters are serialized as "num/den" strings for lossless round-trips.
    """

    theorem: str
    p: int
    e: int
    params: Dict[str, str]
    hypothesis_holds: bool
    conclusion_holds: bool
    residues: Dict[str, int]
    status: str

    def __post_init__(self) -> None:
        expected = _status_of(self.hypothesis_holds, self.conclusion_holds)
        if self.status != expected:
            raise ValueError(
                f"status {self.status!r} contradicts hypothesis/conclusion "
                f"({self.hypothesis_holds}, {self.conclusion_holds})"
            )

    def as_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "p": self.p,
            "e": self.e,
            "params": dict(self.params),
            "hypothesis_holds": self.hypothesis_holds,
            "conclusion_holds": self.conclusion_holds,
            "residues": dict(self.residues),
            "status": self.status,
        }


def _report(
    theorem: str,
    p: int,
    e: int,
    params: Dict[str, str],
    hypothesis: bool,
    conclusion: bool,
    residues: Dict[str, int],
) -> CheckReport:
    return CheckReport(
        theorem,
        p,
        e,
        params,
        hypothesis,
        conclusion,
        residues,
        _status_of(hypothesis, conclusion),
    )


def format_rational(q: Rational) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _require_e(ctx: PrimeContext, e: int) -> None:
    if ctx.e != e:
        raise BadExponent(f"this check runs at e == {e}, got context {ctx}")


# ---------------------------------------------------------------------------
# Checkers

def check_theorem_2_1(a: Rational, x: Rational, ctx: PrimeContext) -> CheckReport:
    """Triple congruence mod p: the truncated core sum equals the squared
    Legendre value at sqrt(1-4x) for both the index <a>_p and its mirror."""
    _require_e(ctx, 1)
    a = Fraction(a)
    x = Fraction(x)
    s = core_sum(a, x, ctx).value
    n = ap_of(a, ctx)
    r1 = legendre_square_at_sqrt(n, -x, ctx).value
    r2 = legendre_square_at_sqrt(ctx.p - 1 - n, -x, ctx).value
    return _report(
        "thm2.1",
        ctx.p,
        1,
        {"a": format_rational(a), "x": format_rational(x)},
        True,
        s == r1 == r2,
        {"sum": s, "legendre_sq": r1, "legendre_sq_mirror": r2},
    )


def check_theorem_2_2(a: Rational, x: Rational, ctx: PrimeContext) -> CheckReport:
    """Squared plain sum against the core sum at x(1-x), mod p^2."""
    _require_e(ctx, 2)
    a = Fraction(a)
    x = Fraction(x)
    lhs = plain_sum(a, x, ctx).value ** 2 % ctx.modulus
    rhs = core_sum(a, x * (1 - x), ctx).value
    return _report(
        "thm2.2",
        ctx.p,
        2,
        {"a": format_rational(a), "x": format_rational(x)},
        True,
        lhs == rhs,
        {"plain_sum_sq": lhs, "core_sum": rhs},
    )


def check_theorem_2_3(a: Rational, m: Rational, ctx: PrimeContext) -> CheckReport:
    """Vanishing mod p of the core sum at 1/m must lift to vanishing mod p^2."""
    _require_e(ctx, 2)
    a = Fraction(a)
    m = Fraction(m)
    if m.denominator % ctx.p == 0:
        raise NotPIntegral(f"{m} has denominator divisible by {ctx.p}")
    if m.numerator % ctx.p == 0:
        raise ZeroM(f"m = {m} vanishes mod {ctx.p}")
    s = core_sum(a, 1 / m, ctx).value
    hyp = s % ctx.p == 0
    return _report(
        "thm2.3",
        ctx.p,
        2,
        {"a": format_rational(a), "m": format_rational(m)},
        hyp,
        s == 0,
        {"sum_mod_p2": s, "sum_mod_p": s % ctx.p},
    )


def check_corollary_2_2(
    f: FamilyTag, m: Rational, ctx: PrimeContext
) -> CheckReport:
    """The mod-p to mod-p^2 lift for one binomial-product family at 1/m."""
    _require_e(ctx, 2)
    m = Fraction(m)
    if m.denominator % ctx.p == 0:
        raise NotPIntegral(f"{m} has denominator divisible by {ctx.p}")
    if m.numerator % ctx.p == 0:
        raise ZeroM(f"m = {m} vanishes mod {ctx.p}")
    s = family_sum(f, 1 / m, ctx).value
    hyp = s % ctx.p == 0
    return _report(
        "cor2.2",
        ctx.p,
        2,
        {"family": f.label, "m": format_rational(m)},
        hyp,
        s == 0,
        {"sum_mod_p2": s, "sum_mod_p": s % ctx.p},
    )


def check_theorem_2_4(part: str, u: Rational, ctx: PrimeContext) -> CheckReport:
    """The two rational-argument implications between family sums.

    Part i: vanishing mod p at u^2/(1-4u)^3 forces vanishing mod p^2 at
    -u/(1-16u)^3 (family C(2k,k)^2 C(3k,k)), for u outside {1/4, 1/16} mod p.
    Part ii: same with C(2k,k)^2 C(4k,2k), arguments u^3/(1+3u)^4 and
    u/(1+27u)^4, excluding u in {-1/3, -1/27} mod p.
    """
    _require_e(ctx, 2)
    if part not in ("i", "ii"):
        raise ValueError(f"part must be 'i' or 'ii', got {part!r}")
    u = Fraction(u)
    if part == "i":
        tag = FamilyTag.TWO_THREE
        excluded = (Fraction(1, 4), Fraction(1, 16))
    else:
        tag = FamilyTag.TWO_FOUR
        excluded = (Fraction(-1, 3), Fraction(-1, 27))
    up = ap_of(u, ctx)
    for r in excluded:
        if r.denominator % ctx.p == 0:
            continue  # that residue class does not exist mod p
        if up == ap_of(r, ctx):
            raise ExcludedU(f"u = {u} is congruent to {r} mod {ctx.p}")
    if part == "i":
        hyp_x = u**2 / (1 - 4 * u) ** 3
        con_x = -u / (1 - 16 * u) ** 3
    else:
        hyp_x = u**3 / (1 + 3 * u) ** 4
        con_x = u / (1 + 27 * u) ** 4
    hyp_val = family_sum(tag, hyp_x, ctx).value % ctx.p
    con_val = family_sum(tag, con_x, ctx).value
    return _report(
        f"thm2.4{part}",
        ctx.p,
        2,
        {"u": format_rational(u)},
        hyp_val == 0,
        con_val == 0,
        {"hypothesis_sum_mod_p": hyp_val, "conclusion_sum_mod_p2": con_val},
    )


def check_rodriguez_villegas(ctx: PrimeContext) -> List[CheckReport]:
    """The three residue-class zero congruences mod p^2.

    C(2k,k)^2 C(3k,k)/108^k for p = 2 mod 3; C(2k,k)^2 C(4k,2k)/256^k for
    p = 5, 7 mod 8; C(2k,k) C(3k,k) C(6k,3k)/1728^k for p = 3 mod 4.  The sum
    is evaluated for every prime; out-of-class instances come back vacuous.
    """
    _require_e(ctx, 2)
    p = ctx.p
    if p <= 3:
        raise RangeError("these congruences are stated for p > 3")
    cases = (
        (FamilyTag.TWO_THREE, 108, p % 3 == 2),
        (FamilyTag.TWO_FOUR, 256, p % 8 in (5, 7)),
        (FamilyTag.THREE_SIX, 1728, p % 4 == 3),
    )
    out = []
    for tag, scale, in_class in cases:
        s = family_sum(tag, Fraction(1, scale), ctx).value
        out.append(
            _report(
                "eq1.2",
                p,
                2,
                {"family": tag.label, "x": f"1/{scale}"},
                in_class,
                s == 0,
                {"sum_mod_p2": s},
            )
        )
    return out


def check_corollary_2_3(p: int) -> Tuple[CheckReport, CheckReport]:
    """The two derived zero congruences for the C(2k,k)^2 C(3k,k) family:
    1/1458 vanishes mod p^2 when p = 5 mod 6, 1/3375 when p = 11, 14 mod 15."""
    if p <= 3:
        raise RangeError("stated for p > 3")
    ctx = make_context(p, 2)
    out = []
    for scale, in_class in ((1458, p % 6 == 5), (3375, p % 15 in (11, 14))):
        params = {"family": FamilyTag.TWO_THREE.label, "x": f"1/{scale}"}
        if scale % p == 0:  # 1/scale not p-integral; never in class then
            out.append(_report("cor2.3", p, 2, params, False, True, {}))
            continue
        s = family_sum(FamilyTag.TWO_THREE, Fraction(1, scale), ctx).value
        out.append(_report("cor2.3", p, 2, params, in_class, s == 0, {"sum_mod_p2": s}))
    return out[0], out[1]


def check_identity_1_3(m: Rational, ctx: PrimeContext) -> CheckReport:
    """C(2k,k)^3/m^k summed mod p^2 against the squared Legendre value
    P_{(p-1)/2}(sqrt(1-64/m))^2."""
    _require_e(ctx, 2)
    p = ctx.p
    if p <= 3:
        raise RangeError("stated for p > 3")
    m = Fraction(m)
    if m.denominator % p == 0:
        raise NotPIntegral(f"{m} has denominator divisible by {p}")
    if m.numerator % p == 0:
        raise ZeroM(f"m = {m} vanishes mod {p}")
    lhs = family_sum(FamilyTag.CUBE, 1 / m, ctx).value
    rhs = legendre_square_at_sqrt((p - 1) // 2, Fraction(-16) / m, ctx).value
    return _report(
        "eq1.3",
        p,
        2,
        {"m": format_rational(m)},
        True,
        lhs == rhs,
        {"family_sum": lhs, "legendre_sq": rhs},
    )


def explore_remark_2_3(p: int) -> CheckReport:
    """Evaluate the 1/1458 family sum mod p^3 for p = 5 mod 6 and record
    whether it vanishes.  Conjecture-grade: callers surface non-vanishing
    records but never turn them into failures."""
    if p % 6 != 5:
        raise WrongResidueClass(f"p = {p} is not 5 mod 6")
    ctx = make_context(p, 3)
    s = family_sum(FamilyTag.TWO_THREE, Fraction(1, 1458), ctx).value
    return _report(
        "remark2.3",
        p,
        3,
        {"family": FamilyTag.TWO_THREE.label, "x": "1/1458"},
        True,
        s == 0,
        {"sum_mod_p3": s},
    )
