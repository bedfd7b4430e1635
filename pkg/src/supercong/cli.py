"""Command-line front end: theorem checks over prime ranges, conjecture
exploration, exact-oracle runs, and JSONL/CSV report emission.

Work is distributed over primes: each worker owns its PrimeContext, results
are merged and sorted by (p, theorem, parameters), so report files are
byte-identical regardless of --jobs.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import partial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import congruences as cg
from . import oracle
from .errors import ExcludedU, SupercongError
from .modring import make_context

log = logging.getLogger("supercong")

_LOG_LEVELS = {
    "quiet": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")

CHECK_THEOREMS = (
    "thm2.1",
    "thm2.2",
    "thm2.3",
    "thm2.4i",
    "thm2.4ii",
    "cor2.2",
    "cor2.3",
    "eq1.2",
    "eq1.3",
)

# Parameters each theorem needs when not running --exhaustive-am, and the
# smallest prime its statement covers.
_THEOREM_PARAMS: Dict[str, Tuple[str, ...]] = {
    "thm2.1": ("a", "x"),
    "thm2.2": ("a", "x"),
    "thm2.3": ("a", "m"),
    "thm2.4i": ("u",),
    "thm2.4ii": ("u",),
    "cor2.2": ("m",),
    "cor2.3": (),
    "eq1.2": (),
    "eq1.3": ("m",),
}
_THEOREM_MIN_P = {"cor2.3": 5, "eq1.2": 5, "eq1.3": 5}


def primes_in_range(lo: int, hi: int) -> List[int]:
    """Odd primes in [lo, hi], by sieve."""
    if hi < 3:
        return []
    sieve = bytearray((1,)) * (hi + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(hi**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, hi + 1, i)))
    start = max(lo, 3)
    return [n for n in range(start, hi + 1) if sieve[n] and n != 2]


def parse_rational(text: str) -> Fraction:
    """CLI rationals: optional sign, "num/den" or a bare integer."""
    if not _RATIONAL_RE.match(text):
        raise argparse.ArgumentTypeError(f"not a rational 'num/den': {text!r}")
    q = Fraction(text)
    return q


def parse_prime_range(text: str) -> Tuple[int, int]:
    """Inclusive prime range "lo..hi"."""
    m = re.match(r"^(\d+)\.\.(\d+)$", text)
    if not m:
        raise argparse.ArgumentTypeError(f"not a range 'lo..hi': {text!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range: {text!r}")
    return lo, hi


# ---------------------------------------------------------------------------
# Per-prime runners

def _reports_for_prime(
    p: int,
    theorem: str,
    params: Optional[Dict[str, Fraction]],
    exhaustive: bool,
) -> List[dict]:
    """All CheckReports (as dicts) for one theorem at one prime."""
    out: List[cg.CheckReport] = []
    if theorem == "thm2.1":
        ctx = make_context(p, 1)
        if exhaustive:
            for a in range(p):
                for x in range(p):
                    out.append(cg.check_theorem_2_1(a, x, ctx))
        else:
            out.append(cg.check_theorem_2_1(params["a"], params["x"], ctx))
    elif theorem == "thm2.2":
        ctx = make_context(p, 2)
        if exhaustive:
            for a in range(p):
                for x in range(p):
                    out.append(cg.check_theorem_2_2(a, x, ctx))
        else:
            out.append(cg.check_theorem_2_2(params["a"], params["x"], ctx))
    elif theorem == "thm2.3":
        ctx = make_context(p, 2)
        if exhaustive:
            for a in range(p):
                for m in range(1, p):
                    out.append(cg.check_theorem_2_3(a, m, ctx))
        else:
            out.append(cg.check_theorem_2_3(params["a"], params["m"], ctx))
    elif theorem in ("thm2.4i", "thm2.4ii"):
        part = "i" if theorem == "thm2.4i" else "ii"
        ctx = make_context(p, 2)
        if exhaustive:
            for u in range(p):
                try:
                    out.append(cg.check_theorem_2_4(part, u, ctx))
                except ExcludedU:
                    continue
        else:
            out.append(cg.check_theorem_2_4(part, params["u"], ctx))
    elif theorem == "cor2.2":
        ctx = make_context(p, 2)
        families = tuple(cg.FamilyTag)
        if exhaustive:
            for m in range(1, p):
                for f in families:
                    out.append(cg.check_corollary_2_2(f, m, ctx))
        else:
            for f in families:
                out.append(cg.check_corollary_2_2(f, params["m"], ctx))
    elif theorem == "cor2.3":
        out.extend(cg.check_corollary_2_3(p))
    elif theorem == "eq1.2":
        out.extend(cg.check_rodriguez_villegas(make_context(p, 2)))
    elif theorem == "eq1.3":
        ctx = make_context(p, 2)
        if exhaustive:
            for m in range(1, p):
                out.append(cg.check_identity_1_3(m, ctx))
        else:
            out.append(cg.check_identity_1_3(params["m"], ctx))
    else:
        raise ValueError(f"unknown theorem id {theorem!r}")
    log.debug("p=%d: %d report(s) for %s", p, len(out), theorem)
    return [r.as_dict() for r in out]


def _explore_for_prime(p: int) -> dict:
    return cg.explore_remark_2_3(p).as_dict()


def _family_residue(p: int, tag: cg.FamilyTag, x: Fraction, e: int) -> Tuple[int, int]:
    ctx = make_context(p, e)
    return p, cg.family_sum(tag, x, ctx).value


def _report_sort_key(d: dict):
    return (d["p"], d["theorem"], tuple(sorted(d["params"].items())))


def _resolve_jobs(jobs: Optional[int]) -> int:
    if jobs is None:
        jobs = os.cpu_count() or 1
    return max(1, jobs)


def _parallel_map(fn, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    # Small contiguous chunks keep the workers balanced when per-item cost
    # grows along the list (larger primes later); output order is restored
    # by the callers' sort.
    chunk = max(1, min(32, len(items) // (8 * jobs)))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


def run_checks(
    theorem: str,
    primes: Iterable[int],
    params: Optional[Dict[str, Fraction]] = None,
    exhaustive: bool = False,
    jobs: Optional[int] = None,
) -> List[dict]:
    """Run one theorem's checker over primes, in parallel, sorted output."""
    min_p = _THEOREM_MIN_P.get(theorem, 3)
    qualifying = [p for p in primes if p >= min_p]
    jobs = _resolve_jobs(jobs)
    log.info(
        "checking %s over %d prime(s) with %d job(s)", theorem, len(qualifying), jobs
    )
    fn = partial(
        _reports_for_prime, theorem=theorem, params=params, exhaustive=exhaustive
    )
    chunks = _parallel_map(fn, qualifying, jobs)
    reports = [r for chunk in chunks for r in chunk]
    reports.sort(key=_report_sort_key)
    return reports


def run_exploration(
    primes: Iterable[int], jobs: Optional[int] = None
) -> List[dict]:
    """remark2.3 residues mod p^3 over the qualifying primes (p = 5 mod 6)."""
    qualifying = [p for p in primes if p % 6 == 5]
    jobs = _resolve_jobs(jobs)
    log.info("exploring remark2.3 over %d prime(s)", len(qualifying))
    reports = _parallel_map(_explore_for_prime, qualifying, jobs)
    reports.sort(key=_report_sort_key)
    return reports


def sweep_family(
    tag: cg.FamilyTag,
    x: Fraction,
    primes: Sequence[int],
    e: int = 2,
    jobs: Optional[int] = None,
) -> List[Tuple[int, int]]:
    """One family sum at fixed x for every prime; (p, residue) pairs."""
    jobs = _resolve_jobs(jobs)
    fn = partial(_family_residue, tag=tag, x=Fraction(x), e=e)
    out = _parallel_map(fn, list(primes), jobs)
    out.sort()
    return out


# ---------------------------------------------------------------------------
# Report writers

def write_jsonl(reports: List[dict], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in reports:
            fh.write(json.dumps(r, sort_keys=True) + "\n")


_CSV_COLUMNS = (
    "theorem",
    "p",
    "e",
    "a",
    "x",
    "m",
    "u",
    "family",
    "hypothesis_holds",
    "conclusion_holds",
    "status",
    "residues",
)


def write_csv(reports: List[dict], path: str) -> None:
    """Flat projection of the JSONL records."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_CSV_COLUMNS)
        for r in reports:
            params = r["params"]
            residues = ";".join(f"{k}={v}" for k, v in sorted(r["residues"].items()))
            writer.writerow(
                (
                    r["theorem"],
                    r["p"],
                    r["e"],
                    params.get("a", ""),
                    params.get("x", ""),
                    params.get("m", ""),
                    params.get("u", ""),
                    params.get("family", ""),
                    r["hypothesis_holds"],
                    r["conclusion_holds"],
                    r["status"],
                    residues,
                )
            )


def _summarize(reports: List[dict]) -> Dict[str, int]:
    counts = {"verified": 0, "vacuous": 0, "FAILED": 0}
    for r in reports:
        counts[r["status"]] += 1
    return counts


# ---------------------------------------------------------------------------
# Commands

def _cmd_check(args: argparse.Namespace) -> int:
    theorem = args.theorem
    given = {
        name: value
        for name, value in (("a", args.a), ("x", args.x), ("m", args.m), ("u", args.u))
        if value is not None
    }
    needed = _THEOREM_PARAMS[theorem]
    if needed and not args.exhaustive_am:
        missing = [n for n in needed if n not in given]
        if missing:
            print(
                f"error: {theorem} needs --{' --'.join(missing)} "
                "(or --exhaustive-am)",
                file=sys.stderr,
            )
            return 2
    if args.exhaustive_am and given:
        print(
            "error: --exhaustive-am and explicit parameters are mutually exclusive",
            file=sys.stderr,
        )
        return 2
    primes = primes_in_range(*args.primes)
    reports = run_checks(
        theorem,
        primes,
        params=given or None,
        exhaustive=args.exhaustive_am,
        jobs=args.jobs,
    )
    counts = _summarize(reports)
    print(
        f"{theorem}: {len(reports)} check(s) over {len(primes)} prime(s) -- "
        f"verified {counts['verified']}, vacuous {counts['vacuous']}, "
        f"FAILED {counts['FAILED']}"
    )
    failed = [r for r in reports if r["status"] == "FAILED"]
    for r in failed[:5]:
        print(f"  FAILED: p={r['p']} params={r['params']} residues={r['residues']}")
    if args.out:
        write_jsonl(reports, args.out)
        print(f"wrote {args.out}")
    if args.csv:
        write_csv(reports, args.csv)
        print(f"wrote {args.csv}")
    return 1 if failed else 0


def _cmd_explore(args: argparse.Namespace) -> int:
    primes = primes_in_range(*args.primes)
    reports = run_exploration(primes, jobs=args.jobs)
    vanishing = sum(1 for r in reports if r["residues"]["sum_mod_p3"] == 0)
    print(
        f"remark2.3: {vanishing}/{len(reports)} qualifying prime(s) vanish mod p^3"
    )
    for r in reports:
        if r["residues"]["sum_mod_p3"] != 0:
            print(
                f"  NON-VANISHING at p={r['p']}: "
                f"residue {r['residues']['sum_mod_p3']} mod {r['p']}^3"
            )
    if args.out:
        write_jsonl(reports, args.out)
        print(f"wrote {args.out}")
    return 0


def _run_oracle_target(target: str, args: argparse.Namespace) -> Tuple[bool, str]:
    if target == "lemma2.1":
        n_max = args.n_max if args.n_max is not None else oracle.LEMMA_2_1_BOUND
        for n in range(n_max + 1):
            if not oracle.lemma_2_1_exact_check(n, bound=max(n, 1)):
                return False, f"squared-value expansion differs at n={n}"
        return True, f"squared-value expansion exact for all n <= {n_max}"
    if target == "lemma2.2":
        n_max = args.n_max if args.n_max is not None else oracle.LEMMA_2_2_BOUND
        for n in range(n_max + 1):
            s1, s2 = oracle.lemma_2_2_sides(n, bound=n_max)
            if s1 != s2:
                return False, f"identity sides differ at n={n}"
            if n >= 2:
                for side in (1, 2):
                    if not oracle.zeilberger_certificate_check(n, side, bound=n_max):
                        return False, f"recurrence certificate fails at n={n} side {side}"
        return True, f"identity and certificate exact for all n <= {n_max}"
    if target == "eq1.7":
        k_max = args.k_max if args.k_max is not None else oracle.IDENTITY_1_7_BOUND
        for k in range(k_max + 1):
            if not oracle.identity_1_7_check(k, bound=k_max):
                return False, f"dictionary equality fails at k={k}"
        return True, f"dictionary exact for all k <= {k_max}"
    if target == "reduce-equivalence":
        p_max = args.p_max if args.p_max is not None else 97
        for p in primes_in_range(3, p_max):
            for e in (1, 2, 3):
                ctx = make_context(p, e)
                for x in oracle.GRID_X:
                    if x.denominator % p == 0:
                        continue
                    for f in cg.FamilyTag:
                        want = oracle.exact_reduce_sum(0, x, ctx, f).value
                        if cg.family_sum(f, x, ctx).value != want:
                            return False, f"family {f.label} differs at p={p} e={e} x={x}"
                    for a in oracle.GRID_A:
                        if a.denominator % p == 0:
                            continue
                        for which, fn in (("core", cg.core_sum), ("plain", cg.plain_sum)):
                            want = oracle.exact_reduce_sum(a, x, ctx, which).value
                            if fn(a, x, ctx).value != want:
                                return (
                                    False,
                                    f"{which} differs at p={p} e={e} a={a} x={x}",
                                )
        return True, f"modular pipeline matches exact reduction for all p <= {p_max}"
    raise ValueError(f"unknown oracle target {target!r}")


def _cmd_oracle(args: argparse.Namespace) -> int:
    ok, message = _run_oracle_target(args.target, args)
    print(f"oracle {args.target}: {'ok' if ok else 'MISMATCH'} -- {message}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# Entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="supercong",
        description="Verify binomial-sum supercongruences mod p^2 and p^3.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run a theorem checker over a prime range")
    check.add_argument("theorem", choices=CHECK_THEOREMS)
    check.add_argument("--primes", type=parse_prime_range, required=True,
                       metavar="LO..HI")
    check.add_argument("--a", type=parse_rational, default=None)
    check.add_argument("--x", type=parse_rational, default=None)
    check.add_argument("--m", type=parse_rational, default=None)
    check.add_argument("--u", type=parse_rational, default=None)
    check.add_argument("--exhaustive-am", action="store_true",
                       help="sweep the full integer parameter grid per prime")
    check.add_argument("--jobs", type=int, default=None,
                       help="parallel workers over primes (default: all cores)")
    check.add_argument("--out", default=None, help="JSONL output path")
    check.add_argument("--csv", default=None, help="CSV output path")
    check.set_defaults(func=_cmd_check)

    explore = sub.add_parser("explore", help="record conjecture residues")
    explore.add_argument("conjecture", choices=("remark2.3",))
    explore.add_argument("--primes", type=parse_prime_range, required=True,
                         metavar="LO..HI")
    explore.add_argument("--jobs", type=int, default=None)
    explore.add_argument("--out", default=None, help="JSONL output path")
    explore.set_defaults(func=_cmd_explore)

    orc = sub.add_parser("oracle", help="run an exact-arithmetic oracle suite")
    orc.add_argument(
        "target",
        choices=("lemma2.1", "lemma2.2", "eq1.7", "reduce-equivalence"),
    )
    orc.add_argument("--n-max", type=int, default=None)
    orc.add_argument("--k-max", type=int, default=None)
    orc.add_argument("--p-max", type=int, default=None)
    orc.set_defaults(func=_cmd_oracle)

    return parser


def _configure_logging() -> bool:
    raw = os.environ.get("SUPERCONG_LOG", "quiet")
    level = _LOG_LEVELS.get(raw)
    if level is None:
        print(
            f"error: SUPERCONG_LOG must be one of {sorted(_LOG_LEVELS)}, got {raw!r}",
            file=sys.stderr,
        )
        return False
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )
    log.setLevel(level)
    return True


def main(argv: Optional[Sequence[str]] = None) -> int:
    if not _configure_logging():
        return 2
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SupercongError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
