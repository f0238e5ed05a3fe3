"""``mhs-lab`` command line: verify, fit, bernoulli.

Exit codes: 0 success, 1 a check or fit failed, 2 usage error, 3 a resource
limit was hit.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction

from .bernoulli import bernoulli_exact, bernoulli_mod_p
from .errors import LabError, LimitExceeded, UnknownTheorem
from .fitter import FITTED, Hypothesis, fit, odd_partitions, refute_hypothesis
from .modring import primes_in_range
from .theorems import REGISTRY, SuiteConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_range(text: str) -> tuple[int, int]:
    """``A..B`` (inclusive) or a single integer."""
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?", text)
    if not m:
        raise UsageError(f"bad range {text!r}, expected A..B")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    if lo > hi:
        raise UsageError(f"empty range {text!r}")
    return lo, hi


def parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"bad integer list {text!r}") from None


def parse_bound(text: str) -> int:
    """Accepts plain integers and ``1eK`` / ``2.5e6`` style values."""
    try:
        value = Fraction(text.strip().lower())
    except ValueError:
        raise UsageError(f"bad bound {text!r}") from None
    if value.denominator != 1 or value < 1:
        raise UsageError(f"bound must be a positive integer, got {text!r}")
    return int(value)


_FACTOR = re.compile(r"B_\{?p-(\d+)\}?(?:\^(\d+))?")
_PREFIX = {
    "p-r": 0, "p^r": 0, "p^{r}": 0,
    "p-(r-1)": -1, "p-r-1": -1, "p^(r-1)": -1, "p^{r-1}": -1,
}


def parse_basis(text: str) -> tuple[int | None, tuple[tuple[int, ...], ...]]:
    """``[prefix:]term+term`` where a term is a product like ``B_{p-3}^2*B_{p-5}``.

    The optional prefix gives the p-power in front: ``p-r`` (p^r) or
    ``p-(r-1)`` (p^(r-1)).  Returns (prefactor shift or None, basis).
    """
    shift = None
    text = text.replace(" ", "")
    if ":" in text:
        head, text = text.split(":", 1)
        if head not in _PREFIX:
            raise UsageError(f"unknown prefactor {head!r}; use p-r or p-(r-1)")
        shift = _PREFIX[head]
    basis = []
    for term in text.split("+"):
        parts = []
        for factor in filter(None, term.split("*")):
            m = _FACTOR.fullmatch(factor)
            if not m:
                raise UsageError(f"bad basis factor {factor!r}, expected B_{{p-a}}[^e]")
            parts += [int(m.group(1))] * int(m.group(2) or 1)
        if not parts:
            raise UsageError(f"empty basis term in {text!r}")
        basis.append(tuple(sorted(parts)))
    return shift, tuple(basis)


def _jobs(value) -> int:
    if value is None:
        value = os.environ.get("MHS_LAB_JOBS", "1")
    try:
        jobs = int(value)
    except ValueError:
        raise UsageError(f"bad job count {value!r}") from None
    if jobs < 1:
        raise UsageError("--jobs must be >= 1")
    return jobs


def _emit(text: str, path) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args) -> int:
    if args.theorems == "all":
        ids = tuple(REGISTRY)
    else:
        ids = tuple(t.strip() for t in args.theorems.split(",") if t.strip())
        unknown = [t for t in ids if t not in REGISTRY]
        if unknown or not ids:
            raise UsageError(f"unknown theorem id(s): {', '.join(unknown) or '(none)'}")
    lo, hi = parse_range(args.primes)
    rlo, rhi = parse_range(args.r)
    if rlo < 1:
        raise UsageError("r must be >= 1")
    config = SuiteConfig(
        theorems=ids,
        primes=tuple(primes_in_range(lo, hi)),
        r_values=tuple(range(rlo, rhi + 1)),
        n_values=parse_int_list(args.n) if args.n else None,
        m_values=parse_int_list(args.m) if args.m else None,
        jobs=_jobs(args.jobs),
        cache_dir=args.cache,
    )
    report = run_suite(config)
    text = report.to_csv(args.timings) if args.format == "csv" else report.to_json(args.timings)
    _emit(text, args.out)
    t = report.totals
    print(f"pass {t['pass']}  fail {t['fail']}  skipped {t['skipped']}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_fit(args) -> int:
    lo, hi = parse_range(args.primes)
    primes = primes_in_range(lo, hi)
    r = args.r
    if r < 1:
        raise UsageError("r must be >= 1")
    if args.basis:
        shift, basis = parse_basis(args.basis)
    else:
        shift, basis = None, tuple(odd_partitions(args.n))
    if shift is None:
        shift = -1 if args.modexp in (None, "r") else 0
    mod_shift = {"r": 0, "r+1": 1, None: shift + 1}[args.modexp]
    if mod_shift - shift != 1:
        raise UsageError("the modulus must be one p-power above the prefactor")
    hyp = Hypothesis(args.n, basis, shift, mod_shift)
    bound = parse_bound(args.bound)
    runner = refute_hypothesis if args.basis else fit
    if not primes:
        raise UsageError("no primes in range")
    result = runner(hyp, r, primes, bound, args.holdout)
    _emit(json.dumps(result.to_dict(), indent=2) + "\n", args.out)
    if args.expect_fitted and result.status != FITTED:
        return EXIT_FAIL
    return EXIT_OK


def cmd_bernoulli(args) -> int:
    if args.exact is not None:
        print(bernoulli_exact(args.exact))
        return EXIT_OK
    table = bernoulli_mod_p(args.p)
    for j in range(len(table)):
        if j <= 1 or j % 2 == 0:
            print(f"B_{j} ≡ {table[j]} (mod {args.p})")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mhs-lab", description="Residue-exact checks of harmonic-sum congruences.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run registry checks over a prime range")
    v.add_argument("--theorems", default="all", help="comma list of ids, or 'all'")
    v.add_argument("--primes", default="11..97")
    v.add_argument("--r", default="2..2")
    v.add_argument("--n", help="comma list overriding the n values")
    v.add_argument("--m", help="comma list overriding the m values")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.add_argument("--out")
    v.add_argument("--jobs", help="worker processes (default $MHS_LAB_JOBS or 1)")
    v.add_argument("--cache", help="directory for the residue cache")
    v.add_argument("--timings", action="store_true", help="include runtime_ms in reports")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("fit", help="fit the rational constants of a congruence shape")
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--primes", default="11..199")
    f.add_argument("--r", type=int, default=2)
    f.add_argument("--bound", default="1e12")
    f.add_argument("--holdout", type=int, default=2)
    f.add_argument("--basis", help="e.g. 'p-r:B_{p-7}' or 'B_{p-3}^3+B_{p-9}'")
    f.add_argument("--modexp", choices=("r", "r+1"))
    f.add_argument("--expect-fitted", action="store_true")
    f.add_argument("--out")
    f.set_defaults(func=cmd_fit)

    b = sub.add_parser("bernoulli", help="Bernoulli numbers mod p or exact")
    g = b.add_mutually_exclusive_group(required=True)
    g.add_argument("--p", type=int)
    g.add_argument("--exact", type=int)
    b.set_defaults(func=cmd_bernoulli)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"mhs-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LimitExceeded as exc:
        print(f"mhs-lab: limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (UnknownTheorem, LabError, ValueError) as exc:
        print(f"mhs-lab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
