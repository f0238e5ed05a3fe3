"""Registry of executable congruence checks and the suite runner.

Each entry knows its parameter grid, the hypotheses under which the claim is
made (anything outside is reported as skipped, never failed), how to compute
the left-hand side through :mod:`mhslab.compsum` / :mod:`mhslab.mhs`, and how
to evaluate the Bernoulli right-hand side from exact rational coefficients.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from math import comb, factorial
from typing import Callable, Iterable, Optional

from . import compsum
from .bernoulli import bernoulli_residue
from .compsum import (
    cam_divisibility_report,
    cam_precondition,
    cam_sum_report,
    comp_sum_R,
    comp_sum_S,
    count_C_exact,
)
from .errors import PreconditionViolated, UnknownTheorem
from .mhs import check_lemma_U
from .modring import MODULUS_CAP, rational_mod
from .report import CongruenceReport, SuiteReport, skipped

# An evaluator returns (modulus, lhs, rhs, note).
Evaluation = tuple[int, int, int, str]


@dataclass(frozen=True)
class TheoremSpec:
    id: str
    statement: str
    evaluate: Callable[..., Evaluation]
    domain: Callable[..., Optional[str]]
    n_values: tuple = (0,)
    m_values: tuple = (1,)
    fixed_r: Optional[int] = None
    n_configurable: bool = False
    m_configurable: bool = False
    extras: Callable[[int, int, int], Iterable] = lambda n, m, p: (None,)


def B(p: int, j: int) -> int:
    return bernoulli_residue(p, j)


def _unit_times_p_power(coeff: Fraction, unit: int, p: int, e: int) -> int:
    """coeff * unit * p^e with coeff and unit only needed mod p."""
    return rational_mod(coeff, p) * unit % p * p**e


def _need(cond: bool, why: str) -> Optional[str]:
    return None if cond else why


def _fits(p: int, e: int) -> bool:
    return p**e < MODULUS_CAP


# -- closed forms -------------------------------------------------------------

def bilinear_sum(n: int, p: int, weight: Callable[[int], Fraction]) -> int:
    """sum over odd 3 <= a <= n-3 of weight(a) B_{p-a} B_{p-n+a} / (a (n-a)) mod p."""
    total = 0
    for a in range(3, n - 2, 2):
        c = Fraction(weight(a), a * (n - a))
        total += rational_mod(c, p) * B(p, p - a) * B(p, p - n + a)
    return total % p


def rn2_coeff(n: int, a: int) -> Fraction:
    return Fraction(factorial(n), 2)


def rn3_coeff(n: int, a: int) -> Fraction:
    return Fraction(factorial(n) * (2 * n - a + 3), 6)


def sn3_coeff(n: int, a: int) -> Fraction:
    return -Fraction(factorial(n) * (n + a - 3), 6)


S6_BASE = {1: Fraction(0), 2: Fraction(40), 3: Fraction(-80), 4: Fraction(40), 5: Fraction(0)}
S6_P2 = {1: Fraction(-20, 3), 2: Fraction(80, 3), 3: Fraction(-40)}
SIXVAR_COEFF = -Fraction(factorial(5), 18)


def thm2i_proof_coeff(m: int) -> Fraction:
    return Fraction(20, 3) * (m**3 - m)


def thm2i_printed_coeff(m: int) -> Fraction:
    return Fraction(factorial(5), 18) * (m**5 - m**3)


def thm2i_printed_residue(m: int, p: int) -> int:
    return rational_mod(thm2i_printed_coeff(m), p) * B(p, p - 3) ** 2 % p


# -- evaluators ---------------------------------------------------------------

def _zhao3var(n, m, p, r, extra):
    return p, comp_sum_S(3, 1, p, 1, 1), -2 * B(p, p - 3), ""


def _zhou(n, m, p, r, extra):
    if n % 2:
        return p, comp_sum_S(n, 1, p, 1, 1), -factorial(n - 1) * B(p, p - n), ""
    c = -Fraction(n * factorial(n), 2 * (n + 1))
    return p * p, comp_sum_S(n, 1, p, 1, 2), _unit_times_p_power(c, B(p, p - n - 1), p, 1), ""


def _wang3(n, m, p, r, extra):
    return p**r, comp_sum_S(3, 1, p, r, r), _unit_times_p_power(Fraction(-2), B(p, p - 3), p, r - 1), ""


def _zhao4(n, m, p, r, extra):
    c = -Fraction(factorial(4), 5)
    return p ** (r + 1), comp_sum_S(4, 1, p, r, r + 1), _unit_times_p_power(c, B(p, p - 5), p, r), ""


def _wang5(n, m, p, r, extra):
    c = -Fraction(factorial(5), 6)
    return p**r, comp_sum_S(5, 1, p, r, r), _unit_times_p_power(c, B(p, p - 5), p, r - 1), ""


def _rn(kind: str, mm: int, coeff):
    def run(n, m, p, r, extra):
        lhs = (comp_sum_R if kind == "R" else comp_sum_S)(n, mm, p, 1, 1)
        return p, lhs, bilinear_sum(n, p, lambda a: coeff(n, a)), ""
    return run


def _sixvar(n, m, p, r, extra):
    rhs = _unit_times_p_power(SIXVAR_COEFF, B(p, p - 3) ** 2, p, r - 1)
    return p**r, comp_sum_S(6, 1, p, r, r), rhs, ""


def _thm2i(n, m, p, r, extra):
    b2 = B(p, p - 3) ** 2
    rhs = rational_mod(thm2i_proof_coeff(m), p) * b2 % p
    printed = thm2i_printed_residue(m, p)
    lhs = comp_sum_R(6, m, p, 1, 1)
    verdict = "agrees" if printed == lhs % p else "DISAGREES"
    note = f"checked (20/3)(m^3-m) form; printed (5!/18)(m^5-m^3) form gives {printed}: {verdict}"
    return p, lhs, rhs, note


def _thm2ii(n, m, p, r, extra):
    rhs = _unit_times_p_power(SIXVAR_COEFF * m, B(p, p - 3) ** 2, p, r - 1)
    return p**r, comp_sum_R(6, m, p, r, r), rhs, ""


def _s6base(n, m, p, r, extra):
    return p, comp_sum_S(6, m, p, 1, 1), rational_mod(S6_BASE[m], p) * B(p, p - 3) ** 2, ""


def _s6sym(n, m, p, r, extra):
    return p**r, comp_sum_S(6, m, p, r, r), comp_sum_S(6, 6 - m, p, r, r), f"S_6^({m}) vs S_6^({6 - m})"


def _s6rec(n, m, p, r, extra):
    # lifts exponent r-1 to r through the counts C_a^(m)
    M = p**r
    rhs = 0
    for group in ((1, 5), (2, 4), (3,)):
        c = sum(count_C_exact(a, m, p).value for a in group)
        rhs += c * comp_sum_S(6, group[0], p, r - 1, r)
    return M, comp_sum_S(6, m, p, r, r), rhs % M, ""


def _s6p2(n, m, p, r, extra):
    rhs = _unit_times_p_power(S6_P2[m], B(p, p - 3) ** 2, p, 1)
    return p * p, comp_sum_S(6, m, p, 2, 2), rhs, ""


def rs_relation_sides(n: int, m: int, p: int) -> tuple[int, int]:
    lhs = comp_sum_S(n, m, p, 1, 1)
    rhs = sum((-1) ** k * comb(n, k) * comp_sum_R(n, m - k, p, 1, 1) for k in range(m))
    return lhs, rhs % p


def _rs(n, m, p, r, extra):
    lhs, rhs = rs_relation_sides(n, m, p)
    return p, lhs, rhs, ""


def _b3b5(p):
    return B(p, p - 3) * B(p, p - 5)


def _b10(p):
    return 50 * B(p, p - 3) * B(p, p - 7) + 21 * B(p, p - 5) ** 2


SEC5_TABLE = {
    # (n, m): (rational coefficient, Bernoulli polynomial in residues)
    (4, 2): (Fraction(0), lambda p: 1),
    (4, 3): (Fraction(0), lambda p: 1),
    (6, 2): (Fraction(factorial(6), 18), lambda p: B(p, p - 3) ** 2),
    (6, 3): (Fraction(2 * factorial(6), 9), lambda p: B(p, p - 3) ** 2),
    (8, 2): (Fraction(factorial(8), 15), _b3b5),
    (8, 3): (Fraction(factorial(8), 3), _b3b5),
    (10, 2): (Fraction(factorial(10), 1050), _b10),
    (10, 3): (Fraction(factorial(10), 175), _b10),
}


def _sec5(n, m, p, r, extra):
    coeff, poly = SEC5_TABLE[(n, m)]
    lhs = comp_sum_R(n, m, p, 1, 1)
    rhs = rational_mod(coeff, p) * poly(p) % p
    note = ""
    if (n, m) == (6, 3):
        printed = rational_mod(coeff, p) * _b3b5(p) % p
        verdict = "agrees" if printed == lhs % p else "DISAGREES"
        note = f"checked 160 B_(p-3)^2; printed B_(p-3)B_(p-5) basis gives {printed}: {verdict}"
    return p, lhs, rhs, note


def _lemma_u(n, m, p, r, extra):
    rep = check_lemma_U(m, extra, p)
    return rep.modulus, rep.lhs, rep.rhs, rep.note


def _cam_i(n, m, p, r, extra):
    rep = cam_divisibility_report(n, m, p)
    return rep.modulus, rep.lhs, rep.rhs, rep.note


def _cam_sums(n, m, p, r, extra):
    rep = cam_sum_report(n, m, p)
    return rep.modulus, rep.lhs, rep.rhs, rep.note


# -- domains ------------------------------------------------------------------

def _dom_zhou(n, m, p, r, extra):
    return _need(p >= 5 and 2 <= n <= p - 2, "needs p >= 5 and 2 <= n <= p - 2")


def _dom_even_n(n, m, p, r, extra):
    return _need(n % 2 == 0 and n >= 4 and p > n + 2, "needs even n >= 4 and p > n + 2")


def _dom_thm2(n, m, p, r, extra):
    if p < 11 or m % p == 0:
        return "needs p >= 11 and p not dividing m"
    return None


def _dom_lemma_u(n, m, p, r, extra):
    if sum(extra) > p - 3:
        return f"weight {sum(extra)} exceeds p - 3"
    return _need(_fits(p, 3), "p^3 exceeds the modulus cap")


def _dom_cam(n, m, p, r, extra):
    try:
        cam_precondition(p)
    except PreconditionViolated as exc:
        return str(exc)
    return None


def _dom_sec5(n, m, p, r, extra):
    # the tabulated values also hold at p = 11 for n = 10
    return _need(p > min(n + 2, 10), f"needs p > {min(n + 2, 10)}")


def compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    if parts == 1:
        return [(total,)] if total >= 1 else []
    return [(a,) + rest for a in range(1, total) for rest in compositions(total - a, parts - 1)]


def lemma_u_exponents(max_weight: int = 6, max_parts: int = 3) -> list[tuple[int, ...]]:
    return [c for w in range(1, max_weight + 1) for k in range(1, max_parts + 1)
            for c in compositions(w, k)]


REGISTRY: dict[str, TheoremSpec] = {}


def _register(spec: TheoremSpec) -> None:
    REGISTRY[spec.id] = spec


_register(TheoremSpec(
    "zhao3var", "S_3(p) = -2 B_{p-3} (mod p)", _zhao3var,
    lambda n, m, p, r, e: _need(p >= 3, "needs p >= 3"), n_values=(3,), fixed_r=1))
_register(TheoremSpec(
    "zhouN", "S_n(p) = -(n-1)! B_{p-n} (mod p), n odd; -(n/(2(n+1))) n! B_{p-n-1} p (mod p^2), n even",
    _zhou, _dom_zhou, n_values=tuple(range(3, 9)), fixed_r=1, n_configurable=True))
_register(TheoremSpec(
    "wang3", "S_3(p^r) = -2 p^{r-1} B_{p-3} (mod p^r)", _wang3,
    lambda n, m, p, r, e: _need(p >= 3 and r >= 1 and _fits(p, r), "needs p >= 3, r >= 1"),
    n_values=(3,)))
_register(TheoremSpec(
    "zhao4", "S_4(p^r) = -(4!/5) p^r B_{p-5} (mod p^{r+1})", _zhao4,
    lambda n, m, p, r, e: _need(p >= 7 and r >= 2 and _fits(p, r + 1), "needs p >= 7, r >= 2"),
    n_values=(4,)))
_register(TheoremSpec(
    "wang5", "S_5(p^r) = -(5!/6) p^{r-1} B_{p-5} (mod p^r)", _wang5,
    lambda n, m, p, r, e: _need(p > 5 and r >= 2 and _fits(p, r), "needs p > 5, r >= 2"),
    n_values=(5,)))
for _id, _kind, _m, _coeff, _stmt in (
    ("thmRn2", "R", 2, rn2_coeff, "R_n^(2)(p) = (n!/2) sum_a B_{p-a}B_{p-n+a}/(a(n-a)) (mod p)"),
    ("thmRn3", "R", 3, rn3_coeff, "R_n^(3)(p) = (n!/6) sum_a (2n-a+3) B_{p-a}B_{p-n+a}/(a(n-a)) (mod p)"),
    ("corSn2", "S", 2, rn2_coeff, "S_n^(2)(p) = (n!/2) sum_a B_{p-a}B_{p-n+a}/(a(n-a)) (mod p)"),
    ("corSn3", "S", 3, sn3_coeff, "S_n^(3)(p) = -(n!/6) sum_a (n+a-3) B_{p-a}B_{p-n+a}/(a(n-a)) (mod p)"),
):
    _register(TheoremSpec(_id, _stmt, _rn(_kind, _m, _coeff), _dom_even_n,
                          n_values=(4, 6, 8, 10), m_values=(_m,), fixed_r=1, n_configurable=True))
_register(TheoremSpec(
    "sixvar", "S_6(p^r) = -(5!/18) p^{r-1} B_{p-3}^2 (mod p^r)", _sixvar,
    lambda n, m, p, r, e: _need(p >= 11 and r >= 2 and _fits(p, r), "needs p >= 11, r >= 2"),
    n_values=(6,)))
_register(TheoremSpec(
    "thm2i", "R_6^(m)(p) = (20/3)(m^3 - m) B_{p-3}^2 (mod p)", _thm2i, _dom_thm2,
    n_values=(6,), m_values=(2, 3), fixed_r=1, m_configurable=True))
_register(TheoremSpec(
    "thm2ii", "R_6^(m)(p^r) = -(5!/18) m p^{r-1} B_{p-3}^2 (mod p^r)", _thm2ii,
    lambda n, m, p, r, e: _dom_thm2(n, m, p, r, e) or _need(r >= 2 and _fits(p, r), "needs r >= 2"),
    n_values=(6,), m_values=(2, 3, 4), m_configurable=True))
_register(TheoremSpec(
    "s6base", "S_6^(m)(p) = (0, 40, -80, 40, 0)[m] B_{p-3}^2 (mod p)", _s6base,
    lambda n, m, p, r, e: _need(p >= 11, "needs p >= 11"),
    n_values=(6,), m_values=(1, 2, 3, 4, 5), fixed_r=1))
_register(TheoremSpec(
    "s6sym", "S_6^(m)(p^r) = S_6^(6-m)(p^r) (mod p^r)", _s6sym,
    lambda n, m, p, r, e: _need(p >= 5 and _fits(p, r), "needs p >= 5"),
    n_values=(6,), m_values=(1, 2)))
_register(TheoremSpec(
    "s6rec", "S_6^(m)(p^r) = sum_a C_a^(m) S_6^(a)(p^{r-1}) folded by symmetry (mod p^r)", _s6rec,
    lambda n, m, p, r, e: _need(p >= 7 and r >= 2 and _fits(p, r), "needs p >= 7, r >= 2"),
    n_values=(6,), m_values=(1, 2, 3, 4, 5)))
_register(TheoremSpec(
    "s6p2", "S_6^(m)(p^2) = (-20/3, 80/3, -40)[m] p B_{p-3}^2 (mod p^2)", _s6p2,
    lambda n, m, p, r, e: _need(p >= 11, "needs p >= 11"),
    n_values=(6,), m_values=(1, 2, 3), fixed_r=2))
_register(TheoremSpec(
    "rsRelation", "S_n^(m)(p) = sum_{k<m} C(n,k)(-1)^k R_n^(m-k)(p) (mod p)", _rs,
    lambda n, m, p, r, e: _need(2 <= m < n and p > n, "needs 2 <= m < n and p > n"),
    n_values=(4, 6, 8, 10), m_values=tuple(range(2, 10)), fixed_r=1,
    n_configurable=True, m_configurable=True))
_register(TheoremSpec(
    "sec5table", "tabulated R_n^(m)(p) for n in {4,6,8,10}, m in {2,3}", _sec5, _dom_sec5,
    n_values=(4, 6, 8, 10), m_values=(2, 3), fixed_r=1))
_register(TheoremSpec(
    "lemmaU", "U_{bp}(alphas) closed form (mod p^3 odd weight, p^2 even weight)", _lemma_u,
    _dom_lemma_u, m_values=(1, 2, 3), fixed_r=1, m_configurable=True,
    extras=lambda n, m, p: lemma_u_exponents()))
_register(TheoremSpec(
    "lemmaCam_i", "C_a^(m) = 0 (mod p)", _cam_i, _dom_cam,
    n_values=(1, 2, 3, 4, 5), m_values=(1, 2, 3, 4, 5), fixed_r=1))
_register(TheoremSpec(
    "lemmaCam_sums", "C_1+C_5, C_2+C_4, C_3 = rational multiples of p (mod p^2), m <= 3",
    _cam_sums, _dom_cam, n_values=(1, 2, 3), m_values=(1, 2, 3), fixed_r=1))


def get_theorem(theorem_id: str) -> TheoremSpec:
    try:
        return REGISTRY[theorem_id]
    except KeyError:
        raise UnknownTheorem(theorem_id) from None


def evaluate_check(theorem_id: str, n: int, m: int, p: int, r: int, extra=None) -> CongruenceReport:
    """Run one registry check; out-of-domain parameters come back skipped."""
    spec = get_theorem(theorem_id)
    if theorem_id == "lemmaU" and extra is not None:
        n = len(extra)
    why = spec.domain(n, m, p, r, extra)
    if why:
        note = why if extra is None else f"{why}; alphas=" + ",".join(map(str, extra))
        return skipped(theorem_id, n, m, p, r, note)
    t0 = time.perf_counter()
    modulus, lhs, rhs, note = spec.evaluate(n, m, p, r, extra)
    rep = CongruenceReport(theorem_id, n, m, p, r, modulus, lhs, rhs, note=note)
    rep.runtime_ms = (time.perf_counter() - t0) * 1e3
    return rep


def check_rs_relation(n: int, m: int, p: int) -> CongruenceReport:
    if not (1 <= m < n and p > n):
        raise PreconditionViolated("needs 1 <= m < n and p > n")
    lhs, rhs = rs_relation_sides(n, m, p)
    return CongruenceReport("rsRelation", n, m, p, 1, p, lhs, rhs)


# -- suite --------------------------------------------------------------------

@dataclass
class SuiteConfig:
    theorems: tuple[str, ...]
    primes: tuple[int, ...]
    r_values: tuple[int, ...] = (2,)
    n_values: Optional[tuple[int, ...]] = None
    m_values: Optional[tuple[int, ...]] = None
    jobs: int = 1
    cache_dir: Optional[str] = None

    def echo(self) -> dict:
        # jobs and cache never change results, so they stay out of the report
        return {
            "theorems": list(self.theorems),
            "primes": list(self.primes),
            "r": list(self.r_values),
            "n": None if self.n_values is None else list(self.n_values),
            "m": None if self.m_values is None else list(self.m_values),
        }


def expand(config: SuiteConfig, p: int) -> list[tuple]:
    tasks = []
    for tid in config.theorems:
        spec = get_theorem(tid)
        ns = config.n_values if (spec.n_configurable and config.n_values) else spec.n_values
        ms = config.m_values if (spec.m_configurable and config.m_values) else spec.m_values
        rs = (spec.fixed_r,) if spec.fixed_r is not None else config.r_values
        for n, m, r in iproduct(ns, ms, rs):
            for extra in spec.extras(n, m, p):
                tasks.append((tid, n, m, p, r, extra))
    return tasks


def _run_prime(args) -> list[CongruenceReport]:
    config, p = args
    if not config.cache_dir:
        return [evaluate_check(*task) for task in expand(config, p)]
    from .cache import ResidueCache
    compsum.set_residue_cache(ResidueCache(config.cache_dir))
    try:
        return [evaluate_check(*task) for task in expand(config, p)]
    finally:
        compsum.set_residue_cache(None)


def run_suite(config: SuiteConfig) -> SuiteReport:
    for tid in config.theorems:
        get_theorem(tid)
    work = [(config, p) for p in sorted(config.primes, reverse=True)]
    reports: list[CongruenceReport] = []
    if config.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            for chunk in pool.map(_run_prime, work):
                reports.extend(chunk)
    else:
        for item in work:
            reports.extend(_run_prime(item))
    return SuiteReport(reports, config.echo())


# -- exact rational identities behind the registry ----------------------------

def corsn3_identity(n: int) -> bool:
    """corSn3 coefficient = thmRn3 coefficient - n * thmRn2 coefficient, every odd a."""
    return all(
        rn3_coeff(n, a) - n * rn2_coeff(n, a) == sn3_coeff(n, a) for a in range(3, n - 2, 2)
    )


def cam_p_multiples(m: int) -> tuple[Fraction, Fraction, Fraction]:
    """(C_1+C_5, C_2+C_4, C_3)/p mod p as rationals, read off the exact counts' expansion."""
    # X_a(u) = (-1)^(a-1) (a-1)!(5-a)!/5! * u p (mod p^2), combined per the
    # inclusion-exclusion weights C(6, j-1)
    def x(a: int, u: int) -> Fraction:
        return Fraction((-1) ** (a - 1) * factorial(a - 1) * factorial(5 - a), factorial(5)) * u

    def c(a: int) -> Fraction:
        return sum((-1) ** (j - 1) * x(a, m - j + 1) * comb(6, j - 1) for j in range(1, m + 1))

    return c(1) + c(5), c(2) + c(4), c(3)


def s6_induction_identity() -> bool:
    """Composing the lifting step with the base values reproduces the p^2 values."""
    for m in (1, 2, 3):
        c15, c24, c3 = cam_p_multiples(m)
        lifted = c15 * S6_BASE[1] + c24 * S6_BASE[2] + c3 * S6_BASE[3]
        if lifted != S6_P2[m]:
            return False
    # and the p^2 values are a fixed point of the same step (the r >= 2 induction)
    for m in (1, 2, 3):
        c15, c24, c3 = cam_p_multiples(m)
        if c15 * S6_P2[1] + c24 * S6_P2[2] + c3 * S6_P2[3] != S6_P2[m]:
            return False
    return True


def thm2_coefficient_identities() -> dict[str, bool]:
    """Both thm2 reductions, evaluated on the S_6 base values as exact rationals."""
    ok_i = all(
        (comb(m + 4, 5) + comb(m, 5)) * S6_BASE[1]
        + (comb(m + 3, 5) + comb(m + 1, 5)) * S6_BASE[2]
        + comb(m + 2, 5) * S6_BASE[3] == thm2i_proof_coeff(m)
        for m in range(1, 12)
    )
    ok_ii = all(
        comb(m + 4, 5) + comb(m, 5) - 4 * comb(m + 3, 5) - 4 * comb(m + 1, 5) + 6 * comb(m + 2, 5) == m
        for m in range(1, 30)
    )
    return {"thm2i_proof_form": ok_i, "thm2ii_multiplier": ok_ii}
