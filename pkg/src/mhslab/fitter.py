"""Empirical recovery of the rational constants in congruences of the shape

    S_n(p^r) = p^e * sum_j c_j * prod_i B_{p-a_ji}   (mod p^K)

from per-prime residue data.  One unknown: solve per prime, CRT-combine and
rationally reconstruct.  Several unknowns: CRT-combine every column and read
a short relation vector off an LLL-reduced lattice.  Every fit is checked on
held-out primes before it is reported as fitted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .bernoulli import bernoulli_residue
from .compsum import DEGREE_CAP, comp_sum_S
from .errors import (
    NotFound,
    PrefactorMismatch,
    PreconditionViolated,
    PrimeInadmissible,
)
from .lattice import lll_reduce
from .modring import MODULUS_CAP, crt_combine, product, rational_mod, rational_reconstruct

FITTED = "Fitted"
REFUTED = "Refuted-at-bound"
INCONCLUSIVE = "Inconclusive"


def odd_partitions(n: int, smallest: int = 3) -> list[tuple[int, ...]]:
    """Multisets of odd integers >= 3 summing to n, each sorted ascending."""
    if n == 0:
        return [()]
    out = []
    a = smallest if smallest % 2 else smallest + 1
    while a <= n:
        out += [(a,) + rest for rest in odd_partitions(n - a, a)]
        a += 2
    return out


@dataclass(frozen=True)
class Hypothesis:
    """S_n(p^r) = p^(r + prefactor_shift) * sum c_j basis_j (mod p^(r + modulus_shift))."""

    n: int
    basis: tuple[tuple[int, ...], ...]
    prefactor_shift: int = -1
    modulus_shift: int = 0

    def __post_init__(self):
        for part in self.basis:
            if not part or any(a < 3 or a % 2 == 0 for a in part):
                raise PreconditionViolated(f"basis term {part} needs odd indices >= 3")
        if self.modulus_shift - self.prefactor_shift != 1:
            raise PreconditionViolated("modulus must be exactly one p-power above the prefactor")

    @classmethod
    def conjecture(cls, n: int) -> "Hypothesis":
        return cls(n, tuple(odd_partitions(n)))

    @property
    def weight_consistent(self) -> bool:
        return all(sum(part) == self.n for part in self.basis)

    def prefactor_exp(self, r: int) -> int:
        return r + self.prefactor_shift

    def modulus_exp(self, r: int) -> int:
        return r + self.modulus_shift

    def admissible(self, p: int, r: int) -> Optional[str]:
        top = max((max(part) for part in self.basis), default=3)
        if p < 11 or p <= self.n + 2:
            return f"needs p >= 11 and p > n + 2 = {self.n + 2}"
        if p < top + 3:
            return f"B_(p-{top}) needs p >= {top + 3}"
        if p ** self.modulus_exp(r) >= MODULUS_CAP:
            return "modulus exceeds the 2^31 cap"
        if p**r > DEGREE_CAP:
            return f"series degree p^r exceeds {DEGREE_CAP}"
        return None

    def describe(self) -> str:
        terms = " + ".join(
            "c*" + "*".join(f"B_(p-{a})" for a in part) for part in self.basis
        ) or "0"
        return f"S_{self.n}(p^r) = p^(r{self.prefactor_shift:+d}) ({terms}) mod p^(r{self.modulus_shift:+d})"


@dataclass(frozen=True)
class PrimeData:
    p: int
    raw: int                 # S_n(p^r) mod p^K
    s: int                   # raw / p^e mod p
    basis_values: tuple[int, ...]
    prefactor_exp: int
    modulus_exp: int


@dataclass
class FitResult:
    n: int
    r: int
    basis: tuple[tuple[int, ...], ...]
    coefficients: list[Fraction] = field(default_factory=list)
    primes_used: list[int] = field(default_factory=list)
    holdout: list[int] = field(default_factory=list)
    holdout_verified: bool = False
    status: str = INCONCLUSIVE
    notes: list[str] = field(default_factory=list)
    mismatched: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "basis": [list(b) for b in self.basis],
            "coefficients": [{"num": c.numerator, "den": c.denominator} for c in self.coefficients],
            "primes_used": self.primes_used,
            "holdout": self.holdout,
            "holdout_verified": self.holdout_verified,
            "status": self.status,
            "prefactor_mismatch_primes": self.mismatched,
            "notes": self.notes,
        }


def collect_one(hyp: Hypothesis, r: int, p: int) -> PrimeData:
    why = hyp.admissible(p, r)
    if why:
        raise PrimeInadmissible(f"p = {p}: {why}")
    e, K = hyp.prefactor_exp(r), hyp.modulus_exp(r)
    raw = comp_sum_S(hyp.n, 1, p, r, K)
    if raw % p**e:
        raise PrefactorMismatch(f"S_{hyp.n}({p}^{r}) = {raw} is not divisible by {p}^{e}")
    s = raw // p**e % p
    values = tuple(
        product(bernoulli_residue(p, p - a) for a in part) % p for part in hyp.basis
    )
    return PrimeData(p, raw, s, values, e, K)


def collect_residues(hyp: Hypothesis, r: int, primes: Sequence[int]) -> list[PrimeData]:
    return [collect_one(hyp, r, p) for p in primes]


def synthetic_data(coeffs: Sequence[Fraction], basis_values: dict[int, Sequence[int]],
                   e: int = 1) -> list[PrimeData]:
    """Residue data generated from planted coefficients; for round-trip checks."""
    out = []
    for p, values in basis_values.items():
        s = sum(rational_mod(c, p) * v for c, v in zip(coeffs, values)) % p
        out.append(PrimeData(p, s * p**e, s, tuple(v % p for v in values), e, e + 1))
    return out


def max_denominator_primes(bound: int, primes: Sequence[int]) -> int:
    """How many of ``primes`` a denominator <= bound can contain at most."""
    k, acc = 0, 1
    for q in sorted(primes):
        acc *= q
        if acc > bound:
            break
        k += 1
    return k


def reproduces(coeffs: Sequence[Fraction], d: PrimeData) -> bool:
    """Does the fitted form give back the raw residue mod p^K at this prime?"""
    if any(gcd(c.denominator, d.p) != 1 for c in coeffs):
        return False
    unit = sum(rational_mod(c, d.p) * v for c, v in zip(coeffs, d.basis_values)) % d.p
    return unit * d.p**d.prefactor_exp % d.p**d.modulus_exp == d.raw % d.p**d.modulus_exp


def _gather(hyp: Hypothesis, r: int, primes: Sequence[int], bound: int, holdout: int,
            result: FitResult) -> Optional[tuple[list[PrimeData], list[PrimeData]]]:
    if not primes:
        raise PreconditionViolated("no primes supplied")
    data: list[PrimeData] = []
    for p in primes:
        try:
            data.append(collect_one(hyp, r, p))
        except PrefactorMismatch as exc:
            result.mismatched.append(p)
            result.notes.append(str(exc))
    if result.mismatched:
        allowed = max_denominator_primes(bound, primes)
        if len(result.mismatched) > allowed:
            result.status = REFUTED
            result.notes.append(
                f"prefactor fails at {len(result.mismatched)}/{len(primes)} primes; "
                f"a denominator <= {bound} can absorb at most {allowed}"
            )
            return None
    return _split(data, holdout, result)


def _split(data: list[PrimeData], holdout: int, result: FitResult):
    usable = []
    for d in data:
        if not any(d.basis_values):
            result.notes.append(f"p = {d.p}: every basis value vanishes mod p, skipped")
        else:
            usable.append(d)
    if holdout < 0 or len(usable) <= holdout:
        raise PreconditionViolated("not enough usable primes for the holdout")
    fit, held = usable[: len(usable) - holdout], usable[len(usable) - holdout:]
    result.primes_used = [d.p for d in fit]
    result.holdout = [d.p for d in held]
    return fit, held


def _finish(result: FitResult, coeffs: list[Fraction], held: list[PrimeData]) -> FitResult:
    result.coefficients = coeffs
    result.holdout_verified = all(reproduces(coeffs, d) for d in held)
    if result.holdout_verified:
        result.status = FITTED
    else:
        result.status = INCONCLUSIVE
        bad = [d.p for d in held if not reproduces(coeffs, d)]
        result.notes.append(f"holdout primes {bad} contradict the fit")
    return result


def solve_single(fit: list[PrimeData], bound: int) -> Fraction:
    """CRT + rational reconstruction of c from s_p = c * A_p (mod p)."""
    pairs = [(d.s * pow(d.basis_values[0], -1, d.p) % d.p, d.p) for d in fit if d.basis_values[0]]
    if len(pairs) < 3:
        raise PreconditionViolated("need at least 3 primes with a nonzero basis value")
    x, M = crt_combine(pairs)
    if 2 * bound * bound >= M:
        raise PreconditionViolated(f"2*bound^2 must be below the prime product {M}")
    return rational_reconstruct(x, M, bound)


def fit_single_data(hyp: Hypothesis, r: int, data: list[PrimeData], bound: int,
                    holdout: int = 2) -> FitResult:
    result = FitResult(hyp.n, r, hyp.basis)
    fit, held = _split(data, holdout, result)
    try:
        c = solve_single(fit, bound)
    except NotFound:
        result.status = REFUTED
        result.notes.append(f"no rational with |num|, den <= {bound} fits")
        return result
    return _finish(result, [c], held)


def fit_single(hyp: Hypothesis, r: int, primes: Sequence[int], bound: int,
               holdout: int = 2) -> FitResult:
    if len(hyp.basis) != 1:
        raise PreconditionViolated("fit_single needs exactly one basis term")
    result = FitResult(hyp.n, r, hyp.basis)
    split = _gather(hyp, r, primes, bound, holdout, result)
    if split is None:
        return result
    fit, held = split
    try:
        c = solve_single(fit, bound)
    except NotFound:
        result.status = REFUTED
        result.notes.append(f"no rational with |num|, den <= {bound} fits")
        return result
    return _finish(result, [c], held)


def relation_lattice(fit: list[PrimeData]) -> tuple[list[list[int]], int]:
    """Lattice whose short vectors (u_1..u_t, v, 0) solve u.A - v s = 0 mod every p.

    The per-prime congruences are first merged by CRT into one congruence
    modulo M = prod p; the solution set is the same lattice.
    """
    t = len(fit[0].basis_values)
    cols = []
    for i in range(t):
        cols.append(crt_combine([(d.basis_values[i], d.p) for d in fit])[0])
    s, M = crt_combine([(d.s, d.p) for d in fit])
    W = M
    rows = []
    for i in range(t + 1):
        row = [0] * (t + 2)
        row[i] = 1
        row[-1] = W * cols[i] % (W * M) if i < t else -W * s % (W * M)
        rows.append(row)
    rows.append([0] * (t + 1) + [W * M])
    return rows, M


def solve_multi(fit: list[PrimeData], bound: int) -> list[Fraction]:
    rows, _ = relation_lattice(fit)
    reduced = lll_reduce(rows)
    t = len(fit[0].basis_values)
    candidates = [v for v in reduced if v[-1] == 0 and v[t] != 0]
    if not candidates:
        raise NotFound("no lattice vector with v != 0")
    best = min(candidates, key=lambda v: sum(x * x for x in v))
    coeffs = [Fraction(best[i], best[t]) for i in range(t)]
    if any(abs(c.numerator) > bound or c.denominator > bound for c in coeffs):
        raise NotFound(f"shortest relation {best[:t + 1]} exceeds the bound {bound}")
    return coeffs


def fit_multi(hyp: Hypothesis, r: int, primes: Sequence[int], bound: int,
              holdout: int = 2) -> FitResult:
    t = len(hyp.basis)
    if t == 1:
        return fit_single(hyp, r, primes, bound, holdout)
    if t == 0:
        raise PreconditionViolated("empty basis")
    result = FitResult(hyp.n, r, hyp.basis)
    split = _gather(hyp, r, primes, bound, holdout, result)
    if split is None:
        return result
    fit, held = split
    if len(fit) < t + 3:
        raise PreconditionViolated(f"need at least {t + 3} fitting primes for {t} unknowns")
    try:
        coeffs = solve_multi(fit, bound)
    except NotFound as exc:
        result.status = REFUTED
        result.notes.append(str(exc))
        return result
    return _finish(result, coeffs, held)


def fit_multi_data(hyp: Hypothesis, r: int, data: list[PrimeData], bound: int,
                   holdout: int = 2) -> FitResult:
    result = FitResult(hyp.n, r, hyp.basis)
    fit, held = _split(data, holdout, result)
    try:
        coeffs = solve_multi(fit, bound)
    except NotFound as exc:
        result.status = REFUTED
        result.notes.append(str(exc))
        return result
    return _finish(result, coeffs, held)


def fit(hyp: Hypothesis, r: int, primes: Sequence[int], bound: int, holdout: int = 2) -> FitResult:
    """Dispatch on the number of basis terms; inadmissible primes are dropped with a note."""
    if not hyp.basis:
        result = FitResult(hyp.n, r, hyp.basis)
        result.notes.append(f"no odd partitions of {hyp.n} into parts >= 3")
        return result
    kept = [p for p in primes if hyp.admissible(p, r) is None]
    dropped = [p for p in primes if p not in kept]
    if not kept:
        raise PreconditionViolated(f"no admissible primes for {hyp.describe()}")
    result = fit_multi(hyp, r, kept, bound, holdout)
    if dropped:
        result.notes.insert(0, f"inadmissible primes dropped: {dropped}")
    return result


def refute_hypothesis(hyp: Hypothesis, r: int, primes: Sequence[int], bound: int,
                      holdout: int = 2) -> FitResult:
    """Like :func:`fit`, but any fit that fails its holdout counts as refuted."""
    if not primes:
        raise PreconditionViolated("no primes supplied")
    result = fit(hyp, r, primes, bound, holdout)
    if result.status == INCONCLUSIVE and result.coefficients:
        result.status = REFUTED
        result.notes.append("no coefficient vector within the bound survives the holdout")
    return result
