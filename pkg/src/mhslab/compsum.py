"""Restricted-composition harmonic sums S_n^(m)(p^r), R_n^(m)(p^r) and the
six-variable lattice counts C_a^(m).

S and R are coefficients of a power of the generating series
``sum_{l coprime to p} x^l / l``; the brute-force enumerator is kept as an
independent oracle and refuses work beyond its guard instead of silently
falling back.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from collections import Counter

import numpy as np

from .errors import LimitExceeded, PreconditionViolated
from .modring import ResidueContext, rational_mod
from .poly import power_coeff
from .report import CongruenceReport

DEGREE_CAP = 2_000_000
BRUTE_FORCE_CAP = 10**7

_residue_cache = None


def set_residue_cache(cache) -> None:
    """Install a persistent memo (see :mod:`mhslab.cache`); ``None`` disables it."""
    global _residue_cache
    _residue_cache = cache


@dataclass(frozen=True)
class CoeffSeries:
    ctx: ResidueContext
    degree_cap: int
    coeffs: np.ndarray

    def __getitem__(self, i: int) -> int:
        return int(self.coeffs[i])


@lru_cache(maxsize=32)
def _harmonic_coeffs(p: int, k: int, limit: int) -> np.ndarray:
    M = p**k
    period = min(limit, M)
    base = np.fromiter(
        (0 if l % p == 0 else pow(l, -1, M) for l in range(period)),
        dtype=np.int64, count=period,
    )
    # 1/l mod p^k only depends on l mod p^k
    coeffs = np.resize(base, limit) if limit > period else base
    coeffs.flags.writeable = False
    return coeffs


def harmonic_gf(ctx: ResidueContext, limit: int) -> CoeffSeries:
    """Series with coefficient 1/l at every 1 <= l < limit coprime to p."""
    if limit > DEGREE_CAP:
        raise LimitExceeded(f"series length {limit} exceeds {DEGREE_CAP}")
    if limit < 1:
        raise PreconditionViolated("limit must be positive")
    return CoeffSeries(ctx, limit - 1, _harmonic_coeffs(ctx.p, ctx.k, limit))


def _check(kind: str, n: int, m: int, p: int, r: int, k: int) -> ResidueContext:
    if r < 1 or n < 1 or m < 1:
        raise PreconditionViolated("need n, m, r >= 1")
    if kind == "S" and not m < n:
        raise PreconditionViolated(f"S_n^(m) needs 1 <= m < n, got n={n}, m={m}")
    ctx = ResidueContext(p, k)
    if m * p**r > DEGREE_CAP:
        raise LimitExceeded(f"degree {m * p**r} exceeds {DEGREE_CAP}")
    return ctx


@lru_cache(maxsize=4096)
def _comp_sum(kind: str, n: int, m: int, p: int, r: int, k: int) -> int:
    ctx = _check(kind, n, m, p, r, k)
    if _residue_cache is not None:
        hit = _residue_cache.load(kind, n, m, p, r, k)
        if hit is not None:
            return hit
    N = m * p**r
    limit = p**r if kind == "S" else N
    f = harmonic_gf(ctx, limit).coeffs
    value = power_coeff(f, n, N, ctx.modulus)
    if _residue_cache is not None:
        _residue_cache.store(kind, n, m, p, r, k, value)
    return value


def comp_sum_S(n: int, m: int, p: int, r: int, k: int) -> int:
    """S_n^(m)(p^r) mod p^k: parts l_i < p^r coprime to p summing to m p^r."""
    return _comp_sum("S", n, m, p, r, k)


def comp_sum_R(n: int, m: int, p: int, r: int, k: int) -> int:
    """R_n^(m)(p^r) mod p^k: as S without the upper bound on the parts."""
    return _comp_sum("R", n, m, p, r, k)


def brute_force_comp_sum(kind: str, n: int, m: int, p: int, r: int, k: int) -> int:
    """Direct enumeration of every admissible composition; oracle for S and R."""
    if kind not in ("S", "R"):
        raise ValueError(f"kind must be 'S' or 'R', got {kind!r}")
    ctx = _check(kind, n, m, p, r, k)
    N = m * p**r
    if comb(N - 1, n - 1) > BRUTE_FORCE_CAP:
        raise LimitExceeded(f"{comb(N - 1, n - 1)} compositions exceed the brute-force guard")
    M = ctx.modulus
    top = p**r - 1 if kind == "S" else N
    inv = [0] + [0 if l % p == 0 else pow(l, -1, M) for l in range(1, N + 1)]

    def walk(remaining: int, parts: int) -> int:
        if parts == 1:
            return inv[remaining] if 1 <= remaining <= top else 0
        total = 0
        for l in range(1, min(top, remaining - parts + 1) + 1):
            if inv[l]:
                total += inv[l] * walk(remaining - l, parts - 1)
        return total % M

    return walk(N, n)


@dataclass(frozen=True)
class CountResult:
    a: int
    m: int
    p: int
    value: int


def count_C_exact(a: int, m: int, p: int) -> CountResult:
    """Solutions of x_1 + ... + x_6 = mp - a with 0 <= x_i < p, by inclusion-exclusion."""
    value = sum(
        (-1) ** (j - 1) * comb((m - j + 1) * p - a + 5, 5) * comb(6, j - 1)
        for j in range(1, m + 1)
    )
    return CountResult(a, m, p, value)


@lru_cache(maxsize=64)
def _triple_sums(p: int) -> Counter:
    return Counter(x + y + z for x in range(p) for y in range(p) for z in range(p))


def count_C_bruteforce(a: int, m: int, p: int) -> CountResult:
    """Same count by splitting the six coordinates into two enumerated triples."""
    if p > 31:
        raise LimitExceeded("brute-force counts are limited to p <= 31")
    target = m * p - a
    half = _triple_sums(p)
    value = sum(c * half.get(target - s, 0) for s, c in half.items())
    return CountResult(a, m, p, value)


CAM_SUMS = {
    # m: coefficients of p for (C_1+C_5, C_2+C_4, C_3) modulo p^2
    1: (Fraction(2, 5), Fraction(-1, 10), Fraction(1, 30)),
    2: (Fraction(-8, 5), Fraction(2, 5), Fraction(-2, 15)),
    3: (Fraction(12, 5), Fraction(-3, 5), Fraction(1, 5)),
}
CAM_GROUPS = {1: (1, 5), 2: (2, 4), 3: (3,)}


def cam_divisibility_report(a: int, m: int, p: int) -> CongruenceReport:
    c = count_C_exact(a, m, p).value
    return CongruenceReport("lemmaCam_i", a, m, p, 1, p, c, 0, note=f"C_{a}^({m})")


def cam_sum_report(g: int, m: int, p: int) -> CongruenceReport:
    group = CAM_GROUPS[g]
    lhs = sum(count_C_exact(a, m, p).value for a in group)
    rhs = rational_mod(CAM_SUMS[m][g - 1], p) * p
    label = "+".join(f"C_{a}^({m})" for a in group)
    return CongruenceReport("lemmaCam_sums", g, m, p, 1, p * p, lhs, rhs, note=label)


def cam_precondition(p: int) -> None:
    if p <= 5:
        c5 = count_C_exact(5, 1, p).value
        raise PreconditionViolated(
            f"needs p >= 7 (5! must be a unit); at p = {p}, C_5^(1) = {c5}"
        )


def check_lemma_Cam(p: int) -> list[CongruenceReport]:
    """Divisibility of every C_a^(m) by p and the three mod-p^2 sums for m <= 3."""
    cam_precondition(p)
    out = [cam_divisibility_report(a, m, p) for m in range(1, 6) for a in range(1, 6)]
    out += [cam_sum_report(g, m, p) for m in CAM_SUMS for g in CAM_GROUPS]
    return out
