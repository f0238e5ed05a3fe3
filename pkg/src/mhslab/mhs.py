"""p-restricted multiple harmonic sums H_N and U_N in Z/p^k."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Sequence

from .bernoulli import bernoulli_residue
from .errors import LimitExceeded, PreconditionViolated
from .modring import ResidueContext, rational_mod
from .report import CongruenceReport

#: Exponents (alpha_1, ..., alpha_n), each >= 1; the empty tuple is allowed.
ExponentVector = tuple

U_MAX_DEPTH = 8


def exponent_vector(alphas: Sequence[int]) -> ExponentVector:
    alphas = tuple(int(a) for a in alphas)
    if any(a < 1 for a in alphas):
        raise PreconditionViolated(f"exponents must be positive: {alphas}")
    return alphas


def _inverse_powers(N: int, alpha: int, ctx: ResidueContext) -> list[int]:
    M, p = ctx.modulus, ctx.p
    return [0 if x % p == 0 else pow(x, -alpha, M) for x in range(N)]


def mhs_H(N: int, alphas: Sequence[int], ctx: ResidueContext) -> int:
    """Sum of prod k_i^-alpha_i over 0 < k_1 < ... < k_n < N with p not dividing any k_i.

    Prefix-sum dynamic program, O(n N) ring operations.
    """
    alphas = exponent_vector(alphas)
    if N < 1:
        raise PreconditionViolated("N must be >= 1")
    M = ctx.modulus
    # level[x] = sum over chains ending strictly below x
    level = [1] * (N + 1)
    for alpha in alphas:
        w = _inverse_powers(N, alpha, ctx)
        nxt = [0] * (N + 1)
        acc = 0
        for x in range(1, N + 1):
            nxt[x] = acc
            if x < N:
                acc = (acc + w[x] * level[x]) % M
        level = nxt
    return level[N] % M


def distinct_permutations(alphas: Sequence[int]) -> list[tuple[int, ...]]:
    return sorted(set(permutations(alphas)))


def mhs_U(N: int, alphas: Sequence[int], ctx: ResidueContext) -> int:
    """Sum over pairwise-distinct p-coprime l_i < N, as a sum of H over permutations."""
    alphas = exponent_vector(alphas)
    if len(alphas) > U_MAX_DEPTH:
        raise LimitExceeded(f"U_N with more than {U_MAX_DEPTH} exponents")
    # Each distinct ordering of the multiset appears mult! times in the full
    # symmetric-group sum.
    mult = 1
    for a in set(alphas):
        mult *= factorial(alphas.count(a))
    total = sum(mhs_H(N, perm, ctx) for perm in distinct_permutations(alphas))
    return total * mult % ctx.modulus


def lemma_U_rhs(b: int, alphas: Sequence[int], p: int) -> tuple[int, int]:
    """Closed form of U_{bp}(alphas) as ``(residue, modulus)``."""
    alphas = exponent_vector(alphas)
    n, r = len(alphas), sum(alphas)
    if r > p - 3:
        raise PreconditionViolated(f"weight {r} exceeds p - 3 = {p - 3}")
    if r % 2:
        coeff = (-1) ** n * factorial(n - 1) * Fraction(b * b * r * (r + 1), 2 * (r + 2))
        bern, shift = bernoulli_residue(p, p - r - 2), 2
    else:
        coeff = (-1) ** (n - 1) * factorial(n - 1) * Fraction(b * r, r + 1)
        bern, shift = bernoulli_residue(p, p - r - 1), 1
    unit = rational_mod(coeff, p) * bern % p
    return unit * p**shift, p ** (shift + 1)


def check_lemma_U(b: int, alphas: Sequence[int], p: int) -> CongruenceReport:
    alphas = exponent_vector(alphas)
    if b < 1:
        raise PreconditionViolated("b must be >= 1")
    rhs, modulus = lemma_U_rhs(b, alphas, p)
    ctx = ResidueContext(p, 3 if modulus == p**3 else 2)
    lhs = mhs_U(b * p, alphas, ctx) % modulus
    return CongruenceReport(
        "lemmaU", len(alphas), b, p, 1, modulus, lhs, rhs,
        note="alphas=" + ",".join(map(str, alphas)),
    )
