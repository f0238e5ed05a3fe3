"""Bernoulli numbers, exactly and modulo a prime.

The two routes share nothing but the definition ``x/(e^x - 1)``: exact values
come from the binomial recurrence, residues from inverting the truncated
series ``(e^x - 1)/x`` over Z/p.  Each is the other's oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import LimitExceeded, NotPrime, PreconditionViolated
from .modring import is_prime, rational_mod

EXACT_CAP = 64


@lru_cache(maxsize=None)
def _exact_table(n: int) -> tuple[Fraction, ...]:
    table = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum(comb(m + 1, j) * table[j] for j in range(m))
        table.append(-s / (m + 1))
    return tuple(table)


def bernoulli_exact(n: int) -> Fraction:
    """B_n with B_1 = -1/2, from sum_{j<=n} C(n+1, j) B_j = 0."""
    if n < 0:
        raise PreconditionViolated("n must be non-negative")
    if n > EXACT_CAP:
        raise LimitExceeded(f"exact Bernoulli numbers are capped at n = {EXACT_CAP}")
    return _exact_table(EXACT_CAP)[n]


@dataclass(frozen=True)
class BernoulliTable:
    """Residues of B_0 .. B_{p-3} modulo p."""

    p: int
    values: tuple[int, ...]

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < len(self.values):
            raise IndexError(f"B_{j} mod {self.p} is outside the table (j <= p-3)")
        return self.values[j]

    def __len__(self):
        return len(self.values)


@lru_cache(maxsize=None)
def bernoulli_mod_p(p: int) -> BernoulliTable:
    """Table of B_j mod p for 0 <= j <= p-3 by power-series inversion."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p < 3:
        raise PreconditionViolated("need p >= 3")
    D = p - 2
    # f_i = 1/(i+1)!, the coefficients of (e^x - 1)/x
    fact = [1] * (D + 1)
    for i in range(1, D + 1):
        fact[i] = fact[i - 1] * i % p
    f = [pow(fact[i + 1], -1, p) for i in range(D)]
    # long division: g = 1/f with f_0 = 1
    g = [0] * D
    g[0] = 1
    for j in range(1, D):
        g[j] = -sum(f[i] * g[j - i] for i in range(1, j + 1)) % p
    return BernoulliTable(p, tuple(g[j] * fact[j] % p for j in range(D)))


def bernoulli_residue(p: int, j: int) -> int:
    """B_j mod p for 0 <= j <= p-3."""
    return bernoulli_mod_p(p)[j]


def staudt_clausen_fraction(n: int) -> Fraction:
    """B_n + sum of 1/q over primes q with (q-1) | n; an integer for even n."""
    extra = sum(Fraction(1, q) for q in range(2, n + 2) if is_prime(q) and n % (q - 1) == 0)
    return bernoulli_exact(n) + extra


def cross_check(p: int) -> list[int]:
    """Indices j where the series table disagrees with the exact recurrence."""
    table = bernoulli_mod_p(p)
    return [
        j
        for j in range(min(p - 3, EXACT_CAP) + 1)
        if table[j] != rational_mod(bernoulli_exact(j), p)
    ]
