"""Exact arithmetic in Z/p^k and the number-theoretic helpers built on it.

Hot loops elsewhere in the package work on plain ``int`` residues through the
``ResidueContext`` helpers; :class:`Residue` is the checked, context-bound
value type for API users.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Union

from .errors import (
    BadExponent,
    ContextMismatch,
    DenominatorNotUnit,
    LimitExceeded,
    ModuliNotCoprime,
    NotAUnit,
    NotFound,
    NotPrime,
)

#: Exact signed fraction; ``fractions.Fraction`` already keeps lowest terms
#: with a positive denominator.
Rational = Fraction

MODULUS_CAP = 1 << 31

# Deterministic for every n < 3.3e24, which covers all 64-bit inputs.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for 64-bit integers."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_in_range(lo: int, hi: int) -> list[int]:
    """All primes in the inclusive range [lo, hi]."""
    return [q for q in range(max(lo, 2), hi + 1) if is_prime(q)]


@dataclass(frozen=True)
class ResidueContext:
    """The ring Z/p^k with p prime and p^k < 2^31."""

    p: int
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise BadExponent(f"exponent must be >= 1, got {self.k}")
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")
        if self.p**self.k >= MODULUS_CAP:
            raise LimitExceeded(f"{self.p}^{self.k} exceeds the 2^31 modulus cap")

    @property
    def modulus(self) -> int:
        return self.p**self.k

    def __call__(self, value: int) -> "Residue":
        return Residue(value % self.modulus, self)

    def is_unit(self, x: int) -> bool:
        return x % self.p != 0

    def inv(self, x: int) -> int:
        """Inverse of a unit as a plain canonical int."""
        if x % self.p == 0:
            raise NotAUnit(f"{x} is not a unit modulo {self.p}^{self.k}")
        return pow(x, -1, self.modulus)

    def __repr__(self):
        return f"ResidueContext(p={self.p}, k={self.k})"


def ctx_new(p: int, k: int) -> ResidueContext:
    return ResidueContext(p, k)


@dataclass(frozen=True)
class Residue:
    value: int
    ctx: ResidueContext

    def _other(self, other) -> int:
        if isinstance(other, Residue):
            if other.ctx != self.ctx:
                raise ContextMismatch(f"{self.ctx} vs {other.ctx}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        return Residue((self.value + self._other(other)) % self.ctx.modulus, self.ctx)

    def __sub__(self, other):
        return Residue((self.value - self._other(other)) % self.ctx.modulus, self.ctx)

    def __mul__(self, other):
        return Residue(self.value * self._other(other) % self.ctx.modulus, self.ctx)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value % self.ctx.modulus, self.ctx)

    def __pow__(self, e: int):
        if e < 0:
            return inv(self) ** (-e)
        return Residue(pow(self.value, e, self.ctx.modulus), self.ctx)

    def __int__(self):
        return self.value


def ring_arith(op: str, a: Residue, b) -> Residue:
    """Dispatch ``add``/``sub``/``mul``/``pow`` on residues of one context."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        return a ** int(b)
    raise ValueError(f"unknown ring operation {op!r}")


def inv(u: Residue) -> Residue:
    return Residue(u.ctx.inv(u.value), u.ctx)


def rational_mod(q: Fraction, modulus: int) -> int:
    """Canonical residue of ``q`` modulo an arbitrary modulus."""
    q = Fraction(q)
    if gcd(q.denominator, modulus) != 1:
        raise DenominatorNotUnit(f"denominator of {q} is not invertible modulo {modulus}")
    if modulus == 1:
        return 0
    return q.numerator * pow(q.denominator, -1, modulus) % modulus


def residue_of_rational(q: Fraction, ctx: Union[ResidueContext, int]):
    """Map a rational into Z/p^k (a :class:`Residue`) or Z/M (a plain int)."""
    if isinstance(ctx, ResidueContext):
        return Residue(rational_mod(q, ctx.modulus), ctx)
    return rational_mod(q, ctx)


def crt_combine(pairs: Iterable[tuple[int, int]]) -> tuple[int, int]:
    """Combine ``(residue, modulus)`` pairs with pairwise coprime moduli."""
    x, m = 0, 1
    for r, n in pairs:
        if gcd(m, n) != 1:
            raise ModuliNotCoprime(f"modulus {n} shares a factor with {m}")
        # x + m*t = r (mod n)
        t = (r - x) * pow(m, -1, n) % n
        x += m * t
        m *= n
    return x % m, m


def rational_reconstruct(x: int, M: int, bound: int) -> Fraction:
    """Recover num/den from ``x`` mod ``M`` with |num|, den <= bound.

    Runs the extended Euclidean algorithm on (M, x) and stops at the first
    remainder <= bound; unique whenever 2*bound**2 < M.
    """
    r0, r1 = M, x % M
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    num, den = r1, t1
    if den < 0:
        num, den = -num, -den
    if den == 0 or den > bound or gcd(den, M) != 1 or gcd(num, den) != 1:
        raise NotFound(f"no fraction with bound {bound} matches {x} mod {M}")
    if (num - x * den) % M:
        raise NotFound(f"candidate {num}/{den} does not reproduce {x} mod {M}")
    return Fraction(num, den)


def product(xs: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b, xs, 1)
