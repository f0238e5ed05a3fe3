"""Exact LLL reduction over the integers (rational Gram-Schmidt)."""

from __future__ import annotations

from fractions import Fraction
from math import floor

from .errors import DependentRows


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def gram_schmidt(basis: list[list[int]]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Return (mu, squared norms of the orthogonalized rows)."""
    n = len(basis)
    star: list[list[Fraction]] = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    norms: list[Fraction] = []
    for i, b in enumerate(basis):
        v = [Fraction(x) for x in b]
        for j in range(i):
            mu[i][j] = Fraction(_dot(b, star[j])) / norms[j]
            v = [x - mu[i][j] * y for x, y in zip(v, star[j])]
        nv = _dot(v, v)
        if nv == 0:
            raise DependentRows(f"row {i} is a combination of the earlier rows")
        star.append(v)
        norms.append(nv)
    return mu, norms


def lovasz_holds(basis: list[list[int]], delta: Fraction = Fraction(3, 4)) -> bool:
    mu, norms = gram_schmidt(basis)
    sized = all(abs(mu[i][j]) <= Fraction(1, 2) for i in range(len(basis)) for j in range(i))
    lov = all(norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1] for k in range(1, len(basis)))
    return sized and lov


def lll_reduce(basis, delta: Fraction = Fraction(3, 4)) -> list[list[int]]:
    """LLL-reduce the rows of an integer matrix (size reduction + Lovasz condition)."""
    b = [[int(x) for x in row] for row in basis]
    n = len(b)
    if n == 0:
        return b
    mu, norms = gram_schmidt(b)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = floor(mu[k][j] + Fraction(1, 2))
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                for i in range(j):
                    mu[k][i] -= q * mu[j][i]
                mu[k][j] -= q
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            # small dimensions only: recomputing is simpler than the swap update
            mu, norms = gram_schmidt(b)
            k = max(k - 1, 1)
    return b
