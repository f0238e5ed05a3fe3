"""Truncated polynomial multiplication over Z/M for M < 2^31.

Two exact paths:

* schoolbook, ``numpy.convolve`` on int64 limbs sized so no partial sum can
  overflow;
* Kronecker substitution above ``KRONECKER_THRESHOLD``: coefficients are packed
  into byte-aligned slots of one big integer, multiplied by GMP, and unpacked.
  The slot width is chosen from the worst-case coefficient of the exact
  integer product, so no carry crosses a slot boundary.

Polynomials are 1-D int64 arrays of canonical residues, index = degree.
"""

from __future__ import annotations

import gmpy2
import numpy as np

KRONECKER_THRESHOLD = 4096


def _limb_bits(M: int, terms: int) -> int:
    # largest b with 2^(2b) * terms < 2^63
    b = (62 - max(terms, 1).bit_length()) // 2
    return max(1, min(b, (M - 1).bit_length() or 1))


def mul_schoolbook(a: np.ndarray, b: np.ndarray, M: int) -> np.ndarray:
    terms = min(len(a), len(b))
    bits = _limb_bits(M, terms)
    mask = (1 << bits) - 1
    nlimbs = -(-max((M - 1).bit_length(), 1) // bits)
    al = [(a >> (bits * i)) & mask for i in range(nlimbs)]
    bl = [(b >> (bits * i)) & mask for i in range(nlimbs)]
    out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
    for i in range(nlimbs):
        for j in range(nlimbs):
            part = np.convolve(al[i], bl[j]) % M
            # part, shift < M < 2^31 so the product stays below 2^62
            shift = pow(2, bits * (i + j), M)
            out = (out + part * shift % M) % M
    return out


def _pack(a: np.ndarray, slot: int) -> int:
    buf = np.zeros((len(a), slot), dtype=np.uint8)
    raw = a.astype("<u8").view(np.uint8).reshape(-1, 8)
    w = min(slot, 8)
    buf[:, :w] = raw[:, :w]
    return gmpy2.mpz.from_bytes(buf.tobytes(), "little")


def _unpack(x, count: int, slot: int, M: int) -> np.ndarray:
    nbytes = count * slot
    if x.bit_length() > nbytes * 8:
        x = x & ((gmpy2.mpz(1) << (nbytes * 8)) - 1)
    data = x.to_bytes(nbytes, "little")
    words = -(-slot // 8)
    buf = np.zeros((count, words * 8), dtype=np.uint8)
    buf[:, :slot] = np.frombuffer(data, dtype=np.uint8).reshape(count, slot)
    w = buf.view("<u8").reshape(count, words)
    Mu = np.uint64(M)
    c = np.uint64(pow(2, 64, M))
    acc = np.zeros(count, dtype=np.uint64)
    for j in range(words - 1, -1, -1):
        acc = (acc * c + w[:, j] % Mu) % Mu
    return acc.astype(np.int64)


def mul_kronecker(a: np.ndarray, b: np.ndarray, M: int, cap: int | None = None) -> np.ndarray:
    n_out = len(a) + len(b) - 1
    if cap is not None:
        n_out = min(n_out, cap + 1)
    terms = min(len(a), len(b))
    slot = -(-((M - 1) ** 2 * terms).bit_length() // 8) or 1
    prod = _pack(a, slot) * _pack(b, slot)
    return _unpack(prod, n_out, slot, M)


def mul_trunc(a: np.ndarray, b: np.ndarray, M: int, cap: int | None = None) -> np.ndarray:
    """Product of ``a`` and ``b`` mod M, keeping degrees 0..cap."""
    if cap is not None:
        a, b = a[: cap + 1], b[: cap + 1]
    if min(len(a), len(b)) < KRONECKER_THRESHOLD:
        out = mul_schoolbook(a, b, M)
    else:
        out = mul_kronecker(a, b, M, cap)
    return out if cap is None else out[: cap + 1]


def mul_reference(a, b, M: int) -> list[int]:
    """Pure-Python O(D^2) product; test oracle only."""
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += int(x) * int(y)
    return [v % M for v in out]


def dot_mod(a: np.ndarray, b: np.ndarray, M: int) -> int:
    """sum a_i b_i mod M for canonical inputs below 2^31 and fewer than 2^32 terms."""
    prods = (a.astype(np.uint64) * b.astype(np.uint64)) % np.uint64(M)
    return int(prods.sum(dtype=np.uint64)) % M


def power_trunc(f: np.ndarray, n: int, M: int, cap: int) -> np.ndarray:
    """f^n truncated at degree ``cap`` by binary exponentiation."""
    if n < 0:
        raise ValueError("negative power")
    result = None
    base = f[: cap + 1]
    while n:
        if n & 1:
            result = base.copy() if result is None else mul_trunc(result, base, M, cap)
        n >>= 1
        if n:
            base = mul_trunc(base, base, M, cap)
    if result is None:
        result = np.zeros(cap + 1, dtype=np.int64)
        result[0] = 1 % M
    return result


def power_coeff(f: np.ndarray, n: int, N: int, M: int) -> int:
    """Coefficient of x^N in f^n.

    Splits n = h + (n - h) and finishes with one dot product, so the last
    full multiplication is never formed.
    """
    if n == 0:
        return (1 % M) if N == 0 else 0
    if n == 1:
        return int(f[N]) % M if N < len(f) else 0
    h = n // 2
    lo = power_trunc(f, h, M, N)
    hi = lo if n - h == h else mul_trunc(lo, f, M, N)
    if len(lo) < N + 1:
        lo = np.pad(lo, (0, N + 1 - len(lo)))
    if len(hi) < N + 1:
        hi = np.pad(hi, (0, N + 1 - len(hi)))
    return dot_mod(lo[: N + 1], hi[N::-1], M)

