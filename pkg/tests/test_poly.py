import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mhslab.poly import (
    KRONECKER_THRESHOLD, mul_kronecker, mul_reference, mul_schoolbook, mul_trunc,
    power_coeff, power_trunc,
)

MODULI = [2, 7, 121, 97**4, 2**31 - 1]


def rand_poly(rng, n, M):
    return rng.integers(0, M, size=n, dtype=np.int64)


@pytest.mark.parametrize("M", MODULI)
@pytest.mark.parametrize("na,nb", [(1, 1), (3, 9), (40, 33), (200, 200)])
def test_schoolbook_and_kronecker_match_reference(M, na, nb):
    rng = np.random.default_rng(na * 1000 + nb)
    a, b = rand_poly(rng, na, M), rand_poly(rng, nb, M)
    ref = mul_reference(a, b, M)
    assert mul_schoolbook(a, b, M).tolist() == ref
    assert mul_kronecker(a, b, M).tolist() == ref


def test_worst_case_coefficients():
    M = 2**31 - 1
    a = np.full(5000, M - 1, dtype=np.int64)
    expected = [(k * (M - 1) ** 2) % M for k in range(1, 5001)]
    out = mul_trunc(a, a, M, 4999)
    assert out.tolist() == expected
    assert mul_schoolbook(a[:300], a[:300], M)[:300].tolist() == expected[:300]


def test_kronecker_path_above_threshold():
    M = 11**2
    rng = np.random.default_rng(1)
    n = KRONECKER_THRESHOLD + 10
    a, b = rand_poly(rng, n, M), rand_poly(rng, n, M)
    cap = n + 7
    fast = mul_trunc(a, b, M, cap)
    slow = mul_schoolbook(a, b, M)[: cap + 1]
    assert np.array_equal(fast, slow)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 120), min_size=1, max_size=12), st.integers(0, 6), st.integers(0, 30))
def test_power_coeff_matches_repeated_products(f, n, N):
    M = 121
    arr = np.array(f, dtype=np.int64)
    full = [1]
    for _ in range(n):
        full = mul_reference(full, f, M)
    want = full[N] if N < len(full) else 0
    assert power_coeff(arr, n, N, M) == want
    trunc = power_trunc(arr, n, M, N) if n else None
    if n:
        assert trunc[: min(N + 1, len(full))].tolist() == full[: N + 1][: len(trunc)]
