import numpy as np
import pytest

from mhslab.compsum import (
    BRUTE_FORCE_CAP, brute_force_comp_sum, cam_precondition, check_lemma_Cam,
    comp_sum_R, comp_sum_S, count_C_bruteforce, count_C_exact, harmonic_gf,
)
from mhslab.errors import LimitExceeded, PreconditionViolated
from mhslab.modring import ResidueContext
from mhslab.poly import mul_reference


def test_examples():
    assert comp_sum_S(3, 1, 5, 1, 1) == 3
    assert comp_sum_S(2, 1, 5, 1, 1) == 0
    assert comp_sum_S(6, 1, 11, 2, 2) == 77
    assert comp_sum_R(4, 2, 11, 1, 1) == 0
    assert comp_sum_R(6, 2, 11, 1, 1) == 2


@pytest.mark.parametrize("p", [5, 7, 11])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("m", [1, 2])
@pytest.mark.parametrize("k", [1, 2])
def test_series_matches_enumeration(n, m, p, k):
    if m < n:
        assert comp_sum_S(n, m, p, 1, k) == brute_force_comp_sum("S", n, m, p, 1, k)
    assert comp_sum_R(n, m, p, 1, k) == brute_force_comp_sum("R", n, m, p, 1, k)


def test_series_matches_enumeration_r2():
    assert comp_sum_S(3, 1, 5, 2, 2) == brute_force_comp_sum("S", 3, 1, 5, 2, 2)
    assert comp_sum_S(3, 2, 3, 2, 3) == brute_force_comp_sum("S", 3, 2, 3, 2, 3)


def test_brute_force_guard():
    with pytest.raises(LimitExceeded):
        brute_force_comp_sum("S", 6, 1, 97, 2, 2)
    assert BRUTE_FORCE_CAP == 10**7


def test_S_needs_m_below_n():
    with pytest.raises(PreconditionViolated):
        comp_sum_S(3, 3, 7, 1, 1)


def test_degree_guard():
    with pytest.raises(LimitExceeded):
        comp_sum_S(6, 1, 97, 4, 1)


@pytest.mark.parametrize("p,r", [(7, 1), (7, 2), (11, 2), (13, 2)])
@pytest.mark.parametrize("m", [1, 2])
def test_symmetry(m, p, r):
    assert comp_sum_S(6, m, p, r, r) == comp_sum_S(6, 6 - m, p, r, r)


def test_truncation_is_sound():
    # keeping 16 extra degrees does not move the target coefficient
    p, r, n = 7, 2, 4
    M, N = p**r, p**r
    f = harmonic_gf(ResidueContext(p, r), p**r).coeffs.tolist()
    cap = N + 16
    f = f + [0] * (cap + 1 - len(f))
    full = [1]
    for _ in range(n):
        full = mul_reference(full, f, M)[: cap + 1]
    assert full[N] == comp_sum_S(n, 1, p, r, r)


def test_harmonic_series_is_read_only():
    s = harmonic_gf(ResidueContext(7, 2), 60)
    assert s[1] == 1 and s[7] == 0 and (s[2] * 2) % 49 == 1
    with pytest.raises(ValueError):
        s.coeffs[0] = 5


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_counts_match_enumeration(p):
    for m in range(1, 6):
        for a in range(1, 6):
            assert count_C_exact(a, m, p) == count_C_bruteforce(a, m, p)


def test_cam_examples():
    assert count_C_exact(3, 1, 7).value == 126
    assert count_C_bruteforce(5, 1, 5).value == 1
    reports = check_lemma_Cam(7)
    assert len(reports) == 34 and all(r.passed for r in reports)


def test_cam_small_prime_is_out_of_domain():
    with pytest.raises(PreconditionViolated, match="C_5\\^\\(1\\) = 1"):
        cam_precondition(5)


def test_count_guard():
    with pytest.raises(LimitExceeded):
        count_C_bruteforce(1, 1, 37)
