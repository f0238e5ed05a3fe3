import random
from fractions import Fraction

import pytest

from mhslab.errors import PrefactorMismatch, PreconditionViolated, PrimeInadmissible
from mhslab.fitter import (
    FITTED, INCONCLUSIVE, REFUTED, Hypothesis, collect_one, fit, fit_multi_data,
    fit_single, fit_single_data, max_denominator_primes, odd_partitions, refute_hypothesis,
    reproduces, synthetic_data,
)
from mhslab.modring import primes_in_range

BIG_PRIMES = primes_in_range(1009, 1200)[:10]


def test_odd_partitions():
    assert odd_partitions(6) == [(3, 3)]
    assert sorted(odd_partitions(9)) == [(3, 3, 3), (9,)]
    assert odd_partitions(4) == []
    assert odd_partitions(10) == [(3, 7), (5, 5)]
    assert all(sum(p) == 12 and all(a % 2 and a >= 3 for a in p) for p in odd_partitions(12))


def test_hypothesis_validation():
    with pytest.raises(PreconditionViolated):
        Hypothesis(6, ((2, 4),))
    with pytest.raises(PreconditionViolated):
        Hypothesis(6, ((3, 3),), prefactor_shift=-1, modulus_shift=1)
    assert Hypothesis.conjecture(6).weight_consistent
    assert not Hypothesis(6, ((7,),), 0, 1).weight_consistent


def test_collect_example():
    d = collect_one(Hypothesis.conjecture(6), 2, 11)
    assert (d.raw, d.s, d.basis_values) == (77, 7, (5,))


def test_collect_inadmissible():
    with pytest.raises(PrimeInadmissible):
        collect_one(Hypothesis.conjecture(6), 2, 7)


def test_prefactor_checks():
    d = collect_one(Hypothesis.conjecture(6), 2, 13)
    assert d.raw % 13 == 0
    with pytest.raises(PrefactorMismatch):
        collect_one(Hypothesis(6, ((7,),), 0, 1), 2, 13)


def test_fit_thm1():
    res = fit_single(Hypothesis.conjecture(6), 2, primes_in_range(11, 199), 10**6)
    assert res.status == FITTED and res.holdout_verified
    assert res.coefficients == [Fraction(-20, 3)]
    assert len(res.holdout) == 2
    doc = res.to_dict()
    assert doc["coefficients"] == [{"num": -20, "den": 3}]
    assert doc["basis"] == [[3, 3]]


def test_constant_is_independent_of_r():
    primes = primes_in_range(11, 53)
    res = fit(Hypothesis.conjecture(6), 3, primes, 10**3)
    assert res.coefficients == [Fraction(-20, 3)]


def test_synthetic_round_trip():
    rng = random.Random(7)
    for _ in range(10):
        c = Fraction(rng.randint(-1000, 1000), rng.randint(1, 1000))
        values = {p: [rng.randint(1, p - 1)] for p in BIG_PRIMES}
        res = fit_single_data(Hypothesis.conjecture(6), 2, synthetic_data([c], values), 1000)
        assert res.coefficients == [c] and res.status == FITTED


def test_synthetic_seven_twelfths():
    values = {p: [p // 3] for p in primes_in_range(11, 60)}
    res = fit_single_data(Hypothesis.conjecture(6), 2, synthetic_data([Fraction(7, 12)], values), 30)
    assert res.coefficients == [Fraction(7, 12)]


def test_synthetic_multi_round_trip():
    rng = random.Random(3)
    hyp = Hypothesis.conjecture(9)
    primes = primes_in_range(37, 200)
    for _ in range(5):
        cs = [Fraction(rng.randint(-300, 300), rng.randint(1, 30)) for _ in range(2)]
        values = {p: [rng.randint(0, p - 1), rng.randint(0, p - 1)] for p in primes}
        res = fit_multi_data(hyp, 2, synthetic_data(cs, values), 10**6)
        assert res.coefficients == cs and res.status == FITTED


def test_zero_basis_prime_skipped():
    values = {p: [0 if p == 13 else 1] for p in primes_in_range(11, 60)}
    res = fit_single_data(Hypothesis.conjecture(6), 2, synthetic_data([Fraction(3)], values), 10)
    assert 13 not in res.primes_used + res.holdout
    assert any("p = 13" in note for note in res.notes)


def test_holdout_failure_is_inconclusive():
    values = {p: [1] for p in primes_in_range(11, 60)}
    data = synthetic_data([Fraction(3)], values)
    last = data[-1]
    data[-1] = type(last)(last.p, (last.s + 1) * last.p, last.s + 1, last.basis_values, 1, 2)
    res = fit_single_data(Hypothesis.conjecture(6), 2, data, 10)
    assert res.status == INCONCLUSIVE and not res.holdout_verified


def test_zhao_shape_refuted():
    hyp = Hypothesis(6, ((7,),), prefactor_shift=0, modulus_shift=1)
    res = refute_hypothesis(hyp, 2, primes_in_range(11, 199), 10**12)
    assert res.status == REFUTED


def test_thm1_not_refuted():
    res = refute_hypothesis(Hypothesis.conjecture(6), 2, primes_in_range(11, 199), 10**12)
    assert res.status == FITTED and res.coefficients == [Fraction(-20, 3)]


def test_refute_needs_primes():
    with pytest.raises(PreconditionViolated):
        refute_hypothesis(Hypothesis.conjecture(6), 2, [], 10)


def test_empty_basis():
    res = fit(Hypothesis.conjecture(4), 2, primes_in_range(11, 97), 10**6)
    assert res.status == INCONCLUSIVE and "no odd partitions" in res.notes[0]


def test_max_denominator_primes():
    assert max_denominator_primes(10**12, primes_in_range(11, 199)) == 8
    assert max_denominator_primes(10, [11, 13]) == 0


@pytest.mark.parametrize("n", [8, 9])
def test_open_cases_are_holdout_consistent(n):
    res = fit(Hypothesis.conjecture(n), 2, primes_in_range(13, 199), 10**12)
    assert res.status == FITTED
    assert len(res.coefficients) == len(odd_partitions(n))


def test_inadmissible_primes_are_dropped():
    res = fit(Hypothesis.conjecture(9), 2, primes_in_range(11, 199), 10**12)
    assert 11 not in res.primes_used + res.holdout
    assert res.notes[0] == "inadmissible primes dropped: [11]"
    with pytest.raises(PreconditionViolated):
        fit(Hypothesis.conjecture(9), 2, [7, 11], 10)
