import itertools

import pytest
from hypothesis import given, settings, strategies as st

from qstairs.partitions import all_partitions
from qstairs.qproducts import (PochhammerFactor, ProductSpec, WitnessModel, expand_bivariate,
                               expand_product, inverse_euler, is_periodic_pm1,
                               pochhammer_finite, pochhammer_infinite)
from qstairs.series import LaurentSeries


def brute_count(n, modulus, allowed):
    allowed = {r % modulus for r in allowed}
    return sum(1 for p in all_partitions(n) if all(x % modulus in allowed for x in p))


def test_finite_pochhammer_starts_at_t_zero():
    # (q; q)_3 = (1 - q)(1 - q^2)(1 - q^3)
    want = [1, -1, -1, 0, 1, 1, -1]
    assert pochhammer_finite(1, 1, 1, 3, 6).coefficients(0, 6) == want


def test_euler_pentagonal_numbers():
    c = pochhammer_infinite(1, 1, 1, 40)
    pent = {k * (3 * k - 1) // 2: (-1) ** k for k in range(-6, 7)}
    assert c.coefficients(0, 40) == [pent.get(n, 0) for n in range(41)]


@pytest.mark.parametrize("modulus,allowed", [(12, [1, 4, 6, 8, 11]), (5, [1, 4]),
                                             (6, [0, 2, 3])])
def test_product_counts_partitions_into_allowed_classes(modulus, allowed):
    spec = ProductSpec.from_residues(modulus, allowed)
    f = expand_product(spec, 20)
    assert [f[n] for n in range(21)] == [brute_count(n, modulus, allowed) for n in range(21)]


def test_numerator_classes_count_signed():
    # (q^6; q^12) / (q^2,q^3,q^4,q^8,q^9,q^10; q^12) equals (-q^3;q^6)(q^6;q^6)/(q^2;q^2)
    spec = ProductSpec.from_residues(12, [2, 3, 4, 8, 9, 10], [6])
    alt = ProductSpec(factors=(PochhammerFactor(3, 6, sign=-1), PochhammerFactor(6, 6),
                               PochhammerFactor(2, 2, power=-1)))
    assert expand_product(spec, 150) == expand_product(alt, 150)


def test_product_json_round_trip():
    spec = ProductSpec.from_residues(12, [2, 3, 4], [6], witness=WitnessModel(12, (2, 4), (3,)))
    again = ProductSpec.from_json(spec.to_json())
    assert again == spec
    assert spec.to_json()["residues_neg"] == [6]


def test_witness_needs_a_pure_denominator():
    assert ProductSpec.from_residues(12, [1, 4]).witness_model().free == (1, 4)
    with pytest.raises(ValueError):
        ProductSpec.from_residues(12, [1, 2], [3]).witness_model()


def test_every_catalog_product_inverts_to_its_pattern(catalog):
    for entry in catalog:
        spec = entry.product
        a = inverse_euler(expand_product(spec, 120))
        pattern = spec.exponent_pattern()
        for m in range(1, 121):
            assert a[m] == pattern[m % spec.modulus], (entry.id, m)


@given(st.integers(2, 12).flatmap(
    lambda M: st.tuples(st.just(M), st.dictionaries(st.integers(0, M - 1),
                                                    st.integers(-1, 1)))))
@settings(max_examples=40, deadline=None)
def test_inverse_euler_recovers_random_patterns(case):
    modulus, exps = case
    spec = ProductSpec(modulus, exps)
    a = inverse_euler(expand_product(spec, 3 * modulus + 6))
    verdict = is_periodic_pm1(a, modulus)
    assert verdict.periodic
    assert verdict.pattern == spec.exponent_pattern()


def test_periodicity_reports_the_break():
    a = [0] + [1] * 30
    a[17] = 0
    verdict = is_periodic_pm1(a, 12)
    assert not verdict and "a_17" in verdict.reason


def test_periodicity_needs_two_periods():
    with pytest.raises(ValueError):
        is_periodic_pm1([0] * 20, 12)


def test_bivariate_expansion_matches_brute_force():
    # (x q; q)^-1 counts partitions by length and weight
    got = expand_bivariate([(1, 0, 0, [PochhammerFactor(1, 1, power=-1, x_pow=1)])], 5, 12)
    for m, n in itertools.product(range(6), range(13)):
        want = sum(1 for p in all_partitions(n) if len(p) == m)
        assert got[m, n] == want


def test_bivariate_expansion_with_negative_exponents():
    # x^2 q^-1 / (1 - x^2 q^-1): rows 2k hold q^-k only
    terms = [(1, 2, -1, [PochhammerFactor(-1, 0, power=-1, x_pow=2)])]
    got = expand_bivariate(terms, 6, 4)
    assert got[2, -1] == got[4, -2] == got[6, -3] == 1
    assert got[4, -1] == 0


def test_nonconvergent_product_is_rejected():
    with pytest.raises(ValueError):
        pochhammer_infinite(0, 1, 1, 10)
