import pytest
from hypothesis import given, settings, strategies as st

from qstairs.partitions import (ForbiddenPattern, RuleSet, all_partitions, count_series,
                                dp_vs_enumeration_check, enumerate_partitions, forbid_part,
                                forbid_prefix, iter_accepted, matches, max_multiplicity,
                                min_part, multiset_partitions, pattern)

TABLE_SUM_SIDE = [(12,), (1, 11), (2, 10), (3, 9), (4, 8), (1, 3, 8), (5, 7), (1, 4, 7),
                  (6, 6), (2, 4, 6)]
TABLE_PRODUCT_SIDE = [(1, 11), (4, 8), (1, 1, 1, 1, 8), (6, 6), (1, 1, 4, 6),
                      (1, 1, 1, 1, 1, 1, 6), (4, 4, 4), (1, 1, 1, 1, 4, 4),
                      (1,) * 8 + (4,), (1,) * 12]


def test_identity_one_at_twelve_matches_the_table(catalog):
    assert enumerate_partitions(catalog["A9-1"].rules, 12) == TABLE_SUM_SIDE


def test_identity_one_product_witnesses_at_twelve():
    assert multiset_partitions(12, [1, 4, 6, 8, 11], [], 12) == TABLE_PRODUCT_SIDE


def test_empty_partition_is_always_accepted(catalog):
    assert enumerate_partitions(catalog["A9-1"].rules, 0) == [()]


def test_pattern_base_congruence():
    odd_pair = pattern(0, 0, mod=2, res=1)
    assert odd_pair.matches_at((3, 3), 0)
    assert not odd_pair.matches_at((4, 4), 0)


def test_fictitious_zero_acts_like_a_part():
    rules = RuleSet([pattern(0, 1)], fictitious_zeros=1)
    assert not matches(rules, (1, 5))
    assert matches(rules, (2, 5))


def test_initial_constraints():
    rules = RuleSet([], [forbid_part(1), max_multiplicity(2, 1), forbid_prefix(3, 3)])
    assert not matches(rules, (1, 4))
    assert not matches(rules, (2, 2))
    assert not matches(rules, (3, 3, 7))
    assert matches(rules, (2, 3, 3))
    assert not matches(RuleSet([], [min_part(4)]), (3, 9))


def test_matches_rejects_unsorted_input():
    with pytest.raises(ValueError):
        matches(RuleSet(), (3, 1))


def test_window_limit():
    with pytest.raises(ValueError):
        RuleSet([pattern(0, 5)]).check_window()


def test_rule_set_json_round_trip(catalog):
    for entry in catalog:
        assert RuleSet.from_json(entry.rules.to_json()) == entry.rules


def test_dp_equals_enumeration_for_every_catalog_rule_set(catalog):
    for entry in catalog:
        counts = [0] * 41
        for p in iter_accepted(entry.rules, 40):
            counts[sum(p)] += 1
        assert count_series(entry.rules, 40).coefficients(0, 40) == counts, entry.id


@pytest.mark.parametrize("id_", ["A9-1", "A9-4a", "KR-I5", "new-8", "new-8a",
                                 "Capparelli-2-4idx"])
def test_two_enumerators_agree_with_the_plain_filter(catalog, id_):
    rules = catalog[id_].rules
    for n in range(17):
        want = sorted(p for p in all_partitions(n) if matches(rules, p))
        assert sorted(enumerate_partitions(rules, n)) == want
        assert sorted(p for p in iter_accepted(rules, n) if sum(p) == n) == want


def test_bivariate_counts_split_by_length(catalog):
    rules = catalog["A9-1"].rules
    gf = count_series(rules, 20, track_x=True, max_x=20)
    for n in range(21):
        by_len = [0] * 21
        for p in enumerate_partitions(rules, n):
            by_len[len(p)] += 1
        assert [gf[m, n] for m in range(21)] == by_len


def test_dp_vs_enumeration_helper(catalog):
    assert dp_vs_enumeration_check(catalog["A9-2"].rules, 25)


offsets = st.lists(st.integers(0, 3), min_size=2, max_size=4).map(
    lambda xs: tuple(sorted(x - min(xs) for x in xs)))
patterns = st.builds(lambda o, m, r: ForbiddenPattern(o, m, r % m), offsets,
                     st.integers(1, 3), st.integers(0, 2))
rule_sets = st.builds(
    RuleSet, st.lists(patterns, min_size=1, max_size=4),
    st.lists(st.sampled_from([forbid_part(1), max_multiplicity(2, 1), min_part(2),
                              forbid_prefix(1, 2)]), max_size=2),
    st.integers(0, 2))


@given(rule_sets)
@settings(max_examples=60, deadline=None)
def test_dp_equals_filtered_brute_force_on_random_rules(rules):
    gf = count_series(rules, 14)
    for n in range(15):
        assert gf[n] == sum(1 for p in all_partitions(n) if matches(rules, p))
