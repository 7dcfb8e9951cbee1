import pytest

from qstairs.partitions import all_partitions, matches
from qstairs.series import BivariateSeries, LaurentSeries
from qstairs.staircase import (BlockGrammar, Exception_, JaggedPartition, LabelRule,
                               add_staircase, classify_4a, grammar_generating_function,
                               parse_block, reinstate_staircase, remove_staircase,
                               remove_staircase_gf, validate_blocks)
from qstairs.verify import check_face, staircase_lemma, staircase_round_trip

GRAMMAR_IDS = ["A9-1", "A9-2", "A9-3", "A9-4", "A9-4a", "A9-5", "A9-5a", "A9-6", "A9-6a",
               "new-7", "new-7a", "new-8", "new-8a"]

TOY_GRAMMAR = BlockGrammar((LabelRule("[0,-1]*", min_label=2, max_label=2),
                            LabelRule("0*", min_label=3, max_label=3),
                            LabelRule("[0,-1]?", min_label=4, max_label=4)))


def test_remove_a_two_staircase():
    mu = remove_staircase((1, 3, 4, 4, 11, 12), 2)
    assert mu.entries == (1, 1, 0, -2, 3, 2)
    assert add_staircase(mu) == (1, 3, 4, 4, 11, 12)


def test_prepended_zero():
    assert remove_staircase((1, 6, 7), 2, prepend_zero=True).entries == (0, -1, 2, 1)


def test_empty_partition_has_empty_image():
    mu = remove_staircase((), 3)
    assert mu.entries == () and mu.weight == 0 and len(mu) == 0


def test_jagged_drop_is_bounded_by_the_step():
    JaggedPartition((3, 1), 2)
    with pytest.raises(ValueError):
        JaggedPartition((3, 0), 2)
    with pytest.raises(ValueError):
        JaggedPartition((), 0)


def test_reinstatement_shifts_rows():
    one = LaurentSeries([1], 0, 10)
    gf = BivariateSeries([one, one, one, one])
    up = reinstate_staircase(gf, 1)
    assert [up.row(m).valuation() for m in range(4)] == [0, 0, 1, 3]
    assert remove_staircase_gf(up, 1) == gf


def test_reinstatement_refuses_a_short_row():
    gf = BivariateSeries([LaurentSeries([1], 0, 5)] * 3)
    with pytest.raises(ValueError):
        reinstate_staircase(gf, 2, order=8)
    assert reinstate_staircase(gf, 2, order=5).row(2).order == 5


@pytest.mark.parametrize("parts, case, mu", [
    ((1, 6, 7), "a", (0, -1, 2, 1)),
    ((1, 5, 8), "b", (1, 3, 4)),
    ((3, 5, 7), "b", (3, 3, 3)),
])
def test_identity_4a_split(catalog, parts, case, mu):
    got_case, got = classify_4a(parts, catalog["A9-4a"].rules)
    assert (got_case, got.entries) == (case, mu)


def test_identity_4a_split_rejects_foreign_partitions(catalog):
    with pytest.raises(ValueError):
        classify_4a((2, 2), catalog["A9-4a"].rules)


def test_toy_grammar_accepts_the_worked_sequence():
    assert validate_blocks((2, 1, 2, 1, 3, 3, 4, 3), TOY_GRAMMAR)
    assert validate_blocks(JaggedPartition((), 1), TOY_GRAMMAR)


def test_toy_grammar_rejects_wrong_shapes():
    assert not validate_blocks((2, 1, 3, 2), TOY_GRAMMAR)
    assert not validate_blocks((3, 2), TOY_GRAMMAR)
    assert not validate_blocks((4, 3, 4, 3), TOY_GRAMMAR)
    assert not validate_blocks((3, 2, 1), TOY_GRAMMAR)


def test_exception_strings_are_forbidden():
    g = BlockGrammar((LabelRule("[0,1,0,-1]*"),), (Exception_((0, 1, 0, -1)),))
    assert validate_blocks((1, 1), BlockGrammar((LabelRule("0*"),)))
    assert not validate_blocks((2, 3, 2, 1), g)


def test_parser():
    assert parse_block("0") == ("atom", 0)
    assert parse_block("[0,-1]*") == ("rep", ("seq", (("atom", 0), ("atom", -1))), 0, None)
    assert parse_block("0{0,2}") == ("rep", ("atom", 0), 0, 2)
    assert parse_block("0|1")[0] == "alt"
    for bad in ("", "[0", "0,]", "x", "0{2,1}", "*"):
        with pytest.raises(ValueError):
            parse_block(bad)


def test_identity_one_grammar_rejects_a_foreign_partition_at_each_weight(catalog):
    spec = catalog["A9-1"]
    for n in range(1, 31):
        rejected = [p for p in all_partitions(n) if not matches(spec.rules, p)]
        if not rejected:
            continue
        assert any(not validate_blocks(remove_staircase(p, 2), spec.grammar)
                   for p in rejected), n


def test_grammar_series_of_a_single_star():
    # 1* for label 1 only: jagged sequences 1,1,...,1 with a weight of m in row m
    g = BlockGrammar((LabelRule("0*", min_label=1, max_label=1),))
    gf = grammar_generating_function(g, 10, 5)
    for m in range(6):
        assert gf.row(m)[m] == 1
        assert sum(gf.row(m).coeffs) == 1


@pytest.mark.slow
def test_round_trip_for_every_rule_set(catalog):
    seen = set()
    for spec in catalog:
        key = (spec.rules, spec.staircase_step)
        if key in seen:
            continue
        seen.add(key)
        assert staircase_round_trip(spec.rules, spec.staircase_step, 60), spec.id


@pytest.mark.parametrize("s", [1, 2, 3])
def test_staircase_lemma(catalog, s):
    assert staircase_lemma(catalog["A9-1"].rules, s, 40)


@pytest.mark.slow
@pytest.mark.parametrize("id_", GRAMMAR_IDS)
def test_grammar_faces(catalog, id_):
    spec = catalog[id_]
    assert spec.jagged
    for face in spec.jagged:
        res = check_face(spec, face, 40)
        assert res.rejected == (), (id_, face.case)
        assert res.grammar_matches_images and res.closed_form_matches_grammar, (id_, face.case)


def test_identity_4a_has_both_faces(catalog):
    assert sorted(f.case for f in catalog["A9-4a"].jagged) == ["a", "b"]
