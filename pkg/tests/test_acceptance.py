"""The nine acceptance criteria, each with a one-line verdict in the run summary."""

import time

import pytest

from qstairs.multisum import evaluate
from qstairs.partitions import enumerate_partitions, multiset_partitions
from qstairs.verify import (DEFAULT_BOXES, base_form, check_face, check_intrigue_prod,
                            check_intrigue_sum, euler_identities, jagged_linear, periodicity,
                            search_linear_shifts, staircase_lemma, staircase_round_trip,
                            verify_spec, verify_variant)

SUM_SIDE_AT_12 = [(12,), (1, 11), (2, 10), (3, 9), (4, 8), (1, 3, 8), (5, 7), (1, 4, 7),
                  (6, 6), (2, 4, 6)]
PRODUCT_SIDE_AT_12 = [(1, 11), (4, 8), (1, 1, 1, 1, 8), (6, 6), (1, 1, 4, 6),
                      (1, 1, 1, 1, 1, 1, 6), (4, 4, 4), (1, 1, 1, 1, 4, 4),
                      (1,) * 8 + (4,), (1,) * 12]

# the companions of Identities 1-3, as shifts of the expanded linear term i + 2j + 3k
COMPANION_SHIFTS = {"A9-4": (0, 1, 0), "A9-4a": (1, -3, 0), "A9-5": (0, -2, -3),
                    "A9-5a": (1, 2, 3), "A9-6": (0, -1, 0), "A9-6a": (2, 3, 6)}
FOUR_INDEX_VECTORS = {"new-7": (1, 3, 6, 6), "new-7a": (3, 5, 6, 10), "new-8": (2, 3, 5, 6)}
VARIANT_IDS = ["KR-I5", "R-I5a", "R-I6a"]


def record(acceptance, n, ok, detail):
    acceptance[n] = (bool(ok), detail)
    assert ok, detail


def test_criterion_1_counts_at_twelve(catalog, acceptance):
    start = time.perf_counter()
    sums = enumerate_partitions(catalog["A9-1"].rules, 12)
    w = catalog["A9-1"].product.witness_model()
    prods = multiset_partitions(12, w.free, w.distinct, w.modulus)
    dt = time.perf_counter() - start
    ok = sums == SUM_SIDE_AT_12 and prods == PRODUCT_SIDE_AT_12 and dt < 1
    record(acceptance, 1, ok, f"{len(sums)} sum-side and {len(prods)} product-side "
                              f"partitions of 12, listings match, {dt:.3f}s")


def test_criterion_2_full_catalog(catalog, acceptance):
    failures, slowest = [], 0.0
    for spec in catalog:
        r = verify_spec(spec, 200, 80)
        slowest = max(slowest, r.wall_time)
        if not r.passed or r.wall_time >= 60:
            failures.append((spec.id, r.first_failure()))
    ok = len(catalog) == 22 and not failures
    record(acceptance, 2, ok, f"{len(catalog)} entries, sum-product to q^200 and rules to "
                              f"q^80, slowest {slowest:.2f}s, failures {failures}")


def test_criterion_3_euler(acceptance):
    results = {a: euler_identities(200, a) for a in (1, 2, 3)}
    ok = all(all(v) for v in results.values())
    record(acceptance, 3, ok, f"both expansions at x = q, q^2, q^3 to q^200: {results}")


def test_criterion_4_intrigue(acceptance):
    sums = check_intrigue_sum(60, 30, bijection_weight=40)
    prods = check_intrigue_prod(200)
    record(acceptance, 4, sums and prods,
           f"S1 = S2 + xqS3 to q^60 for x-degree <= 30 with bijection to n = 40: {sums}; "
           f"product form to q^200: {prods}")


@pytest.mark.slow
def test_criterion_5_staircase(catalog, acceptance):
    seen, bad = set(), []
    for spec in catalog:
        key = (spec.rules, spec.staircase_step)
        if key in seen:
            continue
        seen.add(key)
        if not staircase_round_trip(spec.rules, spec.staircase_step, 60):
            bad.append(spec.id)
    lemma = {s: staircase_lemma(catalog["A9-1"].rules, s, 40) for s in (1, 2, 3)}
    ok = not bad and all(lemma.values())
    record(acceptance, 5, ok, f"round trip to order 60 for {len(seen)} rule sets "
                              f"(failures {bad}); lemma for s = 1, 2, 3: {lemma}")


@pytest.mark.slow
def test_criterion_6_grammars(catalog, acceptance):
    faces, images, bad = 0, 0, []
    for spec in catalog:
        for face in spec.jagged:
            res = check_face(spec, face, 40)
            faces += 1
            images += res.images
            if not res.passed:
                bad.append((spec.id, face.case))
    split = sorted(f.case for f in catalog["A9-4a"].jagged) == ["a", "b"]
    ok = not bad and split and faces >= 17
    record(acceptance, 6, ok, f"{faces} grammar faces, {images} jagged images to n = 40, "
                              f"closed forms to order 40, 4a split into cases a and b: {split}; "
                              f"failures {bad}")


def test_criterion_7_periodicity(catalog, acceptance):
    bad = [s.id for s in catalog if not periodicity(s.product, 200)]
    one = periodicity(catalog["A9-1"].product, 200)
    pattern_ok = one.support(1) == [1, 4, 6, 8, 11] and one.support(-1) == []
    record(acceptance, 7, not bad and pattern_ok,
           f"every product periodic with entries in {{-1, 0, 1}} (failures {bad}); "
           f"Identity 1 pattern {one.support(1)} mod 12")


@pytest.mark.slow
def test_criterion_8_search(catalog, acceptance):
    start = time.perf_counter()
    a9 = search_linear_shifts(base_form(catalog["A9-1"].sum), DEFAULT_BOXES["A9"], 120, 12,
                              dedupe=False)
    four = search_linear_shifts(base_form(catalog["KR-I6-alt"].sum),
                                DEFAULT_BOXES["four-index"], 120, 12, dedupe=False)
    dt = time.perf_counter() - start
    a9_found = {h.linear for h in a9}
    four_found = {h.linear for h in four}
    wanted = {id_: tuple(s + b for s, b in zip(shift, (1, 2, 3)))
              for id_, shift in COMPANION_SHIFTS.items()}
    catalog_ok = all(jagged_linear(catalog[i].sum) == v
                     for i, v in {**wanted, **FOUR_INDEX_VECTORS}.items())
    ok = (set(wanted.values()) <= a9_found and set(FOUR_INDEX_VECTORS.values()) <= four_found
          and catalog_ok and dt < 600)
    record(acceptance, 8, ok, f"{len(a9)} hits in the A9 box contain the six companion "
                              f"vectors, {len(four)} hits in the four-index box contain "
                              f"the three four-index vectors, {dt:.1f}s")


def test_criterion_9_variants(catalog, acceptance):
    notes = []
    ok = True
    for id_ in VARIANT_IDS:
        spec = catalog[id_]
        kept = verify_spec(spec, 200, 80).passed
        rejected = [verify_variant(id_, v.label, 200, catalog) for v in spec.rejected_variants]
        one_fails = len(rejected) == 1 and not rejected[0].passed
        reported = one_fails and rejected[0].exponent is not None
        ok = ok and kept and one_fails and reported
        if rejected:
            c = rejected[0]
            notes.append(f"{id_}: catalog form passes, '{spec.rejected_variants[0].label}' "
                         f"fails at q^{c.exponent} ({c.left} vs {c.right})")
    record(acceptance, 9, ok, "; ".join(notes))
