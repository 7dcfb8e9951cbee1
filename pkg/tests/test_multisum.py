import itertools

import pytest
from hypothesis import given, settings, strategies as st

from qstairs.multisum import BoundError, MultiSumSpec, evaluate, pre_staircase_form
from qstairs.qproducts import ProductSpec, expand_product
from qstairs.series import set_x_to_one
from qstairs.staircase import reinstate_staircase


def _inv_poch(d, n, order):
    """1/(q^d;q^d)_n to order, by repeated division by (1 - q^(d t))."""
    c = [1] + [0] * order
    for t in range(1, n + 1):
        e = d * t
        for k in range(e, order + 1):
            c[k] += c[k - e]
    return c


def naive(spec, order, box, pad=40):
    """Brute force over a generous index box, no pruning."""
    out = {}
    top = order + pad
    for idx in itertools.product(range(box + 1), repeat=spec.rank):
        sgn = -1 if sum(s * i for s, i in zip(spec.signs, idx)) % 2 else 1
        den = [1] + [0] * top
        for d, n in zip(spec.denom_steps, idx):
            f = _inv_poch(d, n, top)
            den = [sum(den[j] * f[k - j] for j in range(k + 1)) for k in range(top + 1)]
        for bi, b in enumerate(spec.branches):
            e = spec.exponent2(idx, bi) // 2
            assert e >= -pad
            for k in range(order - e + 1):
                if den[k]:
                    out[e + k] = out.get(e + k, 0) + sgn * b.coef * den[k]
    return out


def _coeffs(series, order):
    return {n: c for n, c in series.items() if c and n <= order}


def test_identity_one_counts(catalog):
    s = evaluate(catalog["A9-1"].sum, 12)
    assert s[0] == 1 and s[12] == 10


def test_capparelli_two_index_form():
    spec = MultiSumSpec.single(0, (1, 1), (1, 3), (0, 0), [[4, 6], [6, 12]], (0, 0))
    prod = ProductSpec.from_residues(12, [2, 3, 9, 10])
    assert evaluate(spec, 40) == expand_product(prod, 40)


@pytest.mark.parametrize("id_", ["A9-1", "KR-I6", "new-8a", "R-I6a"])
def test_against_brute_force(catalog, id_):
    spec = catalog[id_].sum
    order = 18
    box = 12 if spec.rank < 4 else 7
    assert _coeffs(evaluate(spec, order), order) == _coeffs_dict(naive(spec, order, box), order)


def _coeffs_dict(d, order):
    return {n: c for n, c in d.items() if c and n <= order}


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2), st.lists(st.integers(0, 4), min_size=2, max_size=2),
       st.lists(st.integers(-2, 6), min_size=2, max_size=2),
       st.lists(st.integers(0, 1), min_size=2, max_size=2),
       st.lists(st.integers(1, 3), min_size=2, max_size=2))
def test_random_specs_against_brute_force(stair, diag, lin, signs, steps):
    spec = MultiSumSpec.single(stair, (1, 2), steps, signs, [2 * d for d in diag],
                               [2 * x for x in lin])
    order = 14
    try:
        got = evaluate(spec, order)
    except BoundError:
        return
    assert _coeffs(got, order) == _coeffs_dict(naive(spec, order, 16), order)


def test_loop_order_does_not_matter(catalog):
    spec = catalog["KR-I6"].sum
    b = spec.branches[0]
    perm = [2, 0, 1]
    swapped = MultiSumSpec.single(
        spec.staircase, [spec.x_weights[p] for p in perm], [spec.denom_steps[p] for p in perm],
        [spec.signs[p] for p in perm], [[b.quad2[p][q] for q in perm] for p in perm],
        [b.lin2[p] for p in perm], b.const2, b.x_offset, b.coef)
    assert evaluate(spec, 120) == evaluate(swapped, 120)


def test_pre_staircase_form_of_identity_one(catalog):
    spec = catalog["A9-1"].sum
    jag = pre_staircase_form(spec, 2)
    b = jag.branches[0]
    # i + 6j + 3k^2 + 6k, doubled
    for idx in itertools.product(range(4), repeat=3):
        i, j, k = idx
        assert jag.exponent2(idx) == 2 * (i + 6 * j + 3 * k * k + 6 * k)
    assert jag.staircase == 0 and b.x_offset == 0


def test_pre_staircase_form_of_kr_i6(catalog):
    jag = pre_staircase_form(catalog["KR-I6"].sum, 1)
    for idx in itertools.product(range(4), repeat=3):
        i, j, k = idx
        assert jag.exponent2(idx) == 2 * (2 * i + j * j + 4 * j + 5 * k)


def test_zero_staircase_is_unchanged(catalog):
    spec = catalog["A9-1"].sum
    assert pre_staircase_form(spec, 0) is spec


@pytest.mark.parametrize("id_", ["A9-1", "A9-3", "KR-I6", "new-7"])
def test_reinstating_the_jagged_form(catalog, id_):
    entry = catalog[id_]
    s, order = entry.staircase_step, 60
    jag = evaluate(pre_staircase_form(entry.sum, s), order, track_x=True, reinstate=s)
    back = reinstate_staircase(jag, s, order)
    assert back == evaluate(entry.sum, order, track_x=True, max_x=back.max_x)
    assert set_x_to_one(back) == evaluate(entry.sum, order)


def test_sum_sides_are_nonnegative(catalog):
    for spec in catalog:
        assert all(c >= 0 for _, c in evaluate(spec.sum, 200).items()), spec.id


def test_bound_certification_rejects_unbounded_regions():
    # no staircase, no quadratic term: the q-exponent never grows
    with pytest.raises(BoundError):
        evaluate(MultiSumSpec.single(0, (1,), (1,), (0,), (0,), (-2,)), 10)
    with pytest.raises(BoundError):
        evaluate(MultiSumSpec.single(1, (1, 0), (1, 1), (0, 0), (2, 0), (0, -2)), 10)
    with pytest.raises(BoundError):
        evaluate(MultiSumSpec.single(1, (1, 1), (1, 1), (0, 0), [[2, -1], [-1, 2]], (0, 0)), 10)


def test_half_integral_exponents_are_refused():
    with pytest.raises(ValueError):
        evaluate(MultiSumSpec.single(0, (1,), (1,), (0,), (1,), (0,)), 10)


def test_index_bounds_are_certified(catalog):
    # raising any index one past where the evaluator stopped already exceeds the order
    spec = catalog["A9-1"].sum
    order = 30
    cap = [0] * spec.rank
    for idx in itertools.product(range(40), repeat=spec.rank):
        if min(spec.exponent2(idx, b) for b in range(len(spec.branches))) <= 2 * order:
            cap = [max(c, i) for c, i in zip(cap, idx)]
    assert all(c < 39 for c in cap)
    assert _coeffs(evaluate(spec, order), order) == _coeffs_dict(naive(spec, order, max(cap)),
                                                                 order)


def test_node_budget():
    spec = MultiSumSpec.single(1, (1, 1), (1, 1), (0, 0), (0, 0), (0, 0))
    with pytest.raises(BoundError):
        evaluate(spec, 200, max_nodes=50)


def test_json_round_trip(catalog):
    for spec in catalog:
        assert MultiSumSpec.from_json(spec.sum.to_json()) == spec.sum


def test_bivariate_rows(catalog):
    spec = catalog["A9-1"].sum
    biv = evaluate(spec, 30, track_x=True)
    assert set_x_to_one(biv) == evaluate(spec, 30)
    # x^1 row: single parts 1, 2, 3, ... (one part of each size)
    assert [biv.row(1)[n] for n in range(1, 8)] == [1] * 7


def test_negative_order_is_refused(catalog):
    with pytest.raises(ValueError):
        evaluate(catalog["A9-1"].sum, -1)
