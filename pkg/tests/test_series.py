from hypothesis import given, strategies as st
import pytest

from qstairs.series import (BivariateSeries, LaurentSeries, TruncationError,
                            bivariate_mul, set_x_to_one)


def naive_mul(a: dict, b: dict, order: int) -> dict:
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            if i + j <= order:
                out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


coeff_dicts = st.dictionaries(st.integers(0, 12), st.integers(-5, 5), max_size=8)


def test_geometric_series_inverts_one_minus_q():
    g = LaurentSeries.from_dict({0: 1, 1: -1}, 20).invert()
    assert g.coefficients(0, 20) == [1] * 21


def test_reading_past_the_order_raises():
    s = LaurentSeries([1, 2, 3], 0, 2)
    assert s[-4] == 0
    with pytest.raises(TruncationError):
        s[3]


def test_laurent_product_tracks_the_lowest_exponent():
    a = LaurentSeries.monomial(-2, 10)
    b = LaurentSeries([1, 1, 1], 0, 10)
    c = a * b
    assert c.min_exp == -2 and c[-2] == c[-1] == c[0] == 1
    assert c.order == 8


def test_invert_needs_a_unit_lead():
    with pytest.raises(ValueError):
        LaurentSeries([2, 1], 0, 5).invert()


def test_first_mismatch_reports_exponent_and_both_values():
    a = LaurentSeries([1, 2, 3, 4], 0, 3)
    b = LaurentSeries([1, 2, 5, 4], 0, 3)
    assert a.first_mismatch(b) == (2, 3, 5)
    assert a.first_mismatch(a) is None


@given(coeff_dicts, coeff_dicts)
def test_product_matches_schoolbook_multiplication(a, b):
    order = 15
    got = LaurentSeries.from_dict(a, order) * LaurentSeries.from_dict(b, order)
    want = naive_mul(a, b, order)
    assert {e: c for e, c in got.items() if c} == want


@given(coeff_dicts, coeff_dicts, coeff_dicts)
def test_ring_laws(a, b, c):
    A, B, C = (LaurentSeries.from_dict(d, 12) for d in (a, b, c))
    assert A * B == B * A
    assert (A * B) * C == A * (B * C)
    assert A * (B + C) == A * B + A * C


@given(st.dictionaries(st.integers(1, 12), st.integers(-3, 3), max_size=6))
def test_inverse_times_series_is_one(tail):
    s = LaurentSeries.from_dict({0: 1, **tail}, 14)
    assert (s * s.invert()).truncate(14) == LaurentSeries.one(14)


def test_bivariate_rows_multiply_by_x_degree():
    a = BivariateSeries.from_terms({(0, 0): 1, (1, 1): 1}, 3, 6)      # 1 + x q
    b = BivariateSeries.from_terms({(0, 0): 1, (1, 2): -1}, 3, 6)     # 1 - x q^2
    c = bivariate_mul(a, b)
    assert c[1, 1] == 1 and c[1, 2] == -1 and c[2, 3] == -1
    assert set_x_to_one(c).coefficients(0, 6) == [1, 1, -1, -1, 0, 0, 0]
