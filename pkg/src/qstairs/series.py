"""Truncated Laurent series in q, and x-graded families of them.

A :class:`LaurentSeries` knows its coefficients exactly for exponents
``min_exp .. order`` and nothing above ``order``. Every operation returns a
series whose window only covers exponents that are fully determined by the
operands, so truncation never leaks into results.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from . import kernels


class TruncationError(ValueError):
    """Raised when a coefficient above the tracked order is requested."""


class LaurentSeries:
    """Immutable truncated Laurent series with integer coefficients."""

    __slots__ = ("min_exp", "coeffs")

    def __init__(self, coeffs: Iterable[int] = (), min_exp: int = 0,
                 order: int | None = None):
        coeffs = tuple(coeffs)
        if order is not None:
            length = order - min_exp + 1
            if length < 0:
                raise ValueError(f"order {order} below min_exp {min_exp} - 1")
            if len(coeffs) < length:
                coeffs = coeffs + (0,) * (length - len(coeffs))
            else:
                coeffs = coeffs[:length]
        object.__setattr__(self, "min_exp", int(min_exp))
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentSeries is immutable")

    # construction helpers

    @classmethod
    def zero(cls, order: int, min_exp: int = 0) -> LaurentSeries:
        return cls((), min_exp, order)

    @classmethod
    def one(cls, order: int) -> LaurentSeries:
        return cls.monomial(0, order)

    @classmethod
    def monomial(cls, exp: int, order: int, coeff: int = 1) -> LaurentSeries:
        """``coeff * q**exp`` tracked up to ``order``."""
        lo = min(exp, 0)
        if exp > order:
            return cls((), lo, order)
        c = [0] * (order - lo + 1)
        c[exp - lo] = coeff
        return cls(c, lo)

    @classmethod
    def from_dict(cls, terms: dict[int, int], order: int) -> LaurentSeries:
        lo = min([0, *terms])
        c = [0] * (order - lo + 1)
        for e, v in terms.items():
            if e <= order:
                c[e - lo] += v
        return cls(c, lo)

    # basic accessors

    @property
    def order(self) -> int:
        return self.min_exp + len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, exp: int) -> int:
        if exp > self.order:
            raise TruncationError(f"q^{exp} is above the tracked order {self.order}")
        if exp < self.min_exp:
            return 0
        return self.coeffs[exp - self.min_exp]

    def coefficients(self, start: int, stop: int | None = None) -> list[int]:
        """Coefficients of ``q^start .. q^stop`` inclusive (default: to order)."""
        stop = self.order if stop is None else stop
        return [self[e] for e in range(start, stop + 1)]

    def valuation(self) -> int | None:
        """Lowest exponent with a nonzero coefficient, or None."""
        for i, c in enumerate(self.coeffs):
            if c:
                return self.min_exp + i
        return None

    def items(self):
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.min_exp + i, c

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    # window manipulation

    def truncate(self, order: int) -> LaurentSeries:
        if order > self.order:
            raise TruncationError(f"cannot extend order {self.order} to {order}")
        return LaurentSeries(self.coeffs, self.min_exp, order)

    def with_min_exp(self, min_exp: int) -> LaurentSeries:
        """Same series, window re-based at ``min_exp`` (must not drop terms)."""
        if min_exp > self.min_exp:
            drop = min_exp - self.min_exp
            if any(self.coeffs[:drop]):
                raise ValueError("re-basing would discard nonzero coefficients")
            return LaurentSeries(self.coeffs[drop:], min_exp, self.order)
        pad = (0,) * (self.min_exp - min_exp)
        return LaurentSeries(pad + self.coeffs, min_exp)

    def shift(self, k: int) -> LaurentSeries:
        """Multiply by ``q**k``."""
        return LaurentSeries(self.coeffs, self.min_exp + k)

    # arithmetic

    def __neg__(self):
        return LaurentSeries([-c for c in self.coeffs], self.min_exp)

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentSeries.monomial(0, self.order, other)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return series_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentSeries.monomial(0, self.order, other)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return series_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentSeries([other * c for c in self.coeffs], self.min_exp)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return series_mul(self, other)

    __rmul__ = __mul__

    def invert(self) -> LaurentSeries:
        return series_invert(self)

    # comparison

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        if self.order != other.order:
            return False
        lo = min(self.min_exp, other.min_exp)
        return all(self[e] == other[e] for e in range(lo, self.order + 1))

    def __hash__(self):
        v = self.valuation()
        if v is None:
            return hash(("zero", self.order))
        return hash((self.order, self.coeffs[v - self.min_exp:]))

    def first_mismatch(self, other: LaurentSeries, upto: int | None = None):
        """First exponent where the two series differ on their common window.

        Returns ``(exponent, self_coeff, other_coeff)`` or None.
        """
        top = min(self.order, other.order)
        if upto is not None:
            top = min(top, upto)
        for e in range(min(self.min_exp, other.min_exp), top + 1):
            a, b = self[e], other[e]
            if a != b:
                return e, a, b
        return None

    def __repr__(self):
        return f"LaurentSeries({format_series(self)}, order={self.order})"


def format_series(s: LaurentSeries, max_terms: int = 8) -> str:
    terms = []
    for e, c in s.items():
        if len(terms) == max_terms:
            terms.append("...")
            break
        mono = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append("-" + mono)
        else:
            terms.append(f"{c}*{mono}")
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def series_add(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    lo = min(a.min_exp, b.min_exp)
    hi = min(a.order, b.order)
    out = [0] * (hi - lo + 1)
    for s in (a, b):
        off = s.min_exp - lo
        for i, c in enumerate(s.coeffs[: max(0, hi - s.min_exp + 1)]):
            out[off + i] += c
    return LaurentSeries(out, lo)


def series_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    lo = a.min_exp + b.min_exp
    hi = min(a.order + b.min_exp, b.order + a.min_exp)
    n = hi - lo + 1
    if n <= 0:
        return LaurentSeries((), lo, hi)
    return LaurentSeries(kernels.convolve(a.coeffs, b.coeffs, n), lo)


def series_invert(a: LaurentSeries) -> LaurentSeries:
    """Multiplicative inverse of a series whose leading coefficient is +-1."""
    v = a.valuation()
    if v is None:
        raise ZeroDivisionError("series is zero on its tracked window")
    u = a.coeffs[v - a.min_exp:]
    lead = u[0]
    if lead not in (1, -1):
        raise ValueError(f"leading coefficient {lead} is not a unit over the integers")
    n = len(u)
    inv = [0] * n
    inv[0] = lead
    for k in range(1, n):
        acc = 0
        for i in range(1, k + 1):
            ui = u[i]
            if ui:
                acc += ui * inv[k - i]
        inv[k] = -lead * acc
    # 1/a = q^-v / u, known up to exponent -v + (n - 1)
    return LaurentSeries(inv, -v)


class BivariateSeries:
    """x-graded family: row ``m`` is the coefficient of ``x**m``.

    Rows may carry different windows (pre-staircase generating functions are
    tracked to a row-dependent order); ``order`` is the smallest row order.
    """

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[LaurentSeries]):
        if not rows:
            raise ValueError("a bivariate series needs at least the x^0 row")
        object.__setattr__(self, "rows", tuple(rows))

    def __setattr__(self, name, value):
        raise AttributeError("BivariateSeries is immutable")

    @classmethod
    def from_terms(cls, terms: dict[tuple[int, int], int], max_x: int,
                   order: int) -> BivariateSeries:
        """Build from ``{(x_deg, q_exp): coeff}`` with every row to ``order``."""
        per_row: list[dict[int, int]] = [{} for _ in range(max_x + 1)]
        for (m, e), c in terms.items():
            if m <= max_x:
                per_row[m][e] = per_row[m].get(e, 0) + c
        return cls([LaurentSeries.from_dict(d, order) for d in per_row])

    @classmethod
    def one(cls, max_x: int, order: int) -> BivariateSeries:
        return cls.from_terms({(0, 0): 1}, max_x, order)

    @property
    def max_x(self) -> int:
        return len(self.rows) - 1

    @property
    def order(self) -> int:
        return min(r.order for r in self.rows)

    def row(self, m: int) -> LaurentSeries:
        return self.rows[m]

    def __getitem__(self, key):
        m, e = key
        return self.rows[m][e]

    def __mul__(self, other):
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        return bivariate_mul(self, other)

    def __add__(self, other):
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        top = min(self.max_x, other.max_x)
        return BivariateSeries([self.rows[m] + other.rows[m] for m in range(top + 1)])

    def __eq__(self, other):
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        return self.rows == other.rows

    __hash__ = None

    def first_mismatch(self, other: BivariateSeries, max_x: int | None = None):
        """First ``(x_deg, q_exp, a, b)`` where the two differ, or None."""
        top = min(self.max_x, other.max_x)
        if max_x is not None:
            top = min(top, max_x)
        for m in range(top + 1):
            mm = self.rows[m].first_mismatch(other.rows[m])
            if mm is not None:
                return (m, *mm)
        return None

    def __repr__(self):
        return f"BivariateSeries(max_x={self.max_x}, order={self.order})"


def bivariate_mul(a: BivariateSeries, b: BivariateSeries,
                  max_x: int | None = None) -> BivariateSeries:
    cap = a.max_x + b.max_x if max_x is None else min(max_x, a.max_x + b.max_x)
    rows = []
    for m in range(cap + 1):
        acc = None
        for i in range(max(0, m - b.max_x), min(m, a.max_x) + 1):
            p = series_mul(a.rows[i], b.rows[m - i])
            acc = p if acc is None else series_add(acc, p)
        rows.append(acc)
    return BivariateSeries(rows)


def set_x_to_one(a: BivariateSeries) -> LaurentSeries:
    """Sum of all rows; exact only if rows above ``max_x`` vanish to ``order``."""
    acc = a.rows[0]
    for r in a.rows[1:]:
        acc = series_add(acc, r)
    return acc
