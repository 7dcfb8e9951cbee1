"""q-Pochhammer symbols, periodic products and the inverse Euler transform.

Convention: ``(a; q)_n = prod_{t=0}^{n-1} (1 - a q^t)`` and ``(a; q)_inf`` is
its limit, so ``(q; q)_inf`` includes the factor ``1 - q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .series import BivariateSeries, LaurentSeries


# ---------------------------------------------------------------- univariate

def _mul_binomial(c: list[int], coef: int, e: int, n: int) -> None:
    # c <- c * (1 - coef q^e), in place on exponents 0..n, e >= 1
    for k in range(n, e - 1, -1):
        x = c[k - e]
        if x:
            c[k] -= coef * x


def _div_binomial(c: list[int], coef: int, e: int, n: int) -> None:
    # c <- c / (1 - coef q^e), coef = +-1, e >= 1
    for k in range(e, n + 1):
        x = c[k - e]
        if x:
            c[k] += coef * x


def _apply(c: list[int], coef: int, e: int, power: int, n: int) -> None:
    op = _mul_binomial if power > 0 else _div_binomial
    for _ in range(abs(power)):
        op(c, coef, e, n)


def pochhammer_finite(a_exp: int, a_sign: int, q_step: int, n: int,
                      order: int) -> LaurentSeries:
    """``prod_{t<n} (1 - a_sign q^(a_exp + t q_step))`` truncated at ``order``.

    >>> pochhammer_finite(1, 1, 1, 2, 4).coefficients(0)
    [1, -1, -1, 1, 0]
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    if q_step <= 0:
        raise ValueError("q_step must be positive")
    result = LaurentSeries.one(order)
    dense = [1] + [0] * order
    for t in range(n):
        e = a_exp + t * q_step
        if e >= 1:
            if e <= order:
                _mul_binomial(dense, a_sign, e, order)
        else:
            # factors with nonpositive exponent are rare; multiply generically
            result = result * LaurentSeries.from_dict({0: 1, e: -a_sign}, order)
    return result * LaurentSeries(dense, 0)


def pochhammer_infinite(a_exp: int, a_sign: int, q_step: int,
                        order: int) -> LaurentSeries:
    """``prod_{t>=0} (1 - a_sign q^(a_exp + t q_step))`` truncated at ``order``."""
    if q_step <= 0:
        raise ValueError("q_step must be positive for an infinite product")
    if a_exp < 1:
        raise ValueError(f"(q^{a_exp}; q^{q_step})_inf has a factor with "
                         "nonpositive exponent and does not converge formally")
    dense = [1] + [0] * order
    for e in range(a_exp, order + 1, q_step):
        _mul_binomial(dense, a_sign, e, order)
    return LaurentSeries(dense, 0)


@dataclass(frozen=True)
class PochhammerFactor:
    """``(sign * x^x_pow * q^q_exp ; q^q_step)_inf ** power``."""

    q_exp: int
    q_step: int
    sign: int = 1
    power: int = 1
    x_pow: int = 0

    def to_json(self) -> dict:
        out = {"q_exp": self.q_exp, "q_step": self.q_step}
        if self.sign != 1:
            out["sign"] = self.sign
        if self.power != 1:
            out["power"] = self.power
        if self.x_pow:
            out["x_pow"] = self.x_pow
        return out

    @classmethod
    def from_json(cls, d: Mapping) -> PochhammerFactor:
        return cls(int(d["q_exp"]), int(d["q_step"]), int(d.get("sign", 1)),
                   int(d.get("power", 1)), int(d.get("x_pow", 0)))


@dataclass(frozen=True)
class WitnessModel:
    """Parts a product side counts: ``free`` classes with any multiplicity,
    ``distinct`` classes at most once each (residues taken mod ``modulus``)."""

    modulus: int
    free: tuple[int, ...] = ()
    distinct: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "free": list(self.free),
                "distinct": list(self.distinct)}

    @classmethod
    def from_json(cls, d: Mapping) -> WitnessModel:
        return cls(int(d["modulus"]), tuple(d.get("free", ())),
                   tuple(d.get("distinct", ())))


@dataclass(frozen=True)
class ProductSpec:
    """``prod_r prod_{m = r mod M} (1 - q^m)^(-exps[r])`` times extra factors.

    Residue 0 stands for the positive multiples of the modulus.
    """

    modulus: int = 1
    exponents: Mapping[int, int] = field(default_factory=dict)
    factors: tuple[PochhammerFactor, ...] = ()
    witness: WitnessModel | None = None

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        clean = {}
        for r, a in dict(self.exponents).items():
            r = int(r) % self.modulus
            clean[r] = clean.get(r, 0) + int(a)
        object.__setattr__(self, "exponents",
                           {r: a for r, a in sorted(clean.items()) if a})
        object.__setattr__(self, "factors", tuple(self.factors))
        for f in self.factors:
            if f.x_pow:
                raise ValueError("univariate products cannot carry powers of x")

    @classmethod
    def from_residues(cls, modulus: int, pos: Sequence[int] = (),
                      neg: Sequence[int] = (), **kw) -> ProductSpec:
        """``pos`` classes sit in the denominator, ``neg`` in the numerator."""
        ex: dict[int, int] = {}
        for r in pos:
            ex[r % modulus] = ex.get(r % modulus, 0) + 1
        for r in neg:
            ex[r % modulus] = ex.get(r % modulus, 0) - 1
        return cls(modulus, ex, **kw)

    @property
    def residues_pos(self) -> list[int]:
        return [r for r, a in self.exponents.items() for _ in range(max(a, 0))]

    @property
    def residues_neg(self) -> list[int]:
        return [r for r, a in self.exponents.items() for _ in range(max(-a, 0))]

    def exponent_pattern(self) -> dict[int, int]:
        """Residue -> inverse Euler exponent, for the residue part only."""
        return {r: self.exponents.get(r, 0) for r in range(self.modulus)}

    def reciprocal(self) -> ProductSpec:
        return ProductSpec(self.modulus, {r: -a for r, a in self.exponents.items()},
                           tuple(PochhammerFactor(f.q_exp, f.q_step, f.sign,
                                                  -f.power) for f in self.factors))

    def to_json(self) -> dict:
        out = {"modulus": self.modulus, "residues_pos": self.residues_pos,
               "residues_neg": self.residues_neg}
        if self.factors:
            out["factors"] = [f.to_json() for f in self.factors]
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out

    @classmethod
    def from_json(cls, d: Mapping) -> ProductSpec:
        factors = tuple(PochhammerFactor.from_json(f) for f in d.get("factors", ()))
        witness = d.get("witness")
        return cls.from_residues(
            int(d.get("modulus", 1)), d.get("residues_pos", ()),
            d.get("residues_neg", ()), factors=factors,
            witness=WitnessModel.from_json(witness) if witness else None)

    def witness_model(self) -> WitnessModel:
        """Explicit witness model, or the one implied by a pure denominator."""
        if self.witness is not None:
            return self.witness
        if self.factors or any(a != 1 for a in self.exponents.values()):
            raise ValueError("product has no multiset-partition reading; "
                             "attach an explicit witness model")
        return WitnessModel(self.modulus, tuple(self.exponents))


def expand_product(spec: ProductSpec, order: int) -> LaurentSeries:
    """Expand a product side exactly to ``order``."""
    dense = [1] + [0] * order
    for r, a in spec.exponents.items():
        start = r if r else spec.modulus
        for m in range(start, order + 1, spec.modulus):
            # (1 - q^m)^(-a): a > 0 divides
            _apply(dense, 1, m, -a, order)
    for f in spec.factors:
        if f.q_step <= 0 or f.q_exp < 1:
            raise ValueError(f"factor {f} does not converge formally")
        for e in range(f.q_exp, order + 1, f.q_step):
            _apply(dense, f.sign, e, f.power, order)
    return LaurentSeries(dense, 0)


# ------------------------------------------------------------- bivariate

def _shift_rows(g: np.ndarray, a: int, e: int) -> np.ndarray:
    # out[m, i] = g[m - a, i - e], zero outside the grid
    out = np.zeros_like(g)
    rows, width = g.shape
    if a >= rows or abs(e) >= width:
        return out
    src = g[: rows - a]
    if e >= 0:
        out[a:, e:] = src[:, : width - e]
    else:
        out[a:, : width + e] = src[:, -e:]
    return out


def expand_bivariate(terms: Sequence[tuple[int, int, int, Sequence[PochhammerFactor]]],
                     max_x: int, order: int,
                     row_orders: Sequence[int] | None = None) -> BivariateSeries:
    """Expand ``sum coef * x^x_pow * q^q_pow * prod(factors)`` by x-degree.

    ``terms`` holds ``(coef, x_pow, q_pow, factors)``. Row ``m`` is returned up
    to ``row_orders[m]`` (default ``order`` for every row). Factors may carry
    negative q-exponents as long as they also carry a positive power of x;
    the grid is widened so that every returned coefficient is exact.
    """
    if row_orders is None:
        row_orders = [order] * (max_x + 1)
    row_orders = list(row_orders)[: max_x + 1]
    top = max(row_orders)

    # lowest q-exponent per unit of x, and the extra headroom it costs
    rate = 0
    for _, _, _, factors in terms:
        for f in factors:
            if f.x_pow <= 0:
                if f.q_exp < 1 or f.q_step <= 0:
                    raise ValueError(f"pure-q factor {f} does not converge")
                continue
            if f.q_exp < 0:
                rate = max(rate, -(f.q_exp // f.x_pow))  # ceil(-e/a)
    lo_prod = -rate * max_x
    lo_pref = min([0] + [qp for _, _, qp, _ in terms])
    grid_top = top + rate * max_x - min(0, lo_pref)
    width = grid_top - lo_prod + 1

    total = None
    for coef, x_pow, q_pow, factors in terms:
        g = np.zeros((max_x + 1, width), dtype=object)
        g[0, -lo_prod] = 1
        for f in factors:
            g = _apply_factor(g, f, lo_prod, grid_top, max_x)
        shifted = coef * _shift_rows(g, x_pow, q_pow)
        total = shifted if total is None else total + shifted
    lo = lo_prod + min(0, lo_pref)
    rows = []
    for m in range(max_x + 1):
        coeffs = [int(v) for v in total[m, : row_orders[m] - lo_prod + 1]]
        if lo < lo_prod:
            coeffs = [0] * (lo_prod - lo) + coeffs
            coeffs = coeffs[: row_orders[m] - lo + 1]
        rows.append(LaurentSeries(coeffs, lo, row_orders[m]))
    return BivariateSeries(rows)


def _apply_factor(g, f: PochhammerFactor, lo: int, top: int, max_x: int):
    span = top - lo
    t = 0
    while True:
        e = f.q_exp + t * f.q_step
        if f.x_pow == 0 and e > span:
            break
        if f.x_pow > max_x:
            break
        if f.x_pow > 0 and e > span:
            break
        for _ in range(abs(f.power)):
            if f.power > 0:
                g = g - f.sign * _shift_rows(g, f.x_pow, e)
            else:
                g = _divide(g, f.sign, f.x_pow, e)
        t += 1
        if f.q_step == 0:
            break
    return g


def _divide(g, c: int, a: int, e: int):
    # g / (1 - c x^a q^e)
    g = g.copy()
    rows, width = g.shape
    if a > 0:
        for m in range(a, rows):
            src = g[m - a]
            if e >= 0:
                g[m, e:] += c * src[: width - e]
            else:
                g[m, : width + e] += c * src[-e:]
    else:
        if e <= 0:
            raise ValueError("cannot divide by 1 - c q^e with e <= 0 and no x")
        for start in range(e, width, e):
            stop = min(start + e, width)
            g[:, start:stop] += c * g[:, start - e: stop - e]
    return g


# -------------------------------------------------------- inverse Euler

def inverse_euler(f: LaurentSeries, bound: int = 0) -> list[int] | None:
    """Exponents ``a_m`` with ``f = prod_{m>=1} (1 - q^m)^(-a_m)`` to f's order.

    The result is indexed by ``m`` (entry 0 is always 0). With ``bound > 0``
    the transform aborts and returns None as soon as ``|a_m| > bound``.
    """
    if f.min_exp < 0 and any(f[e] for e in range(f.min_exp, 0)):
        raise ValueError("inverse Euler transform needs a power series")
    if f[0] != 1:
        raise ValueError("inverse Euler transform needs constant term 1")
    coeffs = f.coefficients(0)
    return kernels.inverse_euler(coeffs, bound)


@dataclass(frozen=True)
class Periodicity:
    periodic: bool
    modulus: int
    pattern: dict[int, int]
    reason: str = ""

    def __bool__(self):
        return self.periodic

    def support(self, value: int = 1) -> list[int]:
        return sorted(r for r, a in self.pattern.items() if a == value)


def is_periodic_pm1(a: Sequence[int], modulus: int, guard: int = 0) -> Periodicity:
    """Is ``a_1, a_2, ...`` periodic mod ``modulus`` with entries in {-1, 0, 1}?

    ``a`` is indexed by ``m`` as returned by :func:`inverse_euler`.
    """
    n = len(a) - 1
    if n < 2 * modulus + guard:
        raise ValueError(f"need at least {2 * modulus + guard} terms, got {n}")
    pattern = {m % modulus: a[m] for m in range(1, modulus + 1)}
    for m in range(1, n + 1):
        if a[m] not in (-1, 0, 1):
            return Periodicity(False, modulus, {}, f"a_{m} = {a[m]}")
        if a[m] != pattern[m % modulus]:
            return Periodicity(False, modulus, {}, f"a_{m} breaks the period")
    return Periodicity(True, modulus, dict(sorted(pattern.items())))
