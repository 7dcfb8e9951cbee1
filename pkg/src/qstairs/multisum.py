"""Multi-index q-hypergeometric sums with quadratic exponents.

A :class:`MultiSumSpec` describes

    sum_b coef_b * sum_{idx >= 0} (-1)^(signs . idx) x^m q^E / prod_r (q^d_r; q^d_r)_{idx_r}

with ``m = w . idx + x_offset_b`` and

    E = s * m (m - 1) / 2 + (idx^T Q2_b idx + L2_b . idx + C2_b) / 2.

``s`` is the staircase step. Quadratic, linear and constant data are stored
doubled so that half-integral exponents stay integral in storage.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Sequence

from . import kernels
from .series import BivariateSeries, LaurentSeries


class BoundError(ValueError):
    """The summation region could not be certified finite at this order."""


def _matrix(q, r: int) -> tuple[tuple[int, ...], ...]:
    if q is None:
        return tuple(tuple(0 for _ in range(r)) for _ in range(r))
    q = list(q)
    if q and not isinstance(q[0], (list, tuple)):
        if len(q) != r:
            raise ValueError("diagonal quad2 has the wrong length")
        return tuple(tuple(q[i] if i == j else 0 for j in range(r)) for i in range(r))
    if len(q) != r or any(len(row) != r for row in q):
        raise ValueError("quad2 must be r x r")
    m = tuple(tuple(int(x) for x in row) for row in q)
    if any(m[i][j] != m[j][i] for i in range(r) for j in range(r)):
        raise ValueError("quad2 must be symmetric")
    return m


@dataclass(frozen=True)
class Branch:
    coef: int
    quad2: tuple[tuple[int, ...], ...]
    lin2: tuple[int, ...]
    const2: int = 0
    x_offset: int = 0

    def to_json(self) -> dict:
        r = len(self.lin2)
        diag = all(self.quad2[i][j] == 0 for i in range(r) for j in range(r) if i != j)
        quad = [self.quad2[i][i] for i in range(r)] if diag else [list(row) for row in self.quad2]
        out = {"coef": self.coef, "quad2": quad, "lin2": list(self.lin2)}
        if self.const2:
            out["const2"] = self.const2
        if self.x_offset:
            out["x_offset"] = self.x_offset
        return out


@dataclass(frozen=True)
class MultiSumSpec:
    staircase: int
    x_weights: tuple[int, ...]
    denom_steps: tuple[int, ...]
    signs: tuple[int, ...]
    branches: tuple[Branch, ...] = field(default_factory=tuple)

    def __post_init__(self):
        r = len(self.x_weights)
        if not (len(self.denom_steps) == len(self.signs) == r):
            raise ValueError("index data have inconsistent lengths")
        if any(w < 0 for w in self.x_weights) or any(d < 1 for d in self.denom_steps):
            raise ValueError("x weights must be >= 0 and denominator steps >= 1")
        for b in self.branches:
            if len(b.lin2) != r or len(b.quad2) != r:
                raise ValueError("branch data have the wrong number of indices")

    @property
    def rank(self) -> int:
        return len(self.x_weights)

    @classmethod
    def single(cls, staircase, x_weights, denom_steps, signs, quad2, lin2,
               const2=0, x_offset=0, coef=1) -> MultiSumSpec:
        r = len(x_weights)
        return cls(staircase, tuple(x_weights), tuple(denom_steps), tuple(signs),
                   (Branch(coef, _matrix(quad2, r), tuple(lin2), const2, x_offset),))

    def with_linear(self, lin2: Sequence[int], branch: int = 0) -> MultiSumSpec:
        bs = list(self.branches)
        bs[branch] = replace(bs[branch], lin2=tuple(lin2))
        return replace(self, branches=tuple(bs))

    def exponent2(self, idx: Sequence[int], branch: int = 0) -> int:
        """Twice the q-exponent of one summand."""
        b = self.branches[branch]
        m = sum(w * i for w, i in zip(self.x_weights, idx)) + b.x_offset
        quad = sum(b.quad2[a][c] * idx[a] * idx[c]
                   for a in range(self.rank) for c in range(self.rank))
        lin = sum(l * i for l, i in zip(b.lin2, idx))
        return self.staircase * m * (m - 1) + quad + lin + b.const2

    def to_json(self) -> dict:
        return {"staircase": self.staircase, "x_weights": list(self.x_weights),
                "denom_steps": list(self.denom_steps), "signs": list(self.signs),
                "branches": [b.to_json() for b in self.branches]}

    @classmethod
    def from_json(cls, d: Mapping) -> MultiSumSpec:
        r = len(d["x_weights"])
        default_quad = d.get("quad2")
        branches = []
        for b in d.get("branches") or [d]:
            branches.append(Branch(
                int(b.get("coef", 1)), _matrix(b.get("quad2", default_quad), r),
                tuple(int(x) for x in b["lin2"]), int(b.get("const2", 0)),
                int(b.get("x_offset", 0))))
        return cls(int(d.get("staircase", 0)), tuple(d["x_weights"]),
                   tuple(d["denom_steps"]), tuple(d.get("signs", [0] * r)),
                   tuple(branches))


def pre_staircase_form(spec: MultiSumSpec, s: int) -> MultiSumSpec:
    """Remove an ``s``-staircase: the summand of ``x^m`` loses ``q^(s m(m-1)/2)``.

    If the spec carries less than ``s`` of explicit staircase, the deficit is
    folded into the quadratic, linear and constant data.
    """
    if s == 0:
        return spec
    rest = spec.staircase - s
    if rest >= 0:
        return replace(spec, staircase=rest)
    w = spec.x_weights
    r = spec.rank
    t = -rest
    branches = []
    for b in spec.branches:
        x0 = b.x_offset
        quad = tuple(tuple(b.quad2[i][j] - t * w[i] * w[j] for j in range(r))
                     for i in range(r))
        lin = tuple(l - t * (2 * x0 - 1) * wi for l, wi in zip(b.lin2, w))
        branches.append(replace(b, quad2=quad, lin2=lin,
                                const2=b.const2 - t * x0 * (x0 - 1)))
    return replace(spec, staircase=0, branches=tuple(branches))


# ---------------------------------------------------------------- bounds

class _BranchBound:
    """Certified lower bound on 2*(E + t m(m-1)/2) over free trailing indices.

    Relies on nonnegative quad2 entries: then every cross term and every
    diagonal term only adds. Free indices with a positive diagonal are bounded
    by their own parabola; the rest can only lower the exponent through a
    negative linear coefficient, at a rate per unit of x-degree that the
    staircase parabola eventually overwhelms.
    """

    def __init__(self, spec: MultiSumSpec, b: Branch, big_s: int):
        r = spec.rank
        if any(b.quad2[i][j] < 0 for i in range(r) for j in range(r)):
            raise BoundError("negative quad2 entries are not supported")
        self.S = big_s
        self.b = b
        self.w = spec.x_weights
        self.rank = r
        # per depth k: indices k+1.. are free
        self.free_const = []
        self.rate = []
        for k in range(r):
            const = 0
            rate = Fraction(0)
            for j in range(k + 1, r):
                qd, l = b.quad2[j][j], b.lin2[j]
                if qd > 0:
                    const += _parabola_min(qd, l)
                elif l < 0:
                    if self.w[j] == 0:
                        raise BoundError("free index with no x-weight and a "
                                         "negative linear term")
                    rate = max(rate, Fraction(-l, self.w[j]))
            self.free_const.append(const)
            self.rate.append(rate)

    def bound2(self, k: int, fixed2: int, m_p: int) -> Fraction | int | None:
        """Bound given the fixed part (doubled, excluding staircase) and x-degree."""
        rate = self.rate[k]
        S = self.S
        if rate == 0:
            return fixed2 + self.free_const[k] + S * m_p * (m_p - 1)
        if S == 0:
            return None
        # min over integers m >= m_p of S m(m-1) - rate (m - m_p)
        centre = (rate / S + 1) / 2
        best = None
        for m in {m_p, max(m_p, int(centre)), max(m_p, int(centre) + 1)}:
            val = S * m * (m - 1) - rate * (m - m_p)
            best = val if best is None or val < best else best
        return fixed2 + self.free_const[k] + best


def _parabola_min(a: int, b: int) -> int:
    # min over integers y >= 0 of a y^2 + b y, a > 0
    y = max(0, (-b) // (2 * a))
    return min(a * z * z + b * z for z in (y, y + 1))


# ------------------------------------------------------------- evaluation

@dataclass
class _Plan:
    depth: list[int]
    value: list[int]
    t_node: list[int]
    t_row: list[int]
    t_off: list[int]
    t_len: list[int]
    t_coef: list[int]
    lo: int


def evaluate(spec: MultiSumSpec, order: int, track_x: bool = False, *,
             reinstate: int = 0, max_x: int | None = None,
             max_nodes: int = 5_000_000):
    """Exact truncated sum.

    Without ``track_x`` the result is a :class:`LaurentSeries` to ``order``.
    With ``track_x`` it is a :class:`BivariateSeries`; ``reinstate = t`` then
    tracks row ``m`` only to ``order - t m(m-1)/2``, which is exactly what
    reinstating a ``t``-staircase needs to deliver every row to ``order``.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    if reinstate and not track_x:
        raise ValueError("reinstatement bookkeeping needs track_x")
    plan = _plan(spec, order, reinstate, max_nodes)
    t = reinstate
    lo = plan.lo

    def row_order(m: int) -> int:
        return order - t * m * (m - 1) // 2

    if track_x:
        top_row = max(plan.t_row, default=0)
        if max_x is None:
            max_x = top_row
            if t:
                while row_order(max_x + 1) >= lo:
                    max_x += 1
        nrows = max(max_x, top_row) + 1
    else:
        nrows = 1
    width = order - lo + 1
    dlen = max(plan.t_len, default=1)
    t_row = plan.t_row if track_x else [0] * len(plan.t_row)
    rows = kernels.multisum_accumulate(
        spec.denom_steps, plan.depth, plan.value, plan.t_node, t_row,
        plan.t_off, plan.t_len, plan.t_coef, nrows, width, dlen)
    if not track_x:
        return LaurentSeries(rows[0], lo)
    out = []
    for m in range(max_x + 1):
        ro = row_order(m)
        if ro < lo:
            out.append(LaurentSeries((), ro + 1))
        else:
            out.append(LaurentSeries(rows[m][: ro - lo + 1], lo))
    return BivariateSeries(out)


def _plan(spec: MultiSumSpec, order: int, t: int, max_nodes: int) -> _Plan:
    r = spec.rank
    S = spec.staircase + t
    N2 = 2 * order
    bounds = [_BranchBound(spec, b, S) for b in spec.branches]
    w = spec.x_weights
    depth: list[int] = []
    value: list[int] = []
    terms: list[tuple[int, int, int, int]] = []  # node, row, exp, coef

    # per branch running state along the current path: fixed2 (doubled exponent
    # without staircase) and its linear coefficient in each later index
    idx = [0] * r

    def fixed_part(b: Branch, k: int) -> int:
        tot = b.const2
        for a in range(k + 1):
            ia = idx[a]
            if ia:
                tot += b.lin2[a] * ia
                row = b.quad2[a]
                for c in range(k + 1):
                    if idx[c]:
                        tot += row[c] * ia * idx[c]
        return tot

    def node_bounds(k: int) -> list:
        m_core = sum(w[a] * idx[a] for a in range(k + 1))
        out = []
        for bb, b in zip(bounds, spec.branches):
            val = bb.bound2(k, fixed_part(b, k), m_core + b.x_offset)
            if val is None:
                raise BoundError("summation region is not certifiably finite "
                                 f"(index {k}); add staircase or quadratic weight")
            out.append(val)
        return out

    def descend(k: int):
        # Each branch bound is convex in idx[k]; a branch is exhausted once
        # its bound exceeds the order and stops decreasing.
        prev = None
        v = 0
        limit = 4 * order + 64
        while True:
            idx[k] = v
            bnds = node_bounds(k)
            depth.append(k)
            value.append(v)
            node = len(depth) - 1
            if len(depth) > max_nodes:
                raise BoundError(f"more than {max_nodes} summation nodes")
            if min(bnds) <= N2:
                if k == r - 1:
                    _leaf_terms(node)
                else:
                    descend(k + 1)
            elif prev is not None and all(
                    x > N2 and x >= y for x, y in zip(bnds, prev)):
                break
            prev = bnds
            v += 1
            if v > limit:
                raise BoundError(f"index {k} exceeded {limit} without the bound "
                                 "passing the order")
        idx[k] = 0

    def _leaf_terms(node: int):
        sgn = -1 if sum(s * i for s, i in zip(spec.signs, idx)) % 2 else 1
        for bi, b in enumerate(spec.branches):
            e2 = spec.exponent2(idx, bi)
            if e2 % 2:
                raise ValueError(f"half-integral exponent at {tuple(idx)}")
            e = e2 // 2
            m = sum(wa * ia for wa, ia in zip(w, idx)) + b.x_offset
            if e + t * m * (m - 1) // 2 <= order:
                terms.append((node, m, e, sgn * b.coef))

    descend(0)
    # the pruning may leave trailing nodes after the last needed one; harmless
    lo = min((e for _, _, e, _ in terms), default=0)
    lo = min(lo, 0)
    t_node, t_row, t_off, t_len, t_coef = [], [], [], [], []
    for node, m, e, c in terms:
        t_node.append(node)
        t_row.append(m)
        t_off.append(e - lo)
        t_len.append(order - t * m * (m - 1) // 2 - e + 1)
        t_coef.append(c)
    if any(m < 0 for m in t_row):
        raise ValueError("negative x-degree in a summand")
    return _Plan(depth, value, t_node, t_row, t_off, t_len, t_coef, lo)
