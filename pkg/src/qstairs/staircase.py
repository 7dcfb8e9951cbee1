"""Staircase removal, jagged partitions and block grammars.

Removing an ``s``-staircase maps ``l_1 <= l_2 <= ...`` to
``l_1, l_2 - s, l_3 - 2s, ...``. On generating functions this is
``x^m -> x^m q^(-s m(m-1)/2)``; reinstating is the inverse shift.

A block grammar describes the jagged images: the sequence splits into
blocks with strictly increasing labels, and the block for label ``j`` must
match a small regular expression over offsets from ``j``. Syntax::

    expr  := seq ('|' seq)*
    seq   := item (',' item)*
    item  := atom quant?
    atom  := INT | '[' expr ']'
    quant := '*' | '+' | '?' | '{' INT ',' INT '}'

so ``[0,-1]*,0{0,2}`` reads "any number of ``j, j-1`` pairs, then up to two
``j``". ``?`` is the optional quantifier written as a bullet in the
literature.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .series import BivariateSeries, LaurentSeries


# ------------------------------------------------------ jagged partitions

@dataclass(frozen=True)
class JaggedPartition:
    entries: tuple[int, ...]
    step: int

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if self.step < 1:
            raise ValueError("staircase step must be positive")
        for a, b in zip(self.entries, self.entries[1:]):
            if b - a < -self.step:
                raise ValueError(f"drop {a} -> {b} exceeds the step {self.step}")

    @property
    def weight(self) -> int:
        return sum(self.entries)

    def __len__(self):
        return len(self.entries)


def remove_staircase(parts: Sequence[int], s: int,
                     prepend_zero: bool = False) -> JaggedPartition:
    """``l_1, l_2 - s, l_3 - 2s, ...`` (after an optional leading 0)."""
    seq = ((0,) if prepend_zero else ()) + tuple(parts)
    return JaggedPartition(tuple(p - s * i for i, p in enumerate(seq)), s)


def add_staircase(mu: JaggedPartition) -> tuple[int, ...]:
    return tuple(e + mu.step * i for i, e in enumerate(mu.entries))


def staircase_shift(s: int, m: int) -> int:
    return s * m * (m - 1) // 2


def reinstate_staircase(gf: BivariateSeries, s: int,
                        order: int | None = None) -> BivariateSeries:
    """Shift row ``m`` up by ``s m(m-1)/2``.

    With ``order`` every row is cut to that order; a row whose shifted
    window stops short of it is rejected, since its top coefficients would
    be unknown.
    """
    rows = []
    for m, row in enumerate(gf.rows):
        sh = row.shift(staircase_shift(s, m))
        if order is not None:
            if sh.order < order:
                raise ValueError(f"row {m} reaches q^{sh.order} after the shift, "
                                 f"short of q^{order}")
            sh = sh.truncate(order)
        rows.append(sh)
    return BivariateSeries(rows)


def remove_staircase_gf(gf: BivariateSeries, s: int) -> BivariateSeries:
    """Inverse of :func:`reinstate_staircase` (shift row ``m`` down)."""
    return BivariateSeries([row.shift(-staircase_shift(s, m))
                            for m, row in enumerate(gf.rows)])


def jagged_series(items: Iterable[tuple[int, int]], max_x: int,
                  row_orders: Sequence[int]) -> BivariateSeries:
    """Bivariate series from ``(x_degree, q_exponent)`` samples."""
    counts: dict[tuple[int, int], int] = {}
    for m, n in items:
        if m <= max_x and n <= row_orders[m]:
            counts[(m, n)] = counts.get((m, n), 0) + 1
    rows = []
    for m in range(max_x + 1):
        d = {n: c for (mm, n), c in counts.items() if mm == m}
        lo = min([0, *d])
        coeffs = [0] * (row_orders[m] - lo + 1)
        for n, c in d.items():
            coeffs[n - lo] += c
        rows.append(LaurentSeries(coeffs, lo, row_orders[m]))
    return BivariateSeries(rows)


def jagged_row_orders(s: int, order: int, max_x: int, x_shift: int = 0) -> list[int]:
    """Orders at which jagged rows are fully determined by partitions of weight <= order."""
    return [order - staircase_shift(s, m) if m >= 0 else order
            for m in range(max_x + 1)]


# ------------------------------------------------------- grammar syntax

_TOKEN = re.compile(r"\s*(-?\d+|\[|\]|,|\||\*|\+|\?|\{\s*\d+\s*,\s*\d+\s*\})")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad block expression near {text[pos:]!r}")
        out.append(m.group(1).replace(" ", ""))
        pos = m.end()
    return out


@lru_cache(maxsize=None)
def parse_block(text: str):
    """Parse a block expression into a small tuple AST."""
    toks = _tokenize(text)
    node, i = _parse_expr(toks, 0)
    if i != len(toks):
        raise ValueError(f"trailing tokens in {text!r}")
    return node


def _parse_expr(toks, i):
    alts = []
    node, i = _parse_seq(toks, i)
    alts.append(node)
    while i < len(toks) and toks[i] == "|":
        node, i = _parse_seq(toks, i + 1)
        alts.append(node)
    return (alts[0] if len(alts) == 1 else ("alt", tuple(alts))), i


def _parse_seq(toks, i):
    items = []
    node, i = _parse_item(toks, i)
    items.append(node)
    while i < len(toks) and toks[i] == ",":
        node, i = _parse_item(toks, i + 1)
        items.append(node)
    return (items[0] if len(items) == 1 else ("seq", tuple(items))), i


def _parse_item(toks, i):
    if i >= len(toks):
        raise ValueError("unexpected end of block expression")
    t = toks[i]
    if t == "[":
        node, i = _parse_expr(toks, i + 1)
        if i >= len(toks) or toks[i] != "]":
            raise ValueError("unbalanced '['")
        i += 1
    elif re.fullmatch(r"-?\d+", t):
        node, i = ("atom", int(t)), i + 1
    else:
        raise ValueError(f"unexpected token {t!r}")
    if i < len(toks):
        q = toks[i]
        if q == "*":
            return ("rep", node, 0, None), i + 1
        if q == "+":
            return ("rep", node, 1, None), i + 1
        if q == "?":
            return ("rep", node, 0, 1), i + 1
        if q.startswith("{"):
            lo, hi = (int(x) for x in q[1:-1].split(","))
            if lo > hi:
                raise ValueError(f"empty repetition range {q}")
            return ("rep", node, lo, hi), i + 1
    return node, i


def _nullable(node) -> bool:
    kind = node[0]
    if kind == "atom":
        return False
    if kind == "seq":
        return all(_nullable(n) for n in node[1])
    if kind == "alt":
        return any(_nullable(n) for n in node[1])
    return node[2] == 0 or _nullable(node[1])


def _atoms(node) -> list[int]:
    if node[0] == "atom":
        return [node[1]]
    if node[0] == "rep":
        return _atoms(node[1])
    return [a for n in node[1] for a in _atoms(n)]


def _match(node, mu: Sequence[int], pos: int, j: int) -> set[int]:
    """End positions of every way ``node`` (label ``j``) matches ``mu[pos:]``."""
    kind = node[0]
    if kind == "atom":
        return {pos + 1} if pos < len(mu) and mu[pos] == j + node[1] else set()
    if kind == "seq":
        ends = {pos}
        for child in node[1]:
            ends = {e2 for e in ends for e2 in _match(child, mu, e, j)}
            if not ends:
                break
        return ends
    if kind == "alt":
        return {e for child in node[1] for e in _match(child, mu, pos, j)}
    _, child, lo, hi = node
    out = {pos} if lo == 0 else set()
    frontier = {pos}
    count = 0
    seen: set[int] = set()
    while frontier and (hi is None or count < hi):
        count += 1
        frontier = {e2 for e in frontier for e2 in _match(child, mu, e, j)}
        if hi is None:
            frontier -= seen
            seen |= frontier
        if count >= lo:
            out |= frontier
    return out


# ------------------------------------------------------------- grammar

@dataclass(frozen=True)
class LabelRule:
    """Block shape for the labels selected by ``mod``/``res``/``min``/``max``."""

    block: str
    mod: int = 1
    res: int = 0
    min_label: int = 1
    max_label: int | None = None
    span: int = 1           # labels consumed by one block (next label >= j + span)
    required: bool = False  # the block must be present (and non-empty)

    def selects(self, j: int) -> bool:
        if j < self.min_label or (self.max_label is not None and j > self.max_label):
            return False
        return j % self.mod == self.res % self.mod

    @property
    def ast(self):
        return parse_block(self.block)

    def to_json(self) -> dict:
        out = {"block": self.block}
        for k, default in (("mod", 1), ("res", 0), ("min_label", 1),
                           ("max_label", None), ("span", 1), ("required", False)):
            v = getattr(self, k)
            if v != default:
                out[k] = v
        return out

    @classmethod
    def from_json(cls, d: Mapping) -> LabelRule:
        return cls(d["block"], int(d.get("mod", 1)), int(d.get("res", 0)),
                   int(d.get("min_label", 1)), d.get("max_label"),
                   int(d.get("span", 1)), bool(d.get("required", False)))


@dataclass(frozen=True)
class Exception_:
    """A forbidden string ``b + offsets`` anywhere in the jagged sequence."""

    offsets: tuple[int, ...]
    mod: int = 1
    res: int = 0
    min_base: int = 0

    def base_ok(self, b: int) -> bool:
        return b >= self.min_base and b % self.mod == self.res % self.mod

    def to_json(self) -> dict:
        return {"offsets": list(self.offsets), "mod": self.mod, "res": self.res,
                "min_base": self.min_base}

    @classmethod
    def from_json(cls, d: Mapping) -> Exception_:
        return cls(tuple(d["offsets"]), int(d.get("mod", 1)), int(d.get("res", 0)),
                   int(d.get("min_base", 0)))


@dataclass(frozen=True)
class BlockGrammar:
    """Per-label block shapes, checked left to right with increasing labels.

    For a label ``j`` the first rule that selects it applies; labels no rule
    selects cannot occur. ``exceptions`` are forbidden strings, and the
    closed form multiplies in ``1 - x^len q^weight`` for each of them.
    """

    rules: tuple[LabelRule, ...]
    exceptions: tuple[Exception_, ...] = ()
    min_label: int = 1
    provisional: bool = False

    def rule_for(self, j: int) -> LabelRule | None:
        if j < self.min_label:
            return None
        for r in self.rules:
            if r.selects(j):
                return r
        return None

    def to_json(self) -> dict:
        out = {"rules": [r.to_json() for r in self.rules],
               "exceptions": [e.to_json() for e in self.exceptions],
               "min_label": self.min_label}
        if self.provisional:
            out["provisional"] = True
        return out

    @classmethod
    def from_json(cls, d: Mapping) -> BlockGrammar:
        return cls(tuple(LabelRule.from_json(r) for r in d["rules"]),
                   tuple(Exception_.from_json(e) for e in d.get("exceptions", ())),
                   int(d.get("min_label", 1)), bool(d.get("provisional", False)))


def validate_blocks(mu: JaggedPartition | Sequence[int], grammar: BlockGrammar) -> bool:
    """Can ``mu`` be cut into blocks with increasing labels matching ``grammar``?"""
    seq = tuple(mu.entries if isinstance(mu, JaggedPartition) else mu)
    for i in range(len(seq)):
        for ex in grammar.exceptions:
            if (grammar_match_exception(ex, seq, i)):
                return False
    required = [r for r in grammar.rules if r.required]

    @lru_cache(maxsize=None)
    def parse(pos: int, next_label: int, used_required: bool) -> bool:
        if pos == len(seq):
            return used_required or not required
        for rule in grammar.rules:
            node = rule.ast
            for off in set(_atoms(node)):
                j = seq[pos] - off
                if j < next_label or grammar.rule_for(j) is not rule:
                    continue
                if required and not used_required and not rule.required:
                    continue
                for end in _match(node, seq, pos, j):
                    if end > pos and parse(end, j + rule.span, True if rule.required else used_required):
                        return True
        return False

    return parse(0, grammar.min_label, False)


def grammar_match_exception(ex: Exception_, seq: Sequence[int], i: int) -> bool:
    if i + len(ex.offsets) > len(seq) or not ex.base_ok(seq[i]):
        return False
    return all(seq[i + t] == seq[i] + o for t, o in enumerate(ex.offsets))


# ------------------------------------------------- grammar closed form

class _Grid:
    """Dense truncated bivariate series on rows 0..M, exponents lo..top."""

    def __init__(self, M: int, lo: int, top: int, data=None):
        self.M, self.lo, self.top = M, lo, top
        self.data = np.zeros((M + 1, top - lo + 1), dtype=object) if data is None else data

    def like(self, data=None) -> _Grid:
        return _Grid(self.M, self.lo, self.top, data)

    def mono(self, m: int, n: int, c: int = 1) -> _Grid:
        g = self.like()
        if m <= self.M and self.lo <= n <= self.top:
            g.data[m, n - self.lo] = c
        return g

    def one(self) -> _Grid:
        return self.mono(0, 0)

    def __add__(self, other: _Grid) -> _Grid:
        return self.like(self.data + other.data)

    def __sub__(self, other: _Grid) -> _Grid:
        return self.like(self.data - other.data)

    def __mul__(self, other: _Grid) -> _Grid:
        out = np.zeros_like(self.data)
        width = self.data.shape[1]
        a_rows = [m for m in range(self.M + 1) if self.data[m].any()]
        b_rows = [m for m in range(self.M + 1) if other.data[m].any()]
        for ma in a_rows:
            for mb in b_rows:
                if ma + mb > self.M:
                    continue
                conv = np.convolve(self.data[ma], other.data[mb])
                # index i + k in conv is exponent (lo + i) + (lo + k)
                start = -self.lo  # conv[start + t] is exponent lo + t
                seg = conv[start: start + width]
                out[ma + mb, : len(seg)] += seg
        return self.like(out)

    def is_zero(self) -> bool:
        return not self.data.any()

    def has_constant(self) -> bool:
        return self.data[0].any()

    def power(self, k: int) -> _Grid:
        acc = self.one()
        for _ in range(k):
            acc = acc * self
        return acc

    def geometric(self) -> _Grid:
        """``1 / (1 - self)`` for a series without x^0 terms."""
        if self.has_constant():
            raise ValueError("geometric series of a term with x-degree 0")
        acc = self.one()
        term = self.one()
        while True:
            term = term * self
            if term.is_zero():
                return acc
            acc = acc + term


def _block_gf(node, j: int, g: _Grid) -> _Grid:
    kind = node[0]
    if kind == "atom":
        return g.mono(1, j + node[1])
    if kind == "seq":
        acc = g.one()
        for child in node[1]:
            acc = acc * _block_gf(child, j, g)
        return acc
    if kind == "alt":
        acc = g.like()
        for child in node[1]:
            acc = acc + _block_gf(child, j, g)
        return acc
    _, child, lo, hi = node
    c = _block_gf(child, j, g)
    if hi is None:
        return c.power(lo) * c.geometric()
    acc = g.like()
    p = c.power(lo)
    for _ in range(lo, hi + 1):
        acc = acc + p
        p = p * c
    return acc


def grammar_generating_function(grammar: BlockGrammar, order: int,
                                max_x: int, row_orders: Sequence[int] | None = None
                                ) -> BivariateSeries:
    """Closed form of all words the grammar accepts, by length and weight.

    Computed as ``F(j) = F(j+1) + B_j F(j + span)`` over labels (``B_j`` the
    non-empty blocks of label ``j``), times ``1 - x^len q^weight`` for each
    exception. Exact when block decompositions are unique, which the test
    suite checks numerically against the jagged images themselves.
    """
    if row_orders is None:
        row_orders = [order] * (max_x + 1)
    all_atoms = [a for r in grammar.rules for a in _atoms(r.ast)]
    lowest = min(grammar.min_label + min(all_atoms, default=0), 0)
    rate = max(0, -lowest)
    top = max(row_orders) + rate * max_x
    base = _Grid(max_x, -rate * max_x, top)
    max_label = top + max(0, -min(all_atoms, default=0)) + 1

    F: dict[int, _Grid] = {}

    def get(j: int) -> _Grid:
        return F[j] if j in F else base.one()

    for j in range(max_label, grammar.min_label - 1, -1):
        rule = grammar.rule_for(j)
        if rule is None:
            F[j] = get(j + 1)
            continue
        blk = _block_gf(rule.ast, j, base)
        if _nullable(rule.ast):
            blk = blk - base.one()
        rest = blk * get(j + rule.span)
        F[j] = rest if rule.required else get(j + 1) + rest
    total = get(grammar.min_label)
    for ex in grammar.exceptions:
        L = len(ex.offsets)
        for b in range(ex.min_base, max_label + 1):
            if ex.base_ok(b):
                w = L * b + sum(ex.offsets)
                if w <= top and L <= max_x:
                    total = total * (base.one() - base.mono(L, w))
    rows = []
    for m in range(max_x + 1):
        ro = row_orders[m]
        coeffs = [int(v) for v in total.data[m, : ro - base.lo + 1]]
        rows.append(LaurentSeries(coeffs, base.lo, ro))
    return BivariateSeries(rows)


# ------------------------------------------------------ identity 4a split

def classify_4a(parts: Sequence[int], rules=None) -> tuple[str, JaggedPartition]:
    """Case ``a`` keeps the jagged image of ``0 + pi``; case ``b`` drops the zero.

    Case a applies when every 0 of that image is followed by -1 and no -1 is
    followed by 1.
    """
    if rules is None:
        from .catalog import load_catalog
        rules = load_catalog()["A9-4a"].rules
    from .partitions import matches
    if not matches(rules, parts):
        raise ValueError(f"{tuple(parts)} is not counted by the 4a sum side")
    tilde = remove_staircase(parts, 2, prepend_zero=True)
    e = tilde.entries
    case_a = all(i + 1 < len(e) and e[i + 1] == -1 for i, v in enumerate(e) if v == 0)
    case_a = case_a and not any(v == -1 and i + 1 < len(e) and e[i + 1] == 1
                                for i, v in enumerate(e))
    if case_a:
        return "a", tilde
    return "b", remove_staircase(parts, 2)
