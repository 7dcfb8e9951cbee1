"""Three-way verification, the intriguing relation and the linear-term search."""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Mapping, Sequence

from .catalog import Catalog, IdentitySpec, JaggedFace, load_catalog
from .multisum import BoundError, MultiSumSpec, evaluate
from .partitions import count_series, iter_accepted, matches
from .qproducts import (PochhammerFactor, ProductSpec, expand_bivariate, expand_product,
                        inverse_euler, is_periodic_pm1)
from .series import BivariateSeries, LaurentSeries
from .staircase import (classify_4a, grammar_generating_function, jagged_series,
                        reinstate_staircase, remove_staircase, remove_staircase_gf,
                        staircase_shift, validate_blocks)

PAIRS = ("rules-sum", "sum-product", "rules-product")


# ------------------------------------------------------------- reports

@dataclass(frozen=True)
class Comparison:
    """Outcome of one pairwise comparison on ``q^0 .. q^order``."""

    order: int
    passed: bool
    exponent: int | None = None
    left: int | None = None
    right: int | None = None

    def to_json(self) -> dict:
        out = {"order": self.order, "outcome": "pass" if self.passed else "fail"}
        if not self.passed:
            out["first_mismatch"] = {"exponent": self.exponent, "left": self.left,
                                     "right": self.right}
        return out

    @classmethod
    def from_json(cls, d: Mapping) -> Comparison:
        mm = d.get("first_mismatch") or {}
        return cls(int(d["order"]), d["outcome"] == "pass", mm.get("exponent"),
                   mm.get("left"), mm.get("right"))


def compare(a: LaurentSeries, b: LaurentSeries, order: int) -> Comparison:
    mm = a.truncate(order).first_mismatch(b.truncate(order), order)
    if mm is None:
        return Comparison(order, True)
    return Comparison(order, False, *mm)


@dataclass(frozen=True)
class VerificationReport:
    id: str
    order: int
    count_order: int
    comparisons: Mapping[str, Comparison]
    wall_time: float = field(default=0.0, compare=False)
    coefficients: tuple[int, ...] = field(default=(), compare=False)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.comparisons.values())

    def first_failure(self) -> tuple[str, Comparison] | None:
        for name in PAIRS:
            c = self.comparisons.get(name)
            if c is not None and not c.passed:
                return name, c
        return None

    def to_json(self) -> dict:
        return {"id": self.id, "order": self.order, "count_order": self.count_order,
                "outcome": "pass" if self.passed else "fail",
                "comparisons": {k: v.to_json() for k, v in self.comparisons.items()},
                "coefficients": list(self.coefficients),
                "wall_time": round(self.wall_time, 4)}

    @classmethod
    def from_json(cls, d: Mapping) -> VerificationReport:
        return cls(d["id"], int(d["order"]), int(d["count_order"]),
                   {k: Comparison.from_json(v) for k, v in d["comparisons"].items()},
                   float(d.get("wall_time", 0.0)), tuple(d.get("coefficients", ())))


# -------------------------------------------------------------- verify

def verify_spec(spec: IdentitySpec, order: int = 200, count_order: int = 80,
                sum_spec: MultiSumSpec | None = None) -> VerificationReport:
    """Sum against product to ``order``; rule counts against both to ``count_order``."""
    if order < 0 or not 0 <= count_order <= order:
        raise ValueError("need order >= count_order >= 0")
    start = time.perf_counter()
    product = expand_product(spec.product, order)
    total = evaluate(sum_spec or spec.sum, order)
    counts = count_series(spec.rules, count_order)
    comps = {
        "rules-sum": compare(counts, total, count_order),
        "sum-product": compare(total, product, order),
        "rules-product": compare(counts, product, count_order),
    }
    return VerificationReport(spec.id, order, count_order, comps,
                              time.perf_counter() - start,
                              tuple(product.coefficients(0, order)))


def verify(id_: str, order: int = 200, count_order: int = 80,
           catalog: Catalog | None = None) -> VerificationReport:
    """Verify one catalog identity; unknown ids raise ``CatalogError``."""
    spec = (catalog or load_catalog())[id_]
    return verify_spec(spec, order, count_order)


def verify_variant(id_: str, label: str, order: int = 200,
                   catalog: Catalog | None = None) -> Comparison:
    """Sum-product comparison for a rejected variant of a catalog sum."""
    spec = (catalog or load_catalog())[id_]
    for v in spec.rejected_variants:
        if v.label == label:
            return compare(evaluate(v.sum, order), expand_product(spec.product, order), order)
    raise KeyError(f"{id_} has no variant {label!r}")


def verify_many(ids: Sequence[str], order: int = 200, count_order: int = 80,
                catalog: Catalog | None = None, threads: int = 1) -> list[VerificationReport]:
    """Reports in the order of ``ids``, however the pool schedules them."""
    catalog = catalog or load_catalog()
    specs = [catalog[i] for i in ids]
    if threads <= 1:
        return [verify_spec(s, order, count_order) for s in specs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda s: verify_spec(s, order, count_order), specs))


# ------------------------------------------------------- product forms

def alternative_forms_agree(spec: IdentitySpec, order: int) -> bool:
    main = expand_product(spec.product, order)
    return all(expand_product(p, order) == main for p in spec.alt_products)


def periodicity(product: ProductSpec, order: int = 200):
    a = inverse_euler(expand_product(product, order), bound=0)
    return is_periodic_pm1(a, product.modulus)


def euler_identities(order: int, a: int) -> tuple[bool, bool]:
    """Both of Euler's product expansions at ``x = q^a``, to ``order``.

    ``sum x^n / (q;q)_n = 1 / (x;q)_inf`` and
    ``sum x^n q^(n(n-1)/2) / (q;q)_n = (-x;q)_inf``, with the usual
    ``(x;q)_inf = prod_{t >= 0} (1 - x q^t)``.
    """
    one = MultiSumSpec.single(0, (1,), (1,), (0,), (0,), (2 * a,))
    dist = MultiSumSpec.single(1, (1,), (1,), (0,), (0,), (2 * a,))
    p1 = expand_product(ProductSpec(factors=(PochhammerFactor(a, 1, power=-1),)), order)
    p2 = expand_product(ProductSpec(factors=(PochhammerFactor(a, 1, sign=-1),)), order)
    return evaluate(one, order) == p1, evaluate(dist, order) == p2


# ---------------------------------------------------- staircase checks

def _row_cap(s: int, order: int) -> int:
    m = 0
    while staircase_shift(s, m + 1) <= order:
        m += 1
    return m


def jagged_image_series(rules, s: int, order: int,
                        max_x: int | None = None) -> BivariateSeries:
    """Bivariate series of the jagged images of accepted partitions.

    Row ``m`` is exact to ``order - s m(m-1)/2``: that is as far as
    partitions of weight ``<= order`` determine it.
    """
    if max_x is None:
        max_x = _row_cap(s, order)
    rows = [order - staircase_shift(s, m) for m in range(max_x + 1)]
    items = ((len(p), remove_staircase(p, s).weight) for p in iter_accepted(rules, order))
    return jagged_series(items, max_x, rows)


def staircase_round_trip(rules, s: int, order: int) -> bool:
    """Reinstating the jagged images reproduces the bivariate count series."""
    jag = jagged_image_series(rules, s, order)
    back = reinstate_staircase(jag, s, order)
    direct = count_series(rules, order, track_x=True, max_x=jag.max_x)
    return back == direct


def staircase_lemma(rules, s: int, order: int) -> bool:
    """Jagged images are counted by shifting row ``m`` down by ``s m(m-1)/2``."""
    jag = jagged_image_series(rules, s, order)
    counts = count_series(rules, order, track_x=True, max_x=jag.max_x)
    shifted = remove_staircase_gf(counts, s)
    return all(shifted.row(m).truncate(jag.row(m).order) == jag.row(m)
               for m in range(jag.max_x + 1))


@dataclass(frozen=True)
class FaceCheck:
    id: str
    case: str | None
    images: int
    rejected: tuple[tuple[int, ...], ...]
    grammar_matches_images: bool
    closed_form_matches_grammar: bool

    @property
    def passed(self) -> bool:
        return (not self.rejected and self.grammar_matches_images
                and self.closed_form_matches_grammar)


def check_face(spec: IdentitySpec, face: JaggedFace, order: int = 40) -> FaceCheck:
    """Every image parses, and grammar, images and closed form agree to ``order``."""
    s = spec.staircase_step
    parts = iter_accepted(spec.rules, order)
    if face.case:
        parts = (p for p in parts if classify_4a(p, spec.rules)[0] == face.case)
    images = [remove_staircase(p, s, face.prepend_zero) for p in parts]
    rejected = tuple(m.entries for m in images if not validate_blocks(m, face.grammar))
    max_x = _row_cap(s, order)
    rows = [order - staircase_shift(s, m) for m in range(max_x + 1)]
    jag = jagged_series(((len(m), m.weight) for m in images), max_x, rows)
    gram = grammar_generating_function(face.grammar, order, max_x, rows)
    closed = expand_bivariate([t.as_tuple() for t in face.closed_form], max_x, order, rows)
    return FaceCheck(spec.id, face.case, len(images), rejected, jag == gram, gram == closed)


# -------------------------------------------------- intriguing relation

def _s_rules(i: int, catalog: Catalog | None = None):
    return (catalog or load_catalog())[f"A9-{i}"].rules


def intrigue_map(parts: Sequence[int], catalog: Catalog | None = None
                 ) -> tuple[str, tuple[int, ...]]:
    """Send an Identity 1 partition to Identity 2 (tag S2) or Identity 3 (tag S3).

    Let ``sigma`` be the leading run ``1, 3, 5, ...`` of odd parts (odd parts
    cannot repeat, and two odd parts at distance 2 are adjacent). If its
    length is even, adjacent pairs ``(1st, 2nd), (3rd, 4th), ...`` are both
    replaced by their average. If odd, the pairs ``(2nd, 3rd), ...`` are
    averaged and the initial 1 is deleted.
    """
    parts = tuple(parts)
    if not matches(_s_rules(1, catalog), parts):
        raise ValueError(f"{parts} is not counted by Identity 1")
    s = 0
    while s < len(parts) and parts[s] == 2 * s + 1:
        s += 1
    sigma, rest = list(parts[:s]), parts[s:]
    tag = "S2" if s % 2 == 0 else "S3"
    start = 0 if tag == "S2" else 1
    for i in range(start, s - 1, 2):
        avg = (sigma[i] + sigma[i + 1]) // 2
        sigma[i] = sigma[i + 1] = avg
    if tag == "S3":
        sigma = sigma[1:]
    return tag, tuple(sigma) + rest


def intrigue_sum_series(order: int, max_x: int, shift: int = 1) -> bool:
    """``S1(x, q) = S2(x, q) + x q^shift S3(x, q)`` on rows ``<= max_x``."""
    s1, s2, s3 = (count_series(_s_rules(i), order, track_x=True, max_x=max_x)
                  for i in (1, 2, 3))
    for m in range(max_x + 1):
        rhs = s2.row(m)
        if m:
            rhs = rhs + s3.row(m - 1).shift(shift).truncate(order)
        if s1.row(m) != rhs:
            return False
    return True


def intrigue_bijection(max_weight: int, catalog: Catalog | None = None) -> bool:
    """``intrigue_map`` is a bijection onto S2 (same weight and length)
    plus S3 (weight and length one less), for every weight ``<= max_weight``."""
    images = {"S2": set(), "S3": set()}
    for p in iter_accepted(_s_rules(1, catalog), max_weight):
        tag, img = intrigue_map(p, catalog)
        drop = 0 if tag == "S2" else 1
        if sum(img) != sum(p) - drop or len(img) != len(p) - drop:
            return False
        if img in images[tag]:
            return False
        images[tag].add(img)
    s2 = set(iter_accepted(_s_rules(2, catalog), max_weight))
    s3 = set(iter_accepted(_s_rules(3, catalog), max_weight - 1)) if max_weight else set()
    return images["S2"] == s2 and images["S3"] == s3


def check_intrigue_sum(order: int, max_x: int, bijection_weight: int = 40,
                       shift: int = 1) -> bool:
    """Series identity on the window, plus the explicit bijection up to ``bijection_weight``."""
    return intrigue_sum_series(order, max_x, shift) and intrigue_bijection(bijection_weight)


def check_intrigue_prod(order: int, shift: int = 1) -> bool:
    """Product form: ``P1 = P2 + q^shift P3`` to ``order``."""
    cat = load_catalog()
    p1, p2, p3 = (expand_product(cat[f"A9-{i}"].product, order) for i in (1, 2, 3))
    return p1 == p2 + p3.shift(shift).truncate(order)


# -------------------------------------------------------------- search

@dataclass(frozen=True)
class Hit:
    """A linear vector whose sum has a periodic {-1, 0, 1} inverse Euler transform."""

    linear: tuple[int, ...]
    pattern: Mapping[int, int]
    modulus: int

    def key(self) -> tuple:
        pos = tuple(r for r, a in sorted(self.pattern.items()) if a == 1)
        neg = tuple(r for r, a in sorted(self.pattern.items()) if a == -1)
        return (self.modulus, pos, neg)

    def describe(self) -> str:
        _, pos, neg = self.key()
        text = "+" + ",".join(map(str, pos)) if pos else "+none"
        if neg:
            text += " -" + ",".join(map(str, neg))
        return f"{text} mod {self.modulus}"

    def to_json(self) -> dict:
        _, pos, neg = self.key()
        return {"linear": list(self.linear), "modulus": self.modulus,
                "residues_pos": list(pos), "residues_neg": list(neg)}


DEFAULT_BOXES = {
    "A9": ((-4, 12), (-4, 12), (-4, 12)),
    "four-index": ((0, 4), (1, 6), (3, 7), (4, 10)),
}


def search_point(base: MultiSumSpec, linear: Sequence[int], order: int,
                 modulus: int, branch: int = 0) -> Hit | None:
    """Test one linear vector (the coefficient of each index in the exponent)."""
    spec = base.with_linear([2 * v for v in linear], branch)
    try:
        f = evaluate(spec, order)
    except BoundError:
        return None
    if f.valuation() is None or f.valuation() < 0 or f[0] != 1:
        return None
    a = inverse_euler(f, bound=1)
    if a is None:
        return None
    verdict = is_periodic_pm1(a, modulus)
    if not verdict:
        return None
    return Hit(tuple(linear), verdict.pattern, modulus)


def search_linear_shifts(base: MultiSumSpec, box: Sequence[tuple[int, int]], order: int,
                         modulus: int, branch: int = 0,
                         progress: Callable[[int, int], None] | None = None,
                         budget: int | None = None, dedupe: bool = True) -> list[Hit]:
    """Hits in the inclusive ``box``, scanned in lexicographic order.

    With ``dedupe`` only the first vector for each residue pattern is kept;
    otherwise every hit is returned and :func:`group_hits` can collapse them.
    """
    if order < 3 * modulus:
        raise ValueError("order must be at least 3 * modulus")
    if len(box) != base.rank:
        raise ValueError(f"box needs {base.rank} ranges")
    ranges = [range(lo, hi + 1) for lo, hi in box]
    total = 1
    for r in ranges:
        total *= len(r)
    if budget is not None and total > budget:
        raise ValueError(f"box has {total} points, over the budget of {budget}")
    hits = []
    seen = set()
    for done, linear in enumerate(itertools.product(*ranges), 1):
        hit = search_point(base, linear, order, modulus, branch)
        if hit is not None and not (dedupe and hit.key() in seen):
            seen.add(hit.key())
            hits.append(hit)
        if progress is not None:
            progress(done, total)
    return hits


def group_hits(hits: Iterable[Hit]) -> dict[tuple, list[Hit]]:
    """Hits keyed by canonical residue pattern, first-found order preserved."""
    groups: dict[tuple, list[Hit]] = {}
    for h in hits:
        groups.setdefault(h.key(), []).append(h)
    return groups


def jagged_linear(spec: MultiSumSpec, branch: int = 0) -> tuple[int, ...]:
    """The linear vector of a catalog sum, in the units the search uses."""
    lin2 = spec.branches[branch].lin2
    if any(v % 2 for v in lin2):
        raise ValueError("linear data are not integral")
    return tuple(v // 2 for v in lin2)


def base_form(spec: MultiSumSpec) -> MultiSumSpec:
    """Single-branch copy with a zero linear part, for searching."""
    b = replace(spec.branches[0], lin2=tuple(0 for _ in spec.branches[0].lin2),
                const2=0, x_offset=0, coef=1)
    return replace(spec, branches=(b,))
