"""Forbidden-pattern rule sets for partitions, with two independent counters.

Partitions are weakly increasing tuples of positive integers. A rule set
forbids contiguous sub-partitions of a given shape (``base + offsets``,
optionally only for bases in a congruence class) and adds a few initial
conditions. :func:`enumerate_partitions` lists accepted partitions by
backtracking; :func:`count_series` counts them with a transfer-matrix DP
that never looks at an analytic formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from .series import BivariateSeries, LaurentSeries

MAX_WINDOW = 5

Partition = tuple[int, ...]


@dataclass(frozen=True)
class ForbiddenPattern:
    """Sub-partition ``b + offsets[0], b + offsets[1], ...`` with ``b = res mod mod``."""

    offsets: tuple[int, ...]
    base_mod: int = 1
    base_res: int = 0

    def __post_init__(self):
        offs = tuple(int(o) for o in self.offsets)
        object.__setattr__(self, "offsets", offs)
        if not offs or offs[0] != 0:
            raise ValueError(f"pattern offsets must start at 0: {offs}")
        if any(b < a for a, b in zip(offs, offs[1:])):
            raise ValueError(f"pattern offsets must be weakly increasing: {offs}")
        if self.base_mod < 1:
            raise ValueError("base modulus must be positive")
        object.__setattr__(self, "base_res", self.base_res % self.base_mod)

    @property
    def window(self) -> int:
        return self.offsets[-1] + 1

    def base_ok(self, base: int) -> bool:
        return base % self.base_mod == self.base_res

    def matches_at(self, seq: Sequence[int], start: int) -> bool:
        offs = self.offsets
        if start < 0 or start + len(offs) > len(seq):
            return False
        base = seq[start]
        if not self.base_ok(base):
            return False
        return all(seq[start + i] == base + o for i, o in enumerate(offs))

    def to_json(self) -> dict:
        return {"offsets": list(self.offsets), "base_mod": self.base_mod,
                "base_res": self.base_res}

    @classmethod
    def from_json(cls, d: Mapping) -> ForbiddenPattern:
        return cls(tuple(d["offsets"]), int(d.get("base_mod", 1)),
                   int(d.get("base_res", 0)))


@dataclass(frozen=True)
class InitialConstraint:
    """One of ``forbid_part``, ``max_multiplicity``, ``min_part``, ``forbid_prefix``."""

    kind: str
    part: int = 0
    count: int = 0
    prefix: tuple[int, ...] = ()

    KINDS = ("forbid_part", "max_multiplicity", "min_part", "forbid_prefix")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown initial constraint {self.kind!r}")
        object.__setattr__(self, "prefix", tuple(self.prefix))
        if self.kind == "forbid_prefix" and len(self.prefix) > MAX_WINDOW:
            raise ValueError("forbidden prefixes are limited to 5 parts")

    def to_json(self) -> dict:
        if self.kind == "forbid_prefix":
            return {"kind": self.kind, "prefix": list(self.prefix)}
        if self.kind == "max_multiplicity":
            return {"kind": self.kind, "part": self.part, "count": self.count}
        return {"kind": self.kind, "part": self.part}

    @classmethod
    def from_json(cls, d: Mapping) -> InitialConstraint:
        return cls(d["kind"], int(d.get("part", 0)), int(d.get("count", 0)),
                   tuple(d.get("prefix", ())))


def forbid_part(p: int) -> InitialConstraint:
    return InitialConstraint("forbid_part", part=p)


def max_multiplicity(p: int, k: int) -> InitialConstraint:
    return InitialConstraint("max_multiplicity", part=p, count=k)


def min_part(p: int) -> InitialConstraint:
    return InitialConstraint("min_part", part=p)


def forbid_prefix(*parts: int) -> InitialConstraint:
    return InitialConstraint("forbid_prefix", prefix=tuple(parts))


@dataclass(frozen=True)
class RuleSet:
    patterns: tuple[ForbiddenPattern, ...] = ()
    initial: tuple[InitialConstraint, ...] = ()
    fictitious_zeros: int = 0

    def __post_init__(self):
        object.__setattr__(self, "patterns", tuple(self.patterns))
        object.__setattr__(self, "initial", tuple(self.initial))
        if not 0 <= self.fictitious_zeros <= 2:
            raise ValueError("at most two fictitious zeros are supported")

    @property
    def window(self) -> int:
        return max((p.window for p in self.patterns), default=1)

    @property
    def max_len(self) -> int:
        return max((len(p.offsets) for p in self.patterns), default=1)

    def check_window(self) -> None:
        if self.window > MAX_WINDOW:
            raise ValueError(f"pattern window {self.window} exceeds {MAX_WINDOW}")

    def part_allowed(self, v: int, mult: int) -> bool:
        """Initial constraints on a single part value and its multiplicity."""
        for c in self.initial:
            if c.kind == "forbid_part" and v == c.part and mult:
                return False
            if c.kind == "max_multiplicity" and v == c.part and mult > c.count:
                return False
            if c.kind == "min_part" and v < c.part and mult:
                return False
        return True

    @property
    def prefixes(self) -> tuple[tuple[int, ...], ...]:
        return tuple(c.prefix for c in self.initial if c.kind == "forbid_prefix")

    def with_patterns(self, extra: Sequence[ForbiddenPattern]) -> RuleSet:
        return RuleSet(self.patterns + tuple(extra), self.initial, self.fictitious_zeros)

    def to_json(self) -> dict:
        return {"patterns": [p.to_json() for p in self.patterns],
                "initial": [c.to_json() for c in self.initial],
                "fictitious_zeros": self.fictitious_zeros}

    @classmethod
    def from_json(cls, d: Mapping) -> RuleSet:
        return cls(tuple(ForbiddenPattern.from_json(p) for p in d.get("patterns", ())),
                   tuple(InitialConstraint.from_json(c) for c in d.get("initial", ())),
                   int(d.get("fictitious_zeros", 0)))


def pattern(*offsets: int, mod: int = 1, res: int = 0) -> ForbiddenPattern:
    return ForbiddenPattern(tuple(offsets), mod, res)


# --------------------------------------------------------------- matching

def matches(rules: RuleSet, parts: Sequence[int]) -> bool:
    """Does the weakly increasing partition ``parts`` satisfy ``rules``?"""
    parts = tuple(parts)
    if any(p < 1 for p in parts) or any(b < a for a, b in zip(parts, parts[1:])):
        raise ValueError(f"not a partition in increasing order: {parts}")
    mult: dict[int, int] = {}
    for p in parts:
        mult[p] = mult.get(p, 0) + 1
    for c in rules.initial:
        if c.kind == "forbid_part" and c.part in mult:
            return False
        if c.kind == "max_multiplicity" and mult.get(c.part, 0) > c.count:
            return False
        if c.kind == "min_part" and parts and parts[0] < c.part:
            return False
        if c.kind == "forbid_prefix" and parts[: len(c.prefix)] == c.prefix:
            return False
    seq = (0,) * rules.fictitious_zeros + parts
    for start in range(len(seq)):
        for pat in rules.patterns:
            if pat.matches_at(seq, start):
                return False
    return True


def all_partitions(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """Every partition of ``n`` (increasing tuples), largest part descending."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for top in range(min(n, max_part), 0, -1):
        for rest in all_partitions(n - top, top):
            yield rest + (top,)


def enumerate_partitions(rules: RuleSet, n: int) -> list[Partition]:
    """All partitions of ``n`` accepted by ``rules``.

    Order: reverse lexicographic on the parts read from largest to smallest,
    so ``12`` comes first, then ``1+11``, ``2+10``, ... Parts are placed from
    the largest down; a forbidden window is rejected as soon as its smallest
    part is placed.
    """
    if n < 0:
        return []
    zeros = (0,) * rules.fictitious_zeros
    out: list[Partition] = []

    def local_ok(seq: list[int]) -> bool:
        # seq is the partition built so far, smallest part first
        for pat in rules.patterns:
            if pat.matches_at(seq, 0):
                return False
        return True

    def rec(remaining: int, cap: int, built: list[int]):
        if remaining == 0:
            full = tuple(built)
            if _initial_ok(rules, full) and _zeros_ok(rules, zeros, full):
                out.append(full)
            return
        for p in range(min(remaining, cap), 0, -1):
            built.insert(0, p)
            if local_ok(built):
                rec(remaining - p, p, built)
            built.pop(0)

    rec(n, n, [])
    return out


def iter_accepted(rules: RuleSet, max_weight: int) -> Iterator[Partition]:
    """Every accepted partition of weight ``<= max_weight``, each exactly once.

    Accepted sets are closed under dropping the largest part, so a single
    depth-first walk that appends parts in increasing order visits them all.
    """
    zeros = (0,) * rules.fictitious_zeros
    if not _zeros_ok(rules, zeros, ()):
        return
    seq = list(zeros)
    mult: dict[int, int] = {}
    prefixes = rules.prefixes

    def walk(weight: int, low: int):
        parts = tuple(seq[len(zeros):])
        yield parts
        for v in range(low, max_weight - weight + 1):
            k = mult.get(v, 0) + 1
            if not rules.part_allowed(v, k):
                continue
            seq.append(v)
            cand = parts + (v,)
            if not _violates_end(rules.patterns, seq) and not any(
                    cand[: len(p)] == p for p in prefixes if len(cand) >= len(p)):
                mult[v] = k
                yield from walk(weight + v, v)
                mult[v] = k - 1
            seq.pop()

    yield from walk(0, 1)


def multiset_partitions(n: int, free: Sequence[int], distinct: Sequence[int],
                        modulus: int) -> list[Partition]:
    """Partitions of ``n`` into parts from residue classes mod ``modulus``.

    Parts in ``free`` classes repeat freely, parts in ``distinct`` classes
    occur at most once. Residue 0 means the positive multiples of the
    modulus. Listed in the same order as :func:`enumerate_partitions`.
    """
    free = {r % modulus for r in free}
    distinct = {r % modulus for r in distinct}
    out: list[Partition] = []

    def rec(remaining: int, cap: int, built: list[int]):
        if remaining == 0:
            out.append(tuple(reversed(built)))
            return
        for p in range(min(remaining, cap), 0, -1):
            r = p % modulus
            if r in free or (r in distinct and (not built or built[-1] != p)):
                built.append(p)
                rec(remaining - p, p, built)
                built.pop()

    if n >= 0:
        rec(n, n, [])
    return out


def _initial_ok(rules: RuleSet, parts: Partition) -> bool:
    mult: dict[int, int] = {}
    for p in parts:
        mult[p] = mult.get(p, 0) + 1
    for v, k in mult.items():
        if not rules.part_allowed(v, k):
            return False
    for pre in rules.prefixes:
        if parts[: len(pre)] == pre:
            return False
    return True


def _zeros_ok(rules: RuleSet, zeros: tuple[int, ...], parts: Partition) -> bool:
    if not zeros:
        return True
    seq = zeros + parts
    for start in range(len(zeros)):
        for pat in rules.patterns:
            if pat.matches_at(seq, start):
                return False
    return True


# --------------------------------------------------------------- DP count

def count_series(rules: RuleSet, order: int, track_x: bool = False,
                 max_x: int | None = None) -> LaurentSeries | BivariateSeries:
    """Generating function of accepted partitions, by weight (and length).

    The DP walks part values ``v = 1, 2, ...`` and chooses a multiplicity
    for each. Its state keeps the last few parts that are still close enough
    to ``v`` to sit in a forbidden window (stored as distances below ``v``)
    plus, while it matters, the real parts placed so far for anchored prefix
    conditions.
    """
    rules.check_window()
    if order < 0:
        raise ValueError("order must be nonnegative")
    if max_x is None:
        max_x = order
    reach = rules.window - 1          # max value distance inside a window
    keep = rules.max_len - 1          # parts of history a new part can see
    prefixes = rules.prefixes
    heads = {p[:i] for p in prefixes for i in range(len(p) + 1)}
    dtype = np.int64 if order <= 400 else object

    def trim(tail: tuple[int, ...]) -> tuple[int, ...]:
        # tail: distances below the next value, most recent last
        tail = tail[max(0, len(tail) - keep):] if keep else ()
        for i in range(len(tail) - 1, -1, -1):
            if tail[i] > reach:
                return tail[i + 1:]
        return tail

    shape = (max_x + 1, order + 1) if track_x else (order + 1,)
    start_tail = trim(tuple(1 for _ in range(rules.fictitious_zeros)))
    start_head = () if prefixes else None
    table = {(start_tail, start_head): np.zeros(shape, dtype=dtype)}
    if track_x:
        table[(start_tail, start_head)][0, 0] = 1
    else:
        table[(start_tail, start_head)][0] = 1

    if not _zeros_ok(rules, (0,) * rules.fictitious_zeros, ()):
        empty = np.zeros(shape, dtype=dtype)
        table = {(start_tail, start_head): empty}

    for v in range(1, order + 1):
        nxt: dict = {}
        for (tail, head), arr in table.items():
            seq = [v - d for d in tail]
            for c in range(order // v + 1):
                if c:
                    seq.append(v)
                    # a violation persists for every larger multiplicity
                    if _violates_end(rules.patterns, seq) or not rules.part_allowed(v, c):
                        break
                new_head = head
                if head is not None and c:
                    cand = head + (v,) * c
                    if any(cand[: len(p)] == p for p in prefixes):
                        break
                    new_head = cand if cand in heads else None
                recent = seq[max(0, len(seq) - keep):] if keep else []
                new_tail = trim(tuple(v + 1 - x for x in recent))
                key = (new_tail, new_head)
                dst = nxt.get(key)
                if dst is None:
                    dst = nxt[key] = np.zeros(shape, dtype=dtype)
                w = c * v
                if track_x:
                    if c > max_x:
                        break
                    dst[c:, w:] += arr[: max_x + 1 - c, : order + 1 - w]
                else:
                    dst[w:] += arr[: order + 1 - w]
        table = nxt

    total = sum(table.values())
    if track_x:
        return BivariateSeries([LaurentSeries([int(x) for x in total[m]], 0)
                                for m in range(max_x + 1)])
    return LaurentSeries([int(x) for x in total], 0)


def _violates_end(patterns: Sequence[ForbiddenPattern], seq: list[int]) -> bool:
    end = len(seq)
    for pat in patterns:
        start = end - len(pat.offsets)
        if start >= 0 and pat.matches_at(seq, start):
            return True
    return False


def dp_vs_enumeration_check(rules: RuleSet, up_to: int, counter=count_series) -> bool:
    """Do DP counts agree with brute-force enumeration for every ``n <= up_to``?"""
    series = counter(rules, up_to)
    return all(series[n] == len(enumerate_partitions(rules, n))
               for n in range(up_to + 1))
