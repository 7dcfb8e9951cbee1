"""Identity registry loaded from the packaged JSON catalog."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .multisum import MultiSumSpec
from .partitions import RuleSet
from .qproducts import PochhammerFactor, ProductSpec
from .staircase import BlockGrammar


class CatalogError(ValueError):
    """Malformed catalog document or unknown identity."""


@dataclass(frozen=True)
class ClosedTerm:
    """``coef * x^x_pow * q^q_pow * prod(factors)`` in a closed-form generating function."""

    coef: int
    x_pow: int
    q_pow: int
    factors: tuple[PochhammerFactor, ...]

    def as_tuple(self):
        return (self.coef, self.x_pow, self.q_pow, self.factors)

    @classmethod
    def from_json(cls, d: Mapping) -> ClosedTerm:
        return cls(int(d.get("coef", 1)), int(d.get("x_pow", 0)), int(d.get("q_pow", 0)),
                   tuple(PochhammerFactor.from_json(f) for f in d["factors"]))

    def to_json(self) -> dict:
        return {"coef": self.coef, "x_pow": self.x_pow, "q_pow": self.q_pow,
                "factors": [f.to_json() for f in self.factors]}


@dataclass(frozen=True)
class JaggedFace:
    """Block grammar and closed form for the jagged images of one identity.

    ``case`` is None, or ``"a"``/``"b"`` for the two halves of a split; a face
    with ``prepend_zero`` is built from ``0 + pi`` and counts one extra entry.
    """

    grammar: BlockGrammar
    closed_form: tuple[ClosedTerm, ...]
    case: str | None = None
    prepend_zero: bool = False

    @classmethod
    def from_json(cls, d: Mapping) -> JaggedFace:
        return cls(BlockGrammar.from_json(d["grammar"]),
                   tuple(ClosedTerm.from_json(t) for t in d["closed_form"]),
                   d.get("case"), bool(d.get("prepend_zero", False)))

    def to_json(self) -> dict:
        out = {"grammar": self.grammar.to_json(),
               "closed_form": [t.to_json() for t in self.closed_form]}
        if self.case:
            out["case"] = self.case
        if self.prepend_zero:
            out["prepend_zero"] = True
        return out


@dataclass(frozen=True)
class Variant:
    label: str
    sum: MultiSumSpec


@dataclass(frozen=True)
class IdentitySpec:
    id: str
    product: ProductSpec
    sum: MultiSumSpec
    rules: RuleSet
    staircase_step: int
    status: str = "conjecture"
    notes: str = ""
    x_shift: int = 0
    jagged: tuple[JaggedFace, ...] = ()
    alt_products: tuple[ProductSpec, ...] = ()
    rejected_variants: tuple[Variant, ...] = ()

    @property
    def grammar(self) -> BlockGrammar | None:
        return self.jagged[0].grammar if len(self.jagged) == 1 else None

    @classmethod
    def from_json(cls, d: Mapping) -> IdentitySpec:
        try:
            return cls(
                id=str(d["id"]),
                product=ProductSpec.from_json(d["product"]),
                sum=MultiSumSpec.from_json(d["sum"]),
                rules=RuleSet.from_json(d["rules"]),
                staircase_step=int(d["staircase_step"]),
                status=str(d.get("status", "conjecture")),
                notes=str(d.get("notes", "")),
                x_shift=int(d.get("x_shift", 0)),
                jagged=tuple(JaggedFace.from_json(f) for f in d.get("jagged", ())),
                alt_products=tuple(ProductSpec.from_json(p) for p in d.get("alt_products", ())),
                rejected_variants=tuple(Variant(v["label"], MultiSumSpec.from_json(v["sum"]))
                                        for v in d.get("rejected_variants", ())),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CatalogError(f"bad catalog entry {d.get('id', '?')!r}: {exc}") from exc

    def to_json(self) -> dict:
        out = {"id": self.id, "status": self.status, "staircase_step": self.staircase_step,
               "x_shift": self.x_shift, "notes": self.notes,
               "product": self.product.to_json(), "sum": self.sum.to_json(),
               "rules": self.rules.to_json()}
        if self.jagged:
            out["jagged"] = [f.to_json() for f in self.jagged]
        if self.alt_products:
            out["alt_products"] = [p.to_json() for p in self.alt_products]
        if self.rejected_variants:
            out["rejected_variants"] = [{"label": v.label, "sum": v.sum.to_json()}
                                        for v in self.rejected_variants]
        return out


@dataclass(frozen=True)
class Catalog:
    """Read-only, ordered mapping from identity id to :class:`IdentitySpec`."""

    entries: tuple[IdentitySpec, ...]
    _index: Mapping[str, IdentitySpec] = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        index = {}
        for e in self.entries:
            if e.id in index:
                raise CatalogError(f"duplicate identity {e.id!r}")
            index[e.id] = e
        object.__setattr__(self, "_index", MappingProxyType(index))

    def __getitem__(self, id_: str) -> IdentitySpec:
        try:
            return self._index[id_]
        except KeyError:
            raise CatalogError(f"unknown identity {id_!r}") from None

    def __contains__(self, id_) -> bool:
        return id_ in self._index

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def ids(self) -> list[str]:
        return [e.id for e in self.entries]


def parse_catalog(doc) -> Catalog:
    if not isinstance(doc, list):
        raise CatalogError("catalog must be a JSON array of identities")
    return Catalog(tuple(IdentitySpec.from_json(d) for d in doc))


def read_catalog(path: str | Path) -> Catalog:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CatalogError(f"cannot read catalog {path}: {exc}") from exc
    return parse_catalog(doc)


@lru_cache(maxsize=None)
def load_catalog() -> Catalog:
    """The catalog shipped with the package."""
    text = resources.files("qstairs").joinpath("data/catalog.json").read_text()
    return parse_catalog(json.loads(text))
