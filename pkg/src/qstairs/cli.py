"""Command line: ``qstairs verify | list | inverse-euler | search``.

Exit status is 0 when everything passes, 1 when a comparison fails and 2
for usage or catalog errors.
"""

from __future__ import annotations

import argparse
import csv
import fnmatch
import io
import json
import sys
from typing import Sequence

from .catalog import Catalog, CatalogError, load_catalog, read_catalog
from .multisum import evaluate
from .partitions import enumerate_partitions, multiset_partitions
from .qproducts import ProductSpec, expand_product, inverse_euler, is_periodic_pm1
from .staircase import classify_4a, remove_staircase
from .verify import (DEFAULT_BOXES, PAIRS, VerificationReport, base_form,
                     search_linear_shifts, verify_many)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _catalog(args) -> Catalog:
    return read_catalog(args.catalog) if args.catalog else load_catalog()


def _select(catalog: Catalog, patterns: Sequence[str] | None) -> list[str]:
    if not patterns:
        return catalog.ids()
    chosen = []
    for pat in patterns:
        found = [i for i in catalog.ids() if fnmatch.fnmatchcase(i, pat)]
        if not found:
            raise CatalogError(f"unknown identity {pat!r}")
        chosen.extend(i for i in found if i not in chosen)
    return chosen


def _fmt_partition(parts) -> str:
    return "+".join(map(str, parts)) if parts else "(empty)"


# -------------------------------------------------------------- verify

def _mismatch_text(report: VerificationReport) -> str:
    fail = report.first_failure()
    if fail is None:
        return ""
    name, c = fail
    return f"{name} at q^{c.exponent}: {c.left} vs {c.right}"


def _emit_reports(reports: list[VerificationReport], fmt: str, out) -> None:
    if fmt == "json":
        json.dump([r.to_json() for r in reports], out, indent=1)
        out.write("\n")
    elif fmt == "csv":
        w = csv.writer(out)
        w.writerow(["id", "outcome", "order", "count_order", *PAIRS, "first_mismatch",
                    "seconds"])
        for r in reports:
            w.writerow([r.id, "pass" if r.passed else "fail", r.order, r.count_order,
                        *("pass" if r.comparisons[p].passed else "fail" for p in PAIRS),
                        _mismatch_text(r), f"{r.wall_time:.3f}"])
    else:
        width = max([len(r.id) for r in reports] + [8])
        out.write(f"{'identity':<{width}}  outcome  order  counts  seconds  detail\n")
        for r in reports:
            out.write(f"{r.id:<{width}}  {'pass' if r.passed else 'FAIL':<7}  {r.order:>5}  "
                      f"{r.count_order:>6}  {r.wall_time:>7.2f}  {_mismatch_text(r)}\n")


def cmd_verify(args) -> int:
    order = 500 if args.deep else args.order
    count_order = min(args.count_order, order)
    if order < 0 or count_order < 0:
        raise UsageError("orders must be nonnegative")
    catalog = _catalog(args)
    ids = _select(catalog, args.id)
    reports = verify_many(ids, order, count_order, catalog, threads=args.threads)
    _emit_reports(reports, args.format, sys.stdout)
    failed = [r for r in reports if not r.passed]
    for r in failed:
        print(f"mismatch: {r.id}: {_mismatch_text(r)}", file=sys.stderr)
    return EXIT_MISMATCH if failed else EXIT_OK


# ---------------------------------------------------------------- list

def cmd_list(args) -> int:
    catalog = _catalog(args)
    spec = catalog[args.id]
    n = args.n
    if n < 0:
        raise UsageError("--n must be nonnegative")
    if args.side == "sum":
        for p in enumerate_partitions(spec.rules, n):
            print(_fmt_partition(p))
    elif args.side == "product":
        try:
            w = spec.product.witness_model()
        except ValueError as exc:
            raise UsageError(f"{spec.id}: {exc}") from None
        for p in multiset_partitions(n, w.free, w.distinct, w.modulus):
            print(_fmt_partition(p))
    else:
        split = any(f.case for f in spec.jagged)
        for p in enumerate_partitions(spec.rules, n):
            if split:
                case, mu = classify_4a(p, spec.rules)
                print(f"{_fmt_partition(p)}\tcase {case}\t{','.join(map(str, mu.entries))}")
            else:
                mu = remove_staircase(p, spec.staircase_step)
                print(f"{_fmt_partition(p)}\t{','.join(map(str, mu.entries))}")
    return EXIT_OK


# -------------------------------------------------------- inverse-euler

def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma separated integers, got {text!r}") from None


def cmd_inverse_euler(args) -> int:
    terms = args.terms
    if args.id:
        spec = _catalog(args)[args.id]
        if args.source == "sum":
            series = evaluate(spec.sum, terms)
            modulus = spec.product.modulus
        else:
            prod = spec.product if args.alt is None else spec.alt_products[args.alt]
            series = expand_product(prod, terms)
            modulus = spec.product.modulus
    elif args.residues is not None:
        modulus = args.modulus or 1
        prod = ProductSpec.from_residues(modulus, _int_list(args.residues),
                                         _int_list(args.negative or ""))
        series = expand_product(prod, terms)
    else:
        raise UsageError("give --id or --residues")
    modulus = args.modulus or modulus
    a = inverse_euler(series)
    print(" ".join(map(str, a[1:])))
    try:
        verdict = is_periodic_pm1(a, modulus)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if verdict:
        pos = [r for r, v in verdict.pattern.items() if v == 1]
        neg = [r for r, v in verdict.pattern.items() if v == -1]
        print(f"periodic mod {modulus}: +1 at {pos}" + (f", -1 at {neg}" if neg else ""))
        return EXIT_OK
    print(f"not periodic mod {modulus}: {verdict.reason}")
    return EXIT_MISMATCH


# -------------------------------------------------------------- search

def _parse_box(text: str) -> list[tuple[int, int]]:
    box = []
    for part in text.split(","):
        try:
            lo, hi = (int(x) for x in part.split(":"))
        except ValueError:
            raise UsageError(f"bad box range {part!r}; use lo:hi,lo:hi,...") from None
        box.append((lo, hi))
    return box


def cmd_search(args) -> int:
    spec = _catalog(args)[args.base]
    base = base_form(spec.sum)
    if args.box:
        box = _parse_box(args.box)
    else:
        box = next((b for b in DEFAULT_BOXES.values() if len(b) == base.rank), None)
        if box is None:
            raise UsageError("no default box for this base; pass --box")
    if len(box) != base.rank:
        raise UsageError(f"{spec.id} has {base.rank} indices, box has {len(box)}")

    def progress(done, total):
        if args.progress and (done == total or done % 500 == 0):
            print(f"{done}/{total} points", file=sys.stderr)

    try:
        hits = search_linear_shifts(base, box, args.order, args.modulus, progress=progress,
                                    budget=args.budget, dedupe=not args.all)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        json.dump([h.to_json() for h in hits], sys.stdout, indent=1)
        sys.stdout.write("\n")
    else:
        for h in hits:
            print(f"{','.join(map(str, h.linear))}\t{h.describe()}")
    return EXIT_OK


# ---------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qstairs", description=__doc__.splitlines()[0])
    p.add_argument("--catalog", help="catalog JSON (default: the packaged one)")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="check sum, product and rule counts")
    v.add_argument("--id", action="append", help="identity id or glob (repeatable)")
    v.add_argument("--order", type=int, default=200)
    v.add_argument("--count-order", type=int, default=80)
    v.add_argument("--deep", action="store_true", help="check to q^500 (overrides --order)")
    v.add_argument("--format", choices=("table", "json", "csv"), default="table")
    v.add_argument("--threads", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    ls = sub.add_parser("list", help="list the witnesses of one weight")
    ls.add_argument("--id", default="A9-1")
    ls.add_argument("--side", choices=("sum", "product", "jagged"), default="sum")
    ls.add_argument("--n", type=int, required=True)
    ls.set_defaults(func=cmd_list)

    ie = sub.add_parser("inverse-euler", help="exponents a_m of a product or sum")
    ie.add_argument("--id")
    ie.add_argument("--source", choices=("product", "sum"), default="product")
    ie.add_argument("--alt", type=int, help="use the given alternative product form")
    ie.add_argument("--residues", help="denominator classes, e.g. 1,4,6,8,11")
    ie.add_argument("--negative", help="numerator classes")
    ie.add_argument("--modulus", type=int)
    ie.add_argument("--terms", type=int, default=60)
    ie.set_defaults(func=cmd_inverse_euler)

    s = sub.add_parser("search", help="scan linear terms for periodic products")
    s.add_argument("--base", required=True, help="identity whose sum is the base form")
    s.add_argument("--box", help="inclusive ranges lo:hi,lo:hi,... "
                                 "(write --box=... when a bound is negative)")
    s.add_argument("--order", type=int, default=120)
    s.add_argument("--modulus", type=int, default=12)
    s.add_argument("--budget", type=int, default=100_000, help="maximum number of points")
    s.add_argument("--all", action="store_true", help="keep every vector, not one per pattern")
    s.add_argument("--progress", action="store_true")
    s.add_argument("--format", choices=("table", "json"), default="table")
    s.set_defaults(func=cmd_search)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (CatalogError, UsageError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
