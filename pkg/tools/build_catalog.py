"""Regenerate ``src/qstairs/data/catalog.json`` from the tables below.

Run from the repository root: ``python3 tools/build_catalog.py``.
Linear data are stored doubled (``lin2``) so every exponent stays integral.
"""

from __future__ import annotations

import json
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "qstairs" / "data" / "catalog.json"


# ------------------------------------------------------------- helpers

def pat(*offsets, mod=1, res=0):
    return {"offsets": list(offsets), "base_mod": mod, "base_res": res}


ODD = {"mod": 2, "res": 1}
EVEN = {"mod": 2, "res": 0}


def rules(patterns, initial=(), zeros=0):
    return {"patterns": list(patterns), "initial": list(initial), "fictitious_zeros": zeros}


def forbid(p):
    return {"kind": "forbid_part", "part": p}


def at_most(p, k):
    return {"kind": "max_multiplicity", "part": p, "count": k}


def min_part(p):
    return {"kind": "min_part", "part": p}


def prefix(*parts):
    return {"kind": "forbid_prefix", "prefix": list(parts)}


def residues(pos, neg=(), modulus=12, **extra):
    out = {"modulus": modulus, "residues_pos": list(pos), "residues_neg": list(neg)}
    out.update(extra)
    return out


def fac(q_exp, q_step, sign=1, power=1, x_pow=0):
    out = {"q_exp": q_exp, "q_step": q_step}
    if sign != 1:
        out["sign"] = sign
    if power != 1:
        out["power"] = power
    if x_pow:
        out["x_pow"] = x_pow
    return out


def inv(q_exp, q_step, x_pow, sign=1):
    """``(sign x^x_pow q^q_exp; q^q_step)^(-1)``."""
    return fac(q_exp, q_step, sign, -1, x_pow)


def term(factors, coef=1, x_pow=0, q_pow=0):
    return {"coef": coef, "x_pow": x_pow, "q_pow": q_pow, "factors": factors}


def summ(staircase, weights, steps, signs, quad2, branches):
    return {"staircase": staircase, "x_weights": list(weights), "denom_steps": list(steps),
            "signs": list(signs), "quad2": list(quad2),
            "branches": [dict(b) for b in branches]}


def br(lin, coef=1, x_offset=0, const=0):
    """Branch with the jagged linear vector ``lin`` and constant ``const``."""
    out = {"coef": coef, "lin2": [2 * v for v in lin]}
    if x_offset:
        out["x_offset"] = x_offset
    if const:
        out["const2"] = 2 * const
    return out


def rule(block, **kw):
    out = {"block": block}
    out.update(kw)
    return out


def grammar(rules_, exceptions=(), min_label=1):
    return {"rules": list(rules_), "exceptions": list(exceptions), "min_label": min_label}


def face(gram, closed, case=None, prepend_zero=False):
    out = {"grammar": gram, "closed_form": list(closed)}
    if case:
        out["case"] = case
    if prepend_zero:
        out["prepend_zero"] = True
    return out


# ----------------------------------------------------------- A9 family

def a9_sum(lin):
    return summ(2, (1, 2, 3), (1, 4, 6), (0, 0, 1), (0, 0, 6), [br(lin)])


A9_COMMON = [pat(0, 1), pat(0, 0, **ODD), pat(0, 0, 0, **EVEN), pat(0, 3, 3, **ODD),
             pat(0, 2, 2, **EVEN), pat(0, 0, 2, **EVEN), pat(0, 0, 3, **EVEN)]
A9_4 = [pat(0, 0), pat(0, 1, **ODD), pat(0, 1, 3, **EVEN), pat(0, 2, 3, **EVEN),
        pat(0, 2, 4, **EVEN)]
A9_5 = [pat(0, 1), pat(0, 0, **EVEN), pat(0, 0, 0, **ODD), pat(0, 0, 2, **ODD),
        pat(0, 0, 3, **ODD), pat(0, 1, 1, **EVEN), pat(0, 2, 2, **ODD), pat(0, 2, 4, **ODD)]
A9_6 = [pat(0, 0), pat(0, 1, **EVEN), pat(0, 2, 4, **EVEN), pat(0, 1, 3, **ODD),
        pat(0, 2, 3, **ODD)]


def a9_exception(min_base):
    return {"offsets": [0, 1, -1], "mod": 2, "res": 1, "min_base": min_base}


def a9_closed(a, b, c):
    """``(x q^a; q)^-1 (x^2 q^b; q^4)^-1 (x^3 q^c; q^6)``."""
    return [term([inv(a, 1, 1), inv(b, 4, 2), fac(c, 6, x_pow=3)])]


# ----------------------------------------------------------- KR family

def kr_sum(branches):
    return summ(1, (1, 2, 3), (1, 2, 3), (0, 0, 0), (0, 2, 0), branches)


def four_sum(branches):
    return summ(1, (1, 2, 3, 4), (1, 2, 3, 4), (0, 0, 0, 1), (0, 0, 0, 4), branches)


KR_I5 = [pat(0, 0, 0), pat(0, 1, 1), pat(0, 0, 1, 2), pat(0, 0, 2, 2)]
KR_I6 = [pat(0, 0, 0), pat(0, 0, 1), pat(0, 1, 2, 2), pat(0, 0, 2, 2)]
NEW_7 = [pat(0, 1, 1), pat(0, 0, 1), pat(0, 2, 2, 2), pat(0, 0, 0, 2), pat(0, 0, 0, 0)]
NEW_8 = [pat(0, 0, 0), pat(0, 0, 1), pat(0, 1, 2, 2), pat(0, 1, 2, 3), pat(0, 1, 1, 3, 3)]
NEW_8A = [pat(0, 0, 0), pat(0, 1, 1), pat(0, 0, 1, 2), pat(0, 1, 2, 3), pat(0, 0, 2, 2, 3)]

KR_I5_TAIL = "[0,-1,-1]*,[0,-1]?,0*"
KR_I6_TAIL = "[0,-1]?,[0,0,-1]*,0*"

# --------------------------------------------------------- Capparelli

CAP_RULES = [pat(0, 0), pat(0, 1), pat(0, 2, mod=3, res=0), pat(0, 2, mod=3, res=1),
             pat(0, 3, mod=3, res=1), pat(0, 3, mod=3, res=2)]


def cap4(lin2):
    return {"staircase": 3, "x_weights": [1, 1, 1, 2], "denom_steps": [3, 3, 3, 6],
            "signs": [0, 0, 0, 0], "quad2": [0, 3, 3, 0],
            "branches": [{"coef": 1, "lin2": list(lin2)}]}


def cap2(branches):
    return {"staircase": 3, "x_weights": [1, 2], "denom_steps": [1, 3],
            "signs": [0, 0], "quad2": [1, 0], "branches": branches}


CAP1_PRODUCT = residues([2, 3, 9, 10])
CAP2_PRODUCT = residues([1, 3, 5, 7, 9, 11], [2, 10],
                        witness={"modulus": 6, "free": [], "distinct": [1, 3, 5, 0]})
CAP2_ALT = {"modulus": 1, "residues_pos": [], "residues_neg": [],
            "factors": [fac(1, 6, -1), fac(3, 6, -1), fac(5, 6, -1), fac(6, 6, -1)]}
CAP1_GRAMMAR = grammar([rule("0*", mod=3, res=0, min_label=3),
                        rule("0?", mod=3, res=1, min_label=4),
                        rule("[0,-1]*,0?", mod=3, res=2, min_label=2)])
CAP2_GRAMMAR = grammar([rule("0,[1,0]*,1?", min_label=1, max_label=1, span=2),
                        rule("0*", mod=3, res=0, min_label=3),
                        rule("0?", mod=3, res=1, min_label=4),
                        rule("[0,-1]*,0?", mod=3, res=2, min_label=5)])
CAP1_CLOSED = [term([inv(3, 3, 1), fac(2, 3, -1, x_pow=1), fac(4, 3, -1, x_pow=1),
                     inv(3, 6, 2)])]
CAP2_CLOSED = [term([inv(3, 3, 1), fac(5, 3, -1, x_pow=1), fac(1, 3, -1, x_pow=1),
                     inv(3, 6, 2)])]


# ------------------------------------------------------------- entries

def entry(id_, status, step, product, sum_, rules_, notes, **extra):
    out = {"id": id_, "status": status, "staircase_step": step, "x_shift": 0,
           "notes": notes, "product": product, "sum": sum_, "rules": rules_}
    out.update(extra)
    return out


def build() -> list[dict]:
    cat = []
    add = cat.append

    # symmetric A9 identities
    add(entry("A9-1", "conjecture", 2, residues([1, 4, 6, 8, 11]), a9_sum((1, 6, 6)),
              rules(A9_COMMON, [at_most(2, 1)]),
              "Identity 1. Even blocks are [j, j-2]*, j*: the jagged "
              "image of 2+4 is 2,2, which the order j*, [j-2, j]* does not parse.",
              jagged=[face(grammar([rule("0*", min_label=2, max_label=2),
                                    rule("0*", **ODD), rule("[0,-2]*,0*", **EVEN, min_label=4)],
                                   [a9_exception(3)]), a9_closed(1, 6, 9))]))
    add(entry("A9-2", "conjecture", 2,
              residues([2, 3, 4, 8, 9, 10], [6],
                       witness={"modulus": 12, "free": [2, 4, 8, 10], "distinct": [3, 9]}),
              a9_sum((2, 2, 6)), rules(A9_COMMON, [forbid(1)]),
              "Identity 2. The second product form is stored as an "
              "alternative and must expand identically.",
              alt_products=[{"modulus": 1, "residues_pos": [], "residues_neg": [],
                             "factors": [fac(3, 6, -1), fac(6, 6), fac(2, 2, power=-1)]}],
              jagged=[face(grammar([rule("[0,-2]*,0*", **EVEN, min_label=2),
                                    rule("0*", **ODD, min_label=3)],
                                   [a9_exception(3)], min_label=2),
                           [term([inv(2, 1, 1), fac(9, 6, x_pow=3), inv(2, 4, 2)])])]))
    add(entry("A9-3", "conjecture", 2, residues([4, 5, 6, 7, 8]), a9_sum((4, 6, 12)),
              rules(A9_COMMON, [min_part(4)]),
              "Identity 3: parts 1, 2 and 3 are forbidden.",
              jagged=[face(grammar([rule("[0,-2]*,0*", **EVEN, min_label=4),
                                    rule("0*", **ODD, min_label=5)],
                                   [a9_exception(5)], min_label=4),
                           [term([inv(4, 1, 1), fac(15, 6, x_pow=3), inv(6, 4, 2)])])]))

    # asymmetric companions
    add(entry("A9-4", "conjecture", 2, residues([1, 4, 5, 9, 11]), a9_sum((1, 3, 3)),
              rules(A9_4), "Identity 4.",
              jagged=[face(grammar([rule("[0,-1]*,0{0,2}", **EVEN, min_label=2),
                                    rule("0*", **ODD)]),
                           [term([inv(1, 1, 1), inv(3, 4, 2), fac(6, 6, x_pow=3)])])]))
    add(entry("A9-4a", "conjecture", 2, residues([1, 5, 7, 8, 9]), a9_sum((2, -1, 3)),
              rules(A9_4, zeros=1),
              "Identity 4a. Jagged images split into case a (a 2-staircase "
              "removed from 0 + pi, x-degree one above the length) and case b.",
              jagged=[
                  face(grammar([rule("[0,-1]+", min_label=0, max_label=0, required=True),
                                rule("[0,-1]*,0{0,2}", **EVEN, min_label=2),
                                rule("0*", **ODD, min_label=3)], min_label=0),
                       [term([inv(-1, 4, 2), inv(2, 1, 1), fac(6, 6, x_pow=3)],
                             x_pow=2, q_pow=-1)],
                       case="a", prepend_zero=True),
                  face(grammar([rule("[0,1]*,1?|[0,1]*,[0,2]", min_label=1, max_label=1, span=2),
                                rule("[0,-1]*,0{0,2}", **EVEN, min_label=4),
                                rule("0*", **ODD, min_label=3)]),
                       [term([inv(3, 4, 2), inv(2, 1, 1), fac(6, 6, x_pow=3)])],
                       case="b")]))
    add(entry("A9-5", "conjecture", 2, residues([1, 2, 5, 6, 9, 10], [3]), a9_sum((1, 0, 0)),
              rules(A9_5), "Identity 5. The product has a numerator, "
              "so there is no multiset witness listing.",
              jagged=[face(grammar([rule("[0,-2]*,0{0,2}", **ODD), rule("0*", **EVEN, min_label=2)]),
                           [term([inv(1, 1, 1), inv(0, 4, 2), fac(3, 6, x_pow=3)])])]))
    add(entry("A9-5a", "conjecture", 2, residues([2, 3, 6, 7, 10, 11], [9]), a9_sum((2, 4, 6)),
              rules(A9_5, zeros=1), "Identity 5a.",
              jagged=[face(grammar([rule("[0,-2]*,0{0,2}", **ODD, min_label=3),
                                    rule("0*", **EVEN, min_label=2)], min_label=2),
                           [term([inv(2, 1, 1), inv(4, 4, 2), fac(9, 6, x_pow=3)])])]))
    add(entry("A9-6", "conjecture", 2, residues([1, 3, 7, 8, 11]), a9_sum((1, 1, 3)),
              rules(A9_6), "Identity 6.",
              jagged=[face(grammar([rule("0{0,2}", **EVEN, min_label=2),
                                    rule("[0,-1]*,0*", **ODD)]),
                           [term([inv(1, 1, 1), inv(1, 4, 2), fac(6, 6, x_pow=3)])])]))
    add(entry("A9-6a", "conjecture", 2, residues([3, 4, 5, 7, 11]), a9_sum((3, 5, 9)),
              rules(A9_6, [min_part(3)]), "Identity 6a: parts 1 and 2 are forbidden.",
              jagged=[face(grammar([rule("0{0,2}", **EVEN, min_label=4),
                                    rule("[0,-1]*,0*", **ODD, min_label=3)], min_label=3),
                           [term([inv(3, 1, 1), inv(5, 4, 2), fac(12, 6, x_pow=3)])])]))

    # KR and R identities with 1-staircases
    add(entry("KR-I5", "conjecture", 1, residues([1, 3, 4, 6, 7, 10, 11]),
              kr_sum([br((1, 2, 4))]), rules(KR_I5, [at_most(1, 1)]),
              "KR I5. The jagged form carries 4k; the variant with 3k after "
              "reinstatement is kept as a rejected variant.",
              rejected_variants=[{"label": "3k after reinstatement",
                                  "sum": kr_sum([br((1, 2, 3))])}],
              jagged=[face(grammar([rule("0*", min_label=1, max_label=1),
                                    rule(KR_I5_TAIL, min_label=2)]),
                           [term([inv(1, 1, 1), fac(3, 2, -1, x_pow=2), inv(4, 3, 3)])])]))
    kr_i6_grammar = grammar([rule("[0,0,-1]*,0*", min_label=2, max_label=2),
                             rule(KR_I6_TAIL, min_label=3)], min_label=2)
    add(entry("KR-I6", "conjecture", 1, residues([2, 3, 5, 6, 7, 8, 11]),
              kr_sum([br((2, 4, 5))]), rules(KR_I6, [forbid(1), at_most(2, 1)]),
              "KR I6.",
              jagged=[face(kr_i6_grammar,
                           [term([inv(2, 1, 1), fac(5, 2, -1, x_pow=2), inv(5, 3, 3)])])]))
    add(entry("KR-I6-alt", "conjecture", 1, residues([2, 3, 5, 6, 7, 8, 11]),
              four_sum([br((2, 5, 5, 8))]), rules(KR_I6, [forbid(1), at_most(2, 1)]),
              "KR I6, second analytic form with four indices.",
              jagged=[face(kr_i6_grammar,
                           [term([inv(2, 1, 1), fac(10, 4, x_pow=4), inv(5, 2, 2),
                                  inv(5, 3, 3)])])]))
    r5a = [br((1, 2, 2)), br((1, 2, 2), x_offset=2, const=1), br((1, 2, 2), -1, 3, 2)]
    r5a_bad = [br((1, 2, 5)), br((1, 2, 5), x_offset=2, const=1), br((1, 2, 5), -1, 3, 2)]
    r5a_common = [fac(3, 2, -1, x_pow=2), inv(2, 3, 3), inv(1, 1, 1)]
    add(entry("R-I5a", "conjecture", 1, residues([1, 2, 5, 6, 8, 9, 11]),
              kr_sum(r5a), rules(KR_I6, [prefix(1, 2, 2)]),
              "R I5a. The linear term 2k is certified; the variant with "
              "5k is kept as a rejected variant.",
              rejected_variants=[{"label": "5k", "sum": kr_sum(r5a_bad)}],
              jagged=[face(grammar([rule("[0,-1,[0,0,-1]*]?,0*", min_label=1, max_label=1),
                                    rule(KR_I6_TAIL, min_label=2)]),
                           [term(r5a_common), term(r5a_common, 1, 2, 1),
                            term(r5a_common, -1, 3, 2)])]))
    r6a = [br((2, 2, 4), x_offset=1, const=1), br((1, 2, 4), x_offset=2, const=1),
           br((3, 4, 7))]
    r6a_bad = r6a[:2] + [br((3, 4, 4))]
    add(entry("R-I6a", "conjecture", 1, residues([1, 4, 5, 6, 7, 9, 10]),
              kr_sum(r6a), rules(KR_I5, [forbid(2)]),
              "R I6a. The third branch needs (x^3 q^7; q^3); the variant "
              "with (x^3 q^4; q^3) in every branch is kept as a rejected variant.",
              rejected_variants=[{"label": "4k in every branch", "sum": kr_sum(r6a_bad)}],
              jagged=[face(grammar([rule("0,-1,0*,[1,0,0]*,[1,0]?,1*|0,[1,0,0]*,[1,0]?,1*",
                                         min_label=1, max_label=1, span=2),
                                    rule(KR_I5_TAIL, min_label=3)]),
                           [term([inv(2, 1, 1), fac(3, 2, -1, x_pow=2), inv(4, 3, 3)], 1, 1, 1),
                            term([inv(1, 1, 1), fac(3, 2, -1, x_pow=2), inv(4, 3, 3)], 1, 2, 1),
                            term([inv(3, 1, 1), fac(5, 2, -1, x_pow=2), inv(7, 3, 3)])])]))

    # four-index companions
    add(entry("new-7", "conjecture", 1, residues([1, 3, 4, 6, 8, 9, 11]),
              four_sum([br((1, 3, 6, 6))]), rules(NEW_7, zeros=1),
              "Identity 7.",
              jagged=[face(grammar([rule("0*", min_label=1, max_label=1),
                                    rule("[0,-1]*,0*", min_label=2, max_label=2),
                                    rule("[0,-1,-2]*,[0,-1]*,0*", min_label=3)],
                                   [{"offsets": [0, 1, 0, -1], "min_base": 2}]),
                           [term([inv(1, 1, 1), inv(3, 2, 2), inv(6, 3, 3),
                                  fac(8, 4, x_pow=4)])])]))
    add(entry("new-7a", "conjecture", 1, residues([3, 4, 5, 6, 7, 8, 9]),
              four_sum([br((3, 5, 6, 10))]), rules(NEW_7, [min_part(3)]),
              "Identity 7a: parts 1 and 2 are forbidden.",
              jagged=[face(grammar([rule("[0,-1,-2]*,[0,-1]*,0*", min_label=3)],
                                   [{"offsets": [0, 1, 0, -1], "min_base": 3}], min_label=3),
                           [term([inv(3, 1, 1), inv(5, 2, 2), inv(6, 3, 3),
                                  fac(12, 4, x_pow=4)])])]))
    add(entry("new-8", "conjecture", 1, residues([2, 3, 4, 5, 8, 9, 11]),
              four_sum([br((2, 3, 5, 6))]), rules(NEW_8, zeros=2),
              "Identity 8.",
              jagged=[face(grammar([rule("[0,-1]*,[0,0,-1]*,0{0,3}", min_label=2)], min_label=2),
                           [term([inv(2, 1, 1), inv(3, 2, 2), inv(5, 3, 3),
                                  fac(8, 4, x_pow=4)])])]))
    b8a = [br((2, 3, 4, 6)), br((2, 3, 4, 6), x_offset=1, const=1),
           br((2, 3, 4, 6), x_offset=2, const=2), br((2, 3, 4, 6), -1, 3, 4)]
    b8a_bad = b8a[:3] + [br((2, 3, 4, 6), 1, 3, 4)]
    c8a = [inv(2, 1, 1), inv(3, 2, 2), inv(4, 3, 3), fac(8, 4, x_pow=4)]
    add(entry("new-8a", "conjecture", 1, residues([1, 3, 4, 7, 8, 9, 10]),
              four_sum(b8a), rules(NEW_8A, [prefix(1, 1), prefix(1, 2, 3), prefix(2, 2, 3)]),
              "Identity 8a. The prefactor is 1 + xq + x^2q^2 - x^3q^4; the "
              "fourth branch is negative, and the positive variant is kept as a rejected variant.",
              rejected_variants=[{"label": "fourth branch positive", "sum": four_sum(b8a_bad)}],
              jagged=[face(grammar([rule("0,0?,[1,0,0]*,[1,0]*,1{0,3}", min_label=1,
                                         max_label=1, span=2),
                                    rule("[0,-1]*,0{0,3}", min_label=2, max_label=2),
                                    rule("[0,-1,-1]*,[0,-1]*,0{0,3}", min_label=3)]),
                           [term(c8a), term(c8a, 1, 1, 1), term(c8a, 1, 2, 2),
                            term(c8a, -1, 3, 4)])]))

    # Capparelli
    add(entry("Capparelli-1-4idx", "theorem", 3, CAP1_PRODUCT, cap4((6, 1, 5, 6)),
              rules(CAP_RULES, [forbid(1)]), "Capparelli's first identity, four-index form.",
              jagged=[face(CAP1_GRAMMAR, CAP1_CLOSED)]))
    add(entry("Capparelli-1-2idx", "theorem", 3, CAP1_PRODUCT,
              cap2([{"coef": 1, "lin2": [3, 6]}]),
              rules(CAP_RULES, [forbid(1)]), "Capparelli's first identity, two-index form."))
    add(entry("Capparelli-2-4idx", "theorem", 3, CAP2_PRODUCT, cap4((6, 7, -1, 6)),
              rules(CAP_RULES, [forbid(2)]),
              "Capparelli's second identity, four-index form. The product is "
              "(-q, -q^3, -q^5, -q^6; q^6): distinct parts in classes 0, 1, 3, 5 mod 6. "
              "The variant with -q^4 fails at q^4.",
              alt_products=[CAP2_ALT], jagged=[face(CAP2_GRAMMAR, CAP2_CLOSED)]))
    add(entry("Capparelli-2-2idx", "theorem", 3, CAP2_PRODUCT,
              cap2([{"coef": 1, "lin2": [5, 6]},
                    {"coef": 1, "lin2": [5, 6], "x_offset": 1, "const2": 2}]),
              rules(CAP_RULES, [forbid(2)]),
              "Capparelli's second identity, two-index form.",
              alt_products=[CAP2_ALT]))
    return cat


def main() -> None:
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(build(), indent=1) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
