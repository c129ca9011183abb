"""Head-normalization through rules and the derived equation report."""

import random

import pytest

from sosforge import parse_spec, parse_term
from sosforge.axioms import (
    NormalizeBudget,
    axiom_report,
    axiom_report_json,
    axiom_report_text,
    normalize,
    satisfies,
)
from sosforge.bisim import bisimilar
from sosforge.errors import BudgetExceeded, NonBccspTerm, NonHnfArgument, OpenTerm
from sosforge.terms import DefConst, Var, render_label, render_term
from termgen import random_full_term

# -- premise satisfaction ---------------------------------------------------------


def test_satisfies_interleave_rule(par):
    rule = par.rules[0]
    got = satisfies(par, (parse_term("a . 0", par), parse_term("b . 0", par)), rule)
    assert len(got) == 1
    assert render_label(got[0].labels["alpha"]) == "a"
    assert render_term(got[0].terms["x'"]) == "0"


def test_satisfies_blocked_by_negative(gspec):
    rule = gspec.rules[0]
    a_a = (parse_term("a . 0", gspec), parse_term("a . 0", gspec))
    assert satisfies(gspec, a_a, rule) == []
    a_b = (parse_term("a . 0", gspec), parse_term("b . 0", gspec))
    got = satisfies(gspec, a_b, rule)
    assert len(got) == 1
    assert render_label(got[0].labels["k"]) == "a"
    assert render_label(got[0].labels["l"]) == "b"


def test_satisfies_needs_head_normal_arguments(par):
    rule = par.rules[0]
    args = (parse_term("a . 0 || 0", par), parse_term("0", par))
    with pytest.raises(NonHnfArgument):
        satisfies(par, args, rule)


# -- normalization ----------------------------------------------------------------


def test_normalize_expansion_law(par):
    t = parse_term("a . 0 || b . 0", par)
    assert render_term(normalize(par, t)) == "a . b . 0 + b . a . 0"


def test_normalize_base_terms_is_canonicalization(par):
    t = parse_term("b . 0 + a . 0 + a . 0", par)
    assert render_term(normalize(par, t)) == "a . 0 + b . 0"
    assert render_term(normalize(par, parse_term("0 || 0", par))) == "0"


def test_normalize_store_operators(linda):
    assert render_term(normalize(linda, parse_term("tell(u)", linda))) == (
        "< {d},-,{d, u} > . | . 0"
    )
    assert render_term(normalize(linda, parse_term("ask(u) ; tell(v)", linda))) == (
        "< {d, u},-,{d, u} > . < {d},-,{d, v} > . | . 0"
    )


def test_normalize_mixer(gspec):
    assert render_term(normalize(gspec, parse_term("g(a . 0, b . 0)", gspec))) == (
        "mix(a,b) . 0"
    )
    assert render_term(normalize(gspec, parse_term("g(a . 0, a . 0)", gspec))) == "a . 0"


def test_normalize_idempotent_and_sound(full):
    rng = random.Random(41)
    for _ in range(60):
        t = random_full_term(rng, 3)
        nf = normalize(full, t)
        assert render_term(normalize(full, nf)) == render_term(nf)
        ok, _ = bisimilar(full, t, nf)
        assert ok, render_term(t)


def test_normalize_rejects_open_and_recursive(par, rec):
    with pytest.raises(OpenTerm):
        normalize(par, Var("x"))
    with pytest.raises(NonBccspTerm):
        normalize(rec, DefConst("p1"))


ILL_FOUNDED = """
spec LOOPY
actions a ;
op f : 2 ;
var x y : Proc ;
rule ==> f(x, y) -(a)-> f(x, y) ;
"""


def test_normalize_budget_depth():
    spec = parse_spec(ILL_FOUNDED)
    with pytest.raises(BudgetExceeded) as e:
        normalize(spec, parse_term("f(0, 0)", spec))
    assert "well-founded" in str(e.value)


def test_normalize_budget_rewrites(par):
    tight = NormalizeBudget(max_rewrites=1)
    with pytest.raises(BudgetExceeded):
        normalize(par, parse_term("a . 0 || b . 0", par), tight)


# -- the equation report -------------------------------------------------------------


def test_axiom_report_text_golden(par):
    assert axiom_report_text(par) == (
        "axioms for _||_\n"
        "  [rule 1] x || y = alpha . (x' || y)\n"
        "    if x has summand alpha . x'\n"
        "  [rule 2] x || y = alpha . (x || y')\n"
        "    if y has summand alpha . y'\n"
        "  [rule 3] x || y = | . 0\n"
        "    if x has summand | . x'\n"
        "    if y has summand | . y'\n"
    )


def test_axiom_report_rule_free_operator():
    spec = parse_spec("spec STUCK\nactions a ;\nop k : 1 ;\n")
    text = axiom_report_text(spec)
    assert "k(x1) = 0" in text


def test_axiom_report_json(par):
    js = axiom_report_json(par)
    assert js and js[0]["op"] == "_||_"
    entries = axiom_report(par)["_||_"]
    assert [e.rule for e in entries] == [1, 2, 3]
    assert entries[2].summand == "| . 0"
    assert entries[2].conditions == (
        "x has summand | . x'",
        "y has summand | . y'",
    )
