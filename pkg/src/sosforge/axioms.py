"""Equational normalization of closed terms into base-fragment normal forms.

Every operator gets one defining equation per rule: when the rule's
premises hold of the (head-normal) arguments, the right-hand side gains
the summand `label . context`.  Folding these equations bottom-up rewrites
any semantically well-founded closed term to a term built from deadlock,
prefixing, and choice alone, sound for bisimilarity and complete on
ground terms.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceeded, NonBccspTerm, NonHnfArgument, OpenTerm
from .simulator import solve_rule
from .terms import (
    App,
    Choice,
    DefConst,
    LabelTerm,
    Nil,
    Prefix,
    Substitution,
    Term,
    Var,
    canon_label,
    canon_term,
    fold_choice,
    render_label,
    render_term,
    substitute_label,
    substitute_term,
    summands,
)
from .tss import Rule, Spec


@dataclass(frozen=True)
class NormalizeBudget:
    """Work limits for normalization of ill-founded inputs."""

    max_rewrites: int = 10000
    max_depth: int = 500


DEFAULT_BUDGET = NormalizeBudget()


def satisfies(spec: Spec, args: tuple, rule: Rule) -> list[Substitution]:
    """Substitutions under which a rule's premises hold of head-normal arguments.

    Positive premises are witnessed by summands of the tested argument;
    negative premises demand the absence of any summand with that label.
    """
    th = spec.theory
    offers: dict[int, list[tuple[LabelTerm, Term]]] = {}
    for k, a in enumerate(args):
        if isinstance(a, Term):
            try:
                offers[k] = summands(a, th)
            except NonBccspTerm as e:
                raise NonHnfArgument(f"argument {render_term(a)}: {e}") from None
    return solve_rule(spec, rule, tuple(args), lambda k: offers[k])


def normalize(spec: Spec, term: Term, budget: NormalizeBudget | None = None) -> Term:
    """Rewrite a closed, definition-free term to its canonical normal form."""
    th = spec.theory
    budget = budget or DEFAULT_BUDGET
    rules_by_op: dict[str, list[Rule]] = {
        name: [r for _, r in spec.rules_for(name)] for name in spec.proc_ops
    }
    memo: dict[str, Term] = {}
    spent = 0

    def norm(t: Term, depth: int) -> Term:
        nonlocal spent
        if depth > budget.max_depth:
            raise BudgetExceeded(
                f"normalization depth exceeded {budget.max_depth}; "
                "term not semantically well-founded within budget"
            )
        if isinstance(t, Var):
            raise OpenTerm(f"cannot normalize open term with variable {t.name}")
        if isinstance(t, DefConst):
            raise NonBccspTerm(f"recursion constant {t.name} cannot be normalized")
        if isinstance(t, Nil):
            return t
        if isinstance(t, Prefix):
            return Prefix(canon_label(t.label, th), norm(t.body, depth + 1))
        if isinstance(t, Choice):
            parts = [norm(a, depth + 1) for a in (t.left, t.right)]
            return canon_term(Choice(parts[0], parts[1]), th)
        assert isinstance(t, App)
        normed_args = tuple(
            canon_label(a, th) if isinstance(a, LabelTerm) else norm(a, depth + 1)
            for a in t.args
        )
        key = render_term(App(t.op, normed_args))
        hit = memo.get(key)
        if hit is not None:
            return hit
        spent += 1
        if spent > budget.max_rewrites:
            raise BudgetExceeded(
                f"normalization exceeded {budget.max_rewrites} rewrites; "
                "term not semantically well-founded within budget"
            )
        parts = []
        for rule in rules_by_op.get(t.op, []):
            for s in satisfies(spec, normed_args, rule):
                lbl = canon_label(substitute_label(rule.conclusion.label, s), th)
                cont = norm(substitute_term(rule.conclusion.target, s), depth + 1)
                parts.append(Prefix(lbl, cont))
        result = canon_term(fold_choice(parts), th)
        memo[key] = result
        return result

    return norm(term, 0)


# ---------------------------------------------------------------------------
# the equation schema as a report


@dataclass(frozen=True)
class AxiomEntry:
    """One defining equation: a summand guarded by premise conditions."""

    rule: int
    head: str
    summand: str
    conditions: tuple[str, ...]


def _op_head(spec: Spec, name: str) -> str:
    op = spec.proc_ops[name]
    xs = [f"x{i + 1}" for i in range(op.arity)]
    if op.symbol is not None and op.arity == 2:
        return f"{xs[0]} {op.symbol} {xs[1]}"
    return f"{name}({','.join(xs)})"


def axiom_report(spec: Spec) -> dict[str, list[AxiomEntry]]:
    """The equation schema instance for every declared operator."""
    out: dict[str, list[AxiomEntry]] = {}
    for name in spec.proc_ops:
        entries = []
        for idx, rule in spec.rules_for(name):
            concl = rule.conclusion
            head = render_term(concl.source)
            summand = render_term(Prefix(concl.label, concl.target))
            conds = []
            for p in rule.positives:
                conds.append(
                    f"{render_term(p.source)} has summand "
                    f"{render_term(Prefix(p.label, p.target))}"
                )
            for n in rule.negatives:
                conds.append(f"{render_term(n.source)} cannot do {render_label(n.label)}")
            entries.append(AxiomEntry(idx, head, summand, tuple(conds)))
        out[name] = entries
    return out


def axiom_report_text(spec: Spec) -> str:
    report = axiom_report(spec)
    blocks = []
    for name, entries in report.items():
        lines = [f"axioms for {name}"]
        if not entries:
            lines.append(f"  {_op_head(spec, name)} = 0")
        for e in entries:
            lines.append(f"  [rule {e.rule}] {e.head} = {e.summand}")
            for c in e.conditions:
                lines.append(f"    if {c}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def axiom_report_json(spec: Spec) -> list[dict]:
    report = axiom_report(spec)
    return [
        {
            "op": name,
            "axioms": [
                {
                    "rule": e.rule,
                    "head": e.head,
                    "summand": e.summand,
                    "conditions": list(e.conditions),
                }
                for e in entries
            ],
        }
        for name, entries in report.items()
    ]
