"""One-step semantics of closed terms under a specification's rules.

Deadlock, prefixing, and choice step by built-in clauses; user operators
step by their rules: bind the source arguments, witness each positive
premise against the moves of the tested argument, then require the
negative premises to be unmet.  The same solver drives both simulation
(moves = one-step successors) and the axiom schema (moves = summands).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import BudgetExceeded, OpenTerm
from .terms import (
    App,
    Choice,
    DefConst,
    LabelTerm,
    LVar,
    Nil,
    Prefix,
    Substitution,
    Term,
    Var,
    canon_label,
    canon_term,
    free_vars,
    label_sort,
    match,
    render_label,
    render_term,
    sort_accepts,
    substitute_label,
    substitute_term,
)
from .tss import Rule, Spec

DEFAULT_DEPTH_CAP = 500
DEFAULT_SET_CAP = 10000

Moves = Callable[[int], list[tuple[LabelTerm, Term]]]


@dataclass(frozen=True)
class Step:
    """One outgoing transition: a ground label and the successor term."""

    label: LabelTerm
    target: Term

    def __str__(self) -> str:
        return f"< {render_label(self.label)} # {render_term(self.target)} >"


def solve_rule(spec: Spec, rule: Rule, args: tuple, moves: Moves) -> list[Substitution]:
    """All substitutions under which a rule fires on the given arguments.

    `moves(k)` supplies the (label, continuation) pairs the k-th argument
    offers; labels are expected in canonical form.
    """
    th = spec.theory
    src = rule.conclusion.source
    if not isinstance(src, App) or len(src.args) != len(args):
        return []
    base = Substitution()
    pos_of: dict[str, int] = {}
    for k, (slot, actual) in enumerate(zip(src.args, args)):
        if isinstance(slot, Var):
            if not isinstance(actual, Term):
                return []
            base.terms[slot.name] = actual
            pos_of[slot.name] = k
        elif isinstance(slot, LVar):
            if not isinstance(actual, LabelTerm):
                return []
            value = canon_label(actual, th)
            if not sort_accepts(slot.sort, label_sort(value)):
                return []
            base.labels[slot.name] = value
        else:
            return []

    subs = [base]
    for prem in rule.positives:
        if not (isinstance(prem.source, Var) and prem.source.name in pos_of):
            return []
        offered = moves(pos_of[prem.source.name])
        nxt: list[Substitution] = []
        for s in subs:
            pat = substitute_label(prem.label, s)
            for lbl, cont in offered:
                for m in match(pat, lbl, th):
                    merged = s.copy()
                    merged.labels.update(m.labels)
                    tname = prem.target.name if isinstance(prem.target, Var) else None
                    if tname is None:
                        continue
                    if tname in merged.terms:
                        if render_term(merged.terms[tname]) != render_term(cont):
                            continue
                    else:
                        merged.terms[tname] = cont
                    nxt.append(merged)
        subs = nxt
        if not subs:
            return []

    for neg in rule.negatives:
        if not (isinstance(neg.source, Var) and neg.source.name in pos_of):
            return []
        offered_labels = {
            render_label(canon_label(l, th)) for l, _ in moves(pos_of[neg.source.name])
        }
        kept = []
        for s in subs:
            lbl = substitute_label(neg.label, s)
            if free_vars(lbl)[1]:
                continue  # an unbound negative label can never be refuted
            if render_label(canon_label(lbl, th)) not in offered_labels:
                kept.append(s)
        subs = kept
        if not subs:
            return []
    return subs


def step(
    spec: Spec,
    term: Term,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    set_cap: int = DEFAULT_SET_CAP,
) -> list[Step]:
    """All one-step transitions of a closed term, sorted and deduplicated."""
    th = spec.theory
    rules_by_op: dict[str, list[Rule]] = {}
    for name in spec.proc_ops:
        rules_by_op[name] = [r for _, r in spec.rules_for(name)]
    cache: dict[str, list[Step]] = {}

    def go(t: Term, depth: int) -> list[Step]:
        if depth > depth_cap:
            raise BudgetExceeded(
                f"step recursion exceeded {depth_cap} levels; is a definition unguarded?"
            )
        if isinstance(t, Var):
            raise OpenTerm(f"cannot step open term with variable {t.name}")
        key = render_term(canon_term(t, th))
        hit = cache.get(key)
        if hit is not None:
            return hit
        if isinstance(t, Nil):
            steps: list[Step] = []
        elif isinstance(t, Prefix):
            steps = [Step(canon_label(t.label, th), t.body)]
        elif isinstance(t, Choice):
            steps = go(t.left, depth + 1) + go(t.right, depth + 1)
        elif isinstance(t, DefConst):
            steps = go(spec.definition(t.name), depth + 1)
        else:
            assert isinstance(t, App)
            args = t.args

            def moves(k: int) -> list[tuple[LabelTerm, Term]]:
                return [(s.label, s.target) for s in go(args[k], depth + 1)]

            steps = []
            for rule in rules_by_op.get(t.op, []):
                for s in solve_rule(spec, rule, args, moves):
                    lbl = canon_label(substitute_label(rule.conclusion.label, s), th)
                    tgt = substitute_term(rule.conclusion.target, s)
                    steps.append(Step(lbl, tgt))

        # dedup and order by canonical serialization; targets keep their shape
        uniq: dict[tuple[str, str], Step] = {}
        for s in steps:
            uniq.setdefault(
                (render_label(s.label), render_term(canon_term(s.target, th))), s
            )
        if len(uniq) > set_cap:
            raise BudgetExceeded(f"step set exceeded {set_cap} transitions")
        out = [uniq[k] for k in sorted(uniq)]
        cache[key] = out
        return out

    return go(term, 0)


def unfold(spec: Spec, term: Term) -> Term:
    """Replace recursion constants not under a prefix by their bodies, once."""
    if isinstance(term, DefConst):
        return spec.definition(term.name)
    if isinstance(term, Choice):
        return Choice(unfold(spec, term.left), unfold(spec, term.right))
    if isinstance(term, App):
        return App(
            term.op,
            tuple(a if isinstance(a, LabelTerm) else unfold(spec, a) for a in term.args),
        )
    return term


def steps_to_json(steps: list[Step]) -> list[dict]:
    return [{"label": render_label(s.label), "target": render_term(s.target)} for s in steps]
