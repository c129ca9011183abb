"""Commutativity checking of binary operators by rule mirroring.

A binary operator is syntactically commutative when every one of its
rules has a mirror rule: a bijective variable-for-variable mapping that
swaps the two source arguments, sends every premise into the premise set
of the candidate, may swap the two sides of commutative label operators,
and reproduces the conclusion label up to the label equations and the
conclusion target up to swapping arguments of operators already known
commutative.  The known set starts with choice plus every binary
operator and shrinks to a greatest fixed point.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .terms import (
    App,
    Choice,
    DataConst,
    EquationalTheory,
    LabelTerm,
    LApp,
    LVar,
    MSet,
    Prefix,
    PredConst,
    ActConst,
    Substitution,
    Term,
    Triple,
    Var,
    canon_label,
    free_vars,
    render_label,
    render_term,
    substitute_label,
    substitute_term,
)
from .tss import Rule, Spec

CHOICE_OP = "+"


def _cc_canon(t: Term, comm_set: set[str], th: EquationalTheory) -> Term:
    if isinstance(t, Prefix):
        return Prefix(canon_label(t.label, th), _cc_canon(t.body, comm_set, th))
    if isinstance(t, Choice):
        left = _cc_canon(t.left, comm_set, th)
        right = _cc_canon(t.right, comm_set, th)
        if CHOICE_OP in comm_set and render_term(left) > render_term(right):
            left, right = right, left
        return Choice(left, right)
    if isinstance(t, App):
        args = [
            canon_label(a, th) if isinstance(a, LabelTerm) else _cc_canon(a, comm_set, th)
            for a in t.args
        ]
        if t.op in comm_set and len(args) == 2 and not any(
            isinstance(a, LabelTerm) for a in args
        ):
            if render_term(args[0]) > render_term(args[1]):  # type: ignore[arg-type]
                args.reverse()
        return App(t.op, tuple(args))
    return t


def cc_equal(
    t1: Term, t2: Term, comm_set: set[str], th: EquationalTheory = EquationalTheory()
) -> bool:
    """Equality up to swapping arguments of known-commutative operators."""
    return render_term(_cc_canon(t1, comm_set, th)) == render_term(_cc_canon(t2, comm_set, th))


# ---------------------------------------------------------------------------
# mirror search


def _var_pairs_label(pat: LabelTerm, subj: LabelTerm, hmap, used, th):
    """Extend a variable-to-variable mapping so pat maps onto subj."""
    pat = canon_label(pat, th)
    subj = canon_label(subj, th)

    def walk(p, s, hm, us):
        if isinstance(p, LVar):
            if not (isinstance(s, LVar) and s.sort == p.sort):
                return
            old = hm.get(p.name)
            if old is not None:
                if old == s.name:
                    yield hm, us
                return
            if s.name in us:
                return
            h2 = dict(hm)
            h2[p.name] = s.name
            yield h2, us | {s.name}
            return
        if isinstance(p, (ActConst, PredConst, DataConst)):
            if render_label(p) == render_label(s):
                yield hm, us
            return
        if isinstance(p, LApp):
            if not (isinstance(s, LApp) and s.op == p.op and len(s.args) == len(p.args)):
                return
            if th.op_attrs(p.op).comm:
                yield from assign(list(p.args), list(s.args), hm, us)
            else:
                yield from seq(list(p.args), list(s.args), hm, us)
            return
        if isinstance(p, MSet):
            if isinstance(s, MSet) and s.sort == p.sort:
                yield from assign(list(p.elements), list(s.elements), hm, us)
            return
        if isinstance(p, Triple):
            if isinstance(s, Triple):
                for hm2, us2 in walk(p.pre, s.pre, hm, us):
                    yield from walk(p.post, s.post, hm2, us2)
            return

    def seq(ps, ss, hm, us):
        if not ps:
            yield hm, us
            return
        for hm2, us2 in walk(ps[0], ss[0], hm, us):
            yield from seq(ps[1:], ss[1:], hm2, us2)

    def assign(ps, ss, hm, us):
        if len(ps) != len(ss):
            return
        if not ps:
            yield hm, us
            return
        for i, cand in enumerate(ss):
            for hm2, us2 in walk(ps[0], cand, hm, us):
                yield from assign(ps[1:], ss[:i] + ss[i + 1:], hm2, us2)

    yield from walk(pat, subj, hmap, used)


def _mapping_substitution(spec: Spec, hmap: dict[str, str]) -> Substitution:
    sub = Substitution()
    for src, dst in hmap.items():
        sort = spec.variables.get(src, "Proc")
        if sort == "Proc":
            sub.terms[src] = Var(dst)
        else:
            sub.labels[src] = LVar(dst, spec.variables.get(dst, sort))
    return sub


def _binary_var_source(rule: Rule):
    src = rule.conclusion.source
    if not (isinstance(src, App) and len(src.args) == 2):
        return None
    names = []
    for slot in src.args:
        if isinstance(slot, (Var, LVar)):
            names.append(slot.name)
        else:
            return None
    return names


def _complete_mapping(rule_a: Rule, rule_b: Rule, hmap: dict[str, str]) -> dict[str, str]:
    """Extend the mapping to an involution-style display over both rules' variables."""
    out = dict(hmap)
    image = {v: k for k, v in hmap.items()}
    names: set[str] = set()
    for r in (rule_a, rule_b):
        for part in (r.conclusion.source, r.conclusion.target):
            ps, ls = free_vars(part)
            names |= ps | ls
        for p in r.positives:
            ps, ls = free_vars(p.source)
            names |= ps | ls
            names |= free_vars(p.label)[1]
            ps, ls = free_vars(p.target)
            names |= ps | ls
        for n in r.negatives:
            names |= free_vars(n.source)[0]
            names |= free_vars(n.label)[1]
    for v in sorted(names):
        if v not in out:
            out[v] = image.get(v, v)
    return out


def find_mirror(
    spec: Spec, rule_a: Rule, rule_b: Rule, comm_set: set[str]
) -> list[dict[str, str]]:
    """All mirror mappings sending rule_b onto rule_a with arguments swapped."""
    th = spec.theory
    src_a = _binary_var_source(rule_a)
    src_b = _binary_var_source(rule_b)
    if src_a is None or src_b is None:
        return []

    def sort_of(name: str) -> str:
        return spec.variables.get(name, "Proc")

    if sort_of(src_b[0]) != sort_of(src_a[1]) or sort_of(src_b[1]) != sort_of(src_a[0]):
        return []
    hmap = {src_b[0]: src_a[1], src_b[1]: src_a[0]}
    if len(set(hmap.values())) != len(hmap):
        return []
    used = set(hmap.values())

    found: list[dict[str, str]] = []
    seen_keys: set[tuple] = set()

    def check_negatives_and_conclusion(hm: dict[str, str]) -> None:
        sub = _mapping_substitution(spec, hm)
        neg_index = {
            (render_term(n.source), render_label(canon_label(n.label, th)))
            for n in rule_a.negatives
        }
        for n in rule_b.negatives:
            img_src = substitute_term(n.source, sub)
            img_lbl = canon_label(substitute_label(n.label, sub), th)
            if (render_term(img_src), render_label(img_lbl)) not in neg_index:
                return
        ca = render_label(canon_label(rule_a.conclusion.label, th))
        cb = render_label(canon_label(substitute_label(rule_b.conclusion.label, sub), th))
        if ca != cb:
            return
        if not cc_equal(
            substitute_term(rule_b.conclusion.target, sub),
            rule_a.conclusion.target,
            comm_set,
            th,
        ):
            return
        full = _complete_mapping(rule_a, rule_b, hm)
        key = tuple(sorted(full.items()))
        if key not in seen_keys:
            seen_keys.add(key)
            found.append(full)

    def assign_positives(i: int, hm: dict[str, str], us: set[str]) -> None:
        if i == len(rule_b.positives):
            check_negatives_and_conclusion(hm)
            return
        p = rule_b.positives[i]
        if not isinstance(p.source, Var) or not isinstance(p.target, Var):
            return
        want_src = hm.get(p.source.name)
        for q in rule_a.positives:
            if not isinstance(q.source, Var) or not isinstance(q.target, Var):
                continue
            if q.source.name != want_src:
                continue
            for hm2, us2 in _var_pairs_label(p.label, q.label, hm, us, th):
                tname = p.target.name
                old = hm2.get(tname)
                if old is not None:
                    if old == q.target.name:
                        assign_positives(i + 1, hm2, us2)
                    continue
                if q.target.name in us2:
                    continue
                hm3 = dict(hm2)
                hm3[tname] = q.target.name
                assign_positives(i + 1, hm3, us2 | {q.target.name})
        return

    assign_positives(0, hmap, used)
    return found


# ---------------------------------------------------------------------------
# the fixed-point check


@dataclass(frozen=True)
class MirrorWitness:
    """One proved mirror: rule_a is mirrored by rule_b under the mapping."""

    op: str
    rule_a: int
    rule_b: int
    mapping: tuple[tuple[str, str], ...]

    def mapping_str(self) -> str:
        return "  ".join(f"{v} <- {w}" for v, w in self.mapping)


@dataclass
class CommReport:
    """Outcome of the commutativity check over all binary operators."""

    proven: dict[str, list[MirrorWitness]]
    assumed: list[str]
    failed: dict[str, list[int]]


def check_comm(spec: Spec) -> CommReport:
    """Greatest fixed point of mutual mirroring over the binary operators."""
    binaries = [op for op in spec.proc_ops.values() if op.arity == 2]
    declared = {op.name for op in binaries if op.comm}
    comm_set = {CHOICE_OP} | {op.name for op in binaries}
    rules_of = {op.name: spec.rules_for(op.name) for op in binaries}

    def rule_has_mirror(name: str, rule: Rule) -> bool:
        return any(find_mirror(spec, rule, rb, comm_set) for _, rb in rules_of[name])

    changed = True
    while changed:
        changed = False
        for op in binaries:
            name = op.name
            if name not in comm_set or name in declared:
                continue
            if any(not rule_has_mirror(name, r) for _, r in rules_of[name]):
                comm_set.discard(name)
                changed = True

    proven: dict[str, list[MirrorWitness]] = {}
    failed: dict[str, list[int]] = {}
    for op in binaries:
        name = op.name
        if name in declared:
            continue
        if name in comm_set:
            witnesses = []
            covered: set[tuple[int, int]] = set()
            for ia, ra in rules_of[name]:
                for ib, rb in rules_of[name]:
                    mirrors = find_mirror(spec, ra, rb, comm_set)
                    if not mirrors:
                        continue
                    pair = (min(ia, ib), max(ia, ib))
                    if pair not in covered:
                        covered.add(pair)
                        witnesses.append(
                            MirrorWitness(name, ia, ib, tuple(sorted(mirrors[0].items())))
                        )
                    break
            proven[name] = witnesses
        else:
            failed[name] = [
                ia for ia, ra in rules_of[name] if not rule_has_mirror(name, ra)
            ]
    return CommReport(proven, sorted(declared), failed)


def formats_spec(spec: Spec, report: CommReport) -> Spec:
    """The same specification with proved commutativity recorded as attributes."""
    new_ops = {
        name: (replace(op, comm=True) if name in report.proven else op)
        for name, op in spec.proc_ops.items()
    }
    out = Spec(
        name=spec.name,
        actions=spec.actions,
        predicates=spec.predicates,
        data_sorts=dict(spec.data_sorts),
        data_consts=dict(spec.data_consts),
        label_ops=dict(spec.label_ops),
        proc_ops=new_ops,
        variables=dict(spec.variables),
        rules=spec.rules,
        defs=dict(spec.defs),
    )
    return out


# ---------------------------------------------------------------------------
# reporting


def _rule_lines(rule: Rule) -> list[str]:
    prem = rule.premises_str()
    return [prem, "===", str(rule.conclusion)]


def _side_by_side(left: list[str], right: list[str], gap: str = "   |   ") -> list[str]:
    width = max(len(l) for l in left)
    return [f"{l.ljust(width)}{gap}{r}".rstrip() for l, r in zip(left, right)]


def comm_report_text(spec: Spec, report: CommReport) -> str:
    lines: list[str] = []
    for name in report.assumed:
        lines.append(f"{name} is commutative (declared)")
        lines.append("")
    for name, witnesses in report.proven.items():
        lines.append(f"{name} is commutative")
        for w in witnesses:
            ra = next(r for i, r in spec.rules_for(name) if i == w.rule_a)
            rb = next(r for i, r in spec.rules_for(name) if i == w.rule_b)
            lines.append(f"  rule {w.rule_a} mirrors rule {w.rule_b}:")
            for row in _side_by_side(_rule_lines(ra), _rule_lines(rb)):
                lines.append(f"    {row}")
            lines.append(f"  with: {w.mapping_str()}")
        lines.append("")
    for name, unmatched in report.failed.items():
        lines.append(f"Could not prove commutativity for: {name}")
        for idx in unmatched:
            rule = next(r for i, r in spec.rules_for(name) if i == idx)
            lines.append(f"  rule {idx} has no mirror:")
            for row in _rule_lines(rule):
                lines.append(f"    {row}")
        lines.append("")
    if not lines:
        lines = ["no binary operators to check", ""]
    return "\n".join(lines).rstrip("\n") + "\n"


def comm_report_json(report: CommReport) -> dict:
    return {
        "proven": {
            name: [
                {
                    "rule_a": w.rule_a,
                    "rule_b": w.rule_b,
                    "mapping": {v: w2 for v, w2 in w.mapping},
                }
                for w in witnesses
            ]
            for name, witnesses in report.proven.items()
        },
        "assumed": list(report.assumed),
        "failed": {name: list(idxs) for name, idxs in report.failed.items()},
    }
