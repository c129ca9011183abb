"""Process and label terms: construction, rendering, canonical forms, matching.

Process terms live over deadlock `0`, prefixing `l . t`, binary choice
`t + t`, recursion constants, and user operators.  Label terms cover action
and predicate constants, data constants, variables, label-operator
applications, data multisets, and store-transition triples.  The rendered
string of a canonical form doubles as the identity key everywhere else in
the package (state sets, memo tables, dedup).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import NonBccspTerm, OpenTerm, SortError

SORT_PROC = "Proc"
SORT_ACTION = "Action"
SORT_PREDICATE = "Predicate"
SORT_LABEL = "Label"


# ---------------------------------------------------------------------------
# nodes


class LabelTerm:
    """Base class for everything that can sit in a label position."""

    def __str__(self) -> str:
        return render_label(self)


@dataclass(frozen=True)
class ActConst(LabelTerm):
    """A declared action constant."""

    name: str


@dataclass(frozen=True)
class PredConst(LabelTerm):
    """A declared predicate constant, e.g. the termination marker `|`."""

    name: str


@dataclass(frozen=True)
class DataConst(LabelTerm):
    """A declared data constant together with its data sort."""

    name: str
    sort: str


@dataclass(frozen=True)
class LVar(LabelTerm):
    """A label-side variable; its sort bounds what it may be bound to."""

    name: str
    sort: str


@dataclass(frozen=True)
class LApp(LabelTerm):
    """A label-operator application, e.g. mix(k, l)."""

    op: str
    args: tuple[LabelTerm, ...]
    sort: str = SORT_LABEL


@dataclass(frozen=True)
class MSet(LabelTerm):
    """A data multiset; union is associative and commutative with an identity."""

    elements: tuple[LabelTerm, ...]
    sort: str


@dataclass(frozen=True)
class Triple(LabelTerm):
    """A store transition < pre,-,post > over data multisets."""

    pre: LabelTerm
    post: LabelTerm


class Term:
    """Base class for process terms."""

    def __str__(self) -> str:
        return render_term(self)


@dataclass(frozen=True)
class Var(Term):
    """A process variable."""

    name: str


@dataclass(frozen=True)
class Nil(Term):
    """The deadlock process `0`."""


NIL = Nil()


@dataclass(frozen=True)
class Prefix(Term):
    """`label . body`: perform the label, continue as the body."""

    label: LabelTerm
    body: Term


@dataclass(frozen=True)
class Choice(Term):
    """`left + right`: nondeterministic choice."""

    left: Term
    right: Term


@dataclass(frozen=True)
class DefConst(Term):
    """A recursion constant bound by a defining equation."""

    name: str


@dataclass(frozen=True)
class App(Term):
    """A user-operator application; arguments may be process or data terms."""

    op: str
    args: tuple[Term | LabelTerm, ...]


def infix_symbol(op: str) -> str | None:
    """Return the bare symbol of an `_sym_` operator name, else None."""
    if len(op) > 2 and op.startswith("_") and op.endswith("_") and "_" not in op[1:-1]:
        return op[1:-1]
    return None


# ---------------------------------------------------------------------------
# equational theory


@dataclass(frozen=True)
class OpAttrs:
    """Declared equational attributes of a label operator."""

    comm: bool = False
    assoc: bool = False
    identity: LabelTerm | None = None


@dataclass(frozen=True)
class EquationalTheory:
    """Label-side equations in force: operator attributes and multiset identities."""

    label_ops: dict[str, OpAttrs] = field(default_factory=dict)
    data_identity: dict[str, str | None] = field(default_factory=dict)

    def op_attrs(self, op: str) -> OpAttrs:
        return self.label_ops.get(op, OpAttrs())


EMPTY_THEORY = EquationalTheory()


# ---------------------------------------------------------------------------
# rendering (canonical serialization)

_LVL_INFIX = 0
_LVL_CHOICE = 1
_LVL_PREFIX = 2
_LVL_ATOM = 3


def render_label(l: LabelTerm) -> str:
    """Serialize a label term; canonical inputs give the canonical string."""
    if isinstance(l, (ActConst, PredConst, DataConst, LVar)):
        return l.name
    if isinstance(l, LApp):
        return f"{l.op}({','.join(render_label(a) for a in l.args)})"
    if isinstance(l, MSet):
        return "{" + ", ".join(render_label(e) for e in l.elements) + "}"
    if isinstance(l, Triple):
        return f"< {render_label(l.pre)},-,{render_label(l.post)} >"
    raise TypeError(f"not a label term: {l!r}")


def _render_any(t: Term | LabelTerm, min_level: int) -> str:
    if isinstance(t, LabelTerm):
        return render_label(t)
    return _render(t, min_level)


def _render(t: Term, min_level: int) -> str:
    if isinstance(t, Nil):
        s, lvl = "0", _LVL_ATOM
    elif isinstance(t, (Var, DefConst)):
        s, lvl = t.name, _LVL_ATOM
    elif isinstance(t, Prefix):
        s = f"{render_label(t.label)} . {_render(t.body, _LVL_PREFIX)}"
        lvl = _LVL_PREFIX
    elif isinstance(t, Choice):
        s = f"{_render(t.left, _LVL_PREFIX)} + {_render(t.right, _LVL_CHOICE)}"
        lvl = _LVL_CHOICE
    elif isinstance(t, App):
        sym = infix_symbol(t.op)
        if sym is not None and len(t.args) == 2:
            s = f"{_render_any(t.args[0], _LVL_INFIX)} {sym} {_render_any(t.args[1], _LVL_CHOICE)}"
            lvl = _LVL_INFIX
        else:
            s = f"{t.op}({','.join(_render_any(a, _LVL_INFIX) for a in t.args)})"
            lvl = _LVL_ATOM
    else:
        raise TypeError(f"not a process term: {t!r}")
    return f"({s})" if lvl < min_level else s


def render_term(t: Term) -> str:
    """Serialize a process term; canonical inputs give the canonical string."""
    return _render(t, _LVL_INFIX)


# ---------------------------------------------------------------------------
# sorts


def label_sort(l: LabelTerm) -> str:
    """The sort of a label term."""
    if isinstance(l, ActConst):
        return SORT_ACTION
    if isinstance(l, PredConst):
        return SORT_PREDICATE
    if isinstance(l, (DataConst, LVar, MSet)):
        return l.sort
    if isinstance(l, LApp):
        return l.sort
    if isinstance(l, Triple):
        return SORT_LABEL
    raise TypeError(f"not a label term: {l!r}")


def sort_accepts(var_sort: str, term_sort: str) -> bool:
    """Whether a variable of var_sort may be bound to a term of term_sort."""
    if var_sort == SORT_LABEL:
        return term_sort in (SORT_ACTION, SORT_PREDICATE, SORT_LABEL)
    return var_sort == term_sort


def is_data_sort(sort: str) -> bool:
    return sort not in (SORT_PROC, SORT_ACTION, SORT_PREDICATE, SORT_LABEL)


# ---------------------------------------------------------------------------
# substitution


@dataclass
class Substitution:
    """A finite mapping from process variables to terms and label variables to labels."""

    terms: dict[str, Term] = field(default_factory=dict)
    labels: dict[str, LabelTerm] = field(default_factory=dict)

    def copy(self) -> "Substitution":
        return Substitution(dict(self.terms), dict(self.labels))

    def key(self) -> tuple:
        return (
            tuple(sorted((n, render_term(t)) for n, t in self.terms.items())),
            tuple(sorted((n, render_label(l)) for n, l in self.labels.items())),
        )

    def __str__(self) -> str:
        parts = [f"{n} <- {render_term(t)}" for n, t in sorted(self.terms.items())]
        parts += [f"{n} <- {render_label(l)}" for n, l in sorted(self.labels.items())]
        return "{" + ", ".join(parts) + "}"


def substitute_label(l: LabelTerm, sub: Substitution) -> LabelTerm:
    """Apply a substitution to a label term; unbound variables stay put."""
    if isinstance(l, LVar):
        image = sub.labels.get(l.name)
        if image is None:
            return l
        if not sort_accepts(l.sort, label_sort(image)):
            raise SortError(
                f"variable {l.name} : {l.sort} bound to {render_label(image)} : {label_sort(image)}"
            )
        return image
    if isinstance(l, LApp):
        return LApp(l.op, tuple(substitute_label(a, sub) for a in l.args), l.sort)
    if isinstance(l, MSet):
        return MSet(tuple(substitute_label(e, sub) for e in l.elements), l.sort)
    if isinstance(l, Triple):
        return Triple(substitute_label(l.pre, sub), substitute_label(l.post, sub))
    return l


def substitute_term(t: Term, sub: Substitution) -> Term:
    """Apply a substitution to a process term; unbound variables stay put."""
    if isinstance(t, Var):
        return sub.terms.get(t.name, t)
    if isinstance(t, Prefix):
        return Prefix(substitute_label(t.label, sub), substitute_term(t.body, sub))
    if isinstance(t, Choice):
        return Choice(substitute_term(t.left, sub), substitute_term(t.right, sub))
    if isinstance(t, App):
        return App(
            t.op,
            tuple(
                substitute_label(a, sub) if isinstance(a, LabelTerm) else substitute_term(a, sub)
                for a in t.args
            ),
        )
    return t


def free_vars(t: Term | LabelTerm) -> tuple[set[str], set[str]]:
    """Free process-variable and label-variable names of a term."""
    procs: set[str] = set()
    labels: set[str] = set()

    def walk(x: Term | LabelTerm) -> None:
        if isinstance(x, Var):
            procs.add(x.name)
        elif isinstance(x, LVar):
            labels.add(x.name)
        elif isinstance(x, Prefix):
            walk(x.label)
            walk(x.body)
        elif isinstance(x, Choice):
            walk(x.left)
            walk(x.right)
        elif isinstance(x, App):
            for a in x.args:
                walk(a)
        elif isinstance(x, LApp):
            for a in x.args:
                walk(a)
        elif isinstance(x, MSet):
            for e in x.elements:
                walk(e)
        elif isinstance(x, Triple):
            walk(x.pre)
            walk(x.post)

    walk(t)
    return procs, labels


def is_closed(t: Term | LabelTerm) -> bool:
    procs, labels = free_vars(t)
    return not procs and not labels


# ---------------------------------------------------------------------------
# canonical forms


def canon_label(l: LabelTerm, th: EquationalTheory = EMPTY_THEORY) -> LabelTerm:
    """Canonical form of a label modulo the declared attribute equations."""
    if isinstance(l, DataConst):
        if th.data_identity.get(l.sort) == l.name:
            return MSet((), l.sort)
        return l
    if isinstance(l, (ActConst, PredConst, LVar)):
        return l
    if isinstance(l, LApp):
        attrs = th.op_attrs(l.op)
        args = [canon_label(a, th) for a in l.args]
        if attrs.assoc:
            flat: list[LabelTerm] = []
            for a in args:
                if isinstance(a, LApp) and a.op == l.op:
                    flat.extend(a.args)
                else:
                    flat.append(a)
            args = flat
        if attrs.identity is not None:
            ident = render_label(canon_label(attrs.identity, th))
            args = [a for a in args if render_label(a) != ident]
            if not args:
                return canon_label(attrs.identity, th)
            if len(args) == 1:
                return args[0]
        if attrs.comm:
            args.sort(key=render_label)
        return LApp(l.op, tuple(args), l.sort)
    if isinstance(l, MSet):
        flat = []
        for e in l.elements:
            ce = canon_label(e, th)
            if isinstance(ce, MSet) and ce.sort == l.sort:
                flat.extend(ce.elements)
            else:
                flat.append(ce)
        flat.sort(key=render_label)
        return MSet(tuple(flat), l.sort)
    if isinstance(l, Triple):
        return Triple(_canon_slot(l.pre, th), _canon_slot(l.post, th))
    raise TypeError(f"not a label term: {l!r}")


def _canon_slot(slot: LabelTerm, th: EquationalTheory) -> LabelTerm:
    """Canonicalize a triple slot, coercing a lone data constant to a singleton multiset."""
    c = canon_label(slot, th)
    if isinstance(c, DataConst):
        return MSet((c,), c.sort)
    return c


def choice_atoms(t: Term) -> list[Term]:
    """Flatten a choice chain into its non-choice parts, in syntactic order."""
    if isinstance(t, Choice):
        return choice_atoms(t.left) + choice_atoms(t.right)
    return [t]


def fold_choice(atoms: list[Term]) -> Term:
    """Right-nest a list of summands into a choice chain; empty means deadlock."""
    if not atoms:
        return NIL
    out = atoms[-1]
    for a in reversed(atoms[:-1]):
        out = Choice(a, out)
    return out


def canon_term(t: Term, th: EquationalTheory = EMPTY_THEORY) -> Term:
    """Canonical form modulo choice ACI with unit 0 and the label equations.

    Works on arbitrary terms, open or closed; user operators are kept in
    place with their arguments canonicalized.
    """
    if isinstance(t, (Nil, Var, DefConst)):
        return t
    if isinstance(t, Prefix):
        return Prefix(canon_label(t.label, th), canon_term(t.body, th))
    if isinstance(t, App):
        return App(
            t.op,
            tuple(
                canon_label(a, th) if isinstance(a, LabelTerm) else canon_term(a, th)
                for a in t.args
            ),
        )
    if isinstance(t, Choice):
        atoms = [canon_term(a, th) for a in choice_atoms(t)]
        atoms = [a for a in atoms if not isinstance(a, Nil)]
        atoms.sort(key=render_term)
        deduped: list[Term] = []
        for a in atoms:
            if not deduped or render_term(deduped[-1]) != render_term(a):
                deduped.append(a)
        return fold_choice(deduped)
    raise TypeError(f"not a process term: {t!r}")


def _require_bccsp(t: Term) -> None:
    if isinstance(t, Var):
        raise OpenTerm(f"free variable {t.name}")
    if isinstance(t, App):
        raise NonBccspTerm(f"operator {t.op} outside the base fragment")
    if isinstance(t, Prefix):
        _require_bccsp(t.body)
    elif isinstance(t, Choice):
        _require_bccsp(t.left)
        _require_bccsp(t.right)


def canon_process(t: Term, th: EquationalTheory = EMPTY_THEORY) -> Term:
    """Canonical form of a closed term of the deadlock/prefix/choice fragment."""
    _require_bccsp(t)
    return canon_term(t, th)


def summands(t: Term, th: EquationalTheory = EMPTY_THEORY) -> list[tuple[LabelTerm, Term]]:
    """Decompose a head normal form into its (label, continuation) summands."""
    c = canon_process(t, th)
    out = []
    for atom in choice_atoms(c):
        if isinstance(atom, Nil):
            continue
        if isinstance(atom, DefConst):
            raise NonBccspTerm(f"recursion constant {atom.name} is not a head normal form")
        assert isinstance(atom, Prefix)
        out.append((atom.label, atom.body))
    return out


# ---------------------------------------------------------------------------
# matching


def match(pattern: Term | LabelTerm, subject: Term | LabelTerm,
          th: EquationalTheory = EMPTY_THEORY) -> list[Substitution]:
    """All substitutions s with canon(substitute(pattern, s)) == canon(subject).

    Matching is modulo the choice and label equations, with multiset-style
    positions (choice summands, data multisets) matched by element-wise
    assignment: each pattern element claims exactly one subject element.
    """
    if isinstance(pattern, LabelTerm):
        pat: Term | LabelTerm = canon_label(pattern, th)
        subj: Term | LabelTerm = canon_label(subject, th)  # type: ignore[arg-type]
    else:
        pat = canon_term(pattern, th)
        subj = canon_term(subject, th)  # type: ignore[arg-type]
    results: list[Substitution] = []
    seen = set()
    for sub in _match_any(pat, subj, Substitution(), th):
        k = sub.key()
        if k not in seen:
            seen.add(k)
            results.append(sub)
    return results


def _match_any(pat, subj, sub, th):
    if isinstance(pat, LabelTerm):
        if isinstance(subj, LabelTerm):
            yield from _match_label(pat, subj, sub, th)
        return
    if isinstance(subj, Term):
        yield from _match_term(pat, subj, sub, th)


def _bind_term(sub: Substitution, name: str, value: Term):
    old = sub.terms.get(name)
    if old is not None:
        if render_term(old) == render_term(value):
            yield sub
        return
    nxt = sub.copy()
    nxt.terms[name] = value
    yield nxt


def _bind_label(sub: Substitution, var: LVar, value: LabelTerm):
    if not sort_accepts(var.sort, label_sort(value)):
        return
    old = sub.labels.get(var.name)
    if old is not None:
        if render_label(old) == render_label(value):
            yield sub
        return
    nxt = sub.copy()
    nxt.labels[var.name] = value
    yield nxt


def _match_term(pat: Term, subj: Term, sub: Substitution, th):
    if isinstance(pat, Var):
        yield from _bind_term(sub, pat.name, subj)
        return
    if isinstance(pat, Nil):
        if isinstance(subj, Nil):
            yield sub
        return
    if isinstance(pat, DefConst):
        if isinstance(subj, DefConst) and subj.name == pat.name:
            yield sub
        return
    if isinstance(pat, Prefix):
        if isinstance(subj, Prefix):
            for s1 in _match_label(pat.label, subj.label, sub, th):
                yield from _match_term(pat.body, subj.body, s1, th)
        return
    if isinstance(pat, Choice):
        pat_atoms = choice_atoms(pat)
        subj_atoms = [a for a in choice_atoms(subj) if not isinstance(a, Nil)]
        yield from _match_assignment(pat_atoms, subj_atoms, sub, th, _match_any)
        return
    if isinstance(pat, App):
        if isinstance(subj, App) and subj.op == pat.op and len(subj.args) == len(pat.args):
            yield from _match_seq(list(pat.args), list(subj.args), sub, th, _match_any)
        return
    raise TypeError(f"not a pattern: {pat!r}")


def _match_label(pat: LabelTerm, subj: LabelTerm, sub: Substitution, th):
    if isinstance(pat, LVar):
        yield from _bind_label(sub, pat, subj)
        return
    if isinstance(pat, (ActConst, PredConst, DataConst)):
        if render_label(pat) == render_label(subj):
            yield sub
        return
    if isinstance(pat, LApp):
        if not (isinstance(subj, LApp) and subj.op == pat.op and len(subj.args) == len(pat.args)):
            return
        if th.op_attrs(pat.op).comm:
            # commutative arguments pair up in any order
            yield from _match_assignment(list(pat.args), list(subj.args), sub, th, _match_label)
        else:
            yield from _match_seq(list(pat.args), list(subj.args), sub, th, _match_label)
        return
    if isinstance(pat, MSet):
        if isinstance(subj, MSet) and subj.sort == pat.sort:
            yield from _match_assignment(
                list(pat.elements), list(subj.elements), sub, th, _match_label
            )
        return
    if isinstance(pat, Triple):
        if isinstance(subj, Triple):
            for s1 in _match_label(pat.pre, subj.pre, sub, th):
                yield from _match_label(pat.post, subj.post, s1, th)
        return
    raise TypeError(f"not a label pattern: {pat!r}")


def _match_seq(pats, subjs, sub, th, matcher):
    if not pats:
        yield sub
        return
    for s1 in matcher(pats[0], subjs[0], sub, th):
        yield from _match_seq(pats[1:], subjs[1:], s1, th, matcher)


def _match_assignment(pats, subjs, sub, th, matcher):
    """Bijective element assignment between two multisets of parts."""
    if len(pats) != len(subjs):
        return
    if not pats:
        yield sub
        return
    pat, rest = pats[0], pats[1:]
    for i, cand in enumerate(subjs):
        for s1 in matcher(pat, cand, sub, th):
            yield from _match_assignment(rest, subjs[:i] + subjs[i + 1:], s1, th, matcher)
