"""Executable metatheory: the kernel's propositions as checks on cases.

Each property takes a :class:`~lambdacube.generate.Case` and returns None
when it holds, or a short description of what went wrong.  The runner
applies a selection of properties to a list of cases, shrinks every
counterexample to a smallest failing subterm and renders a report whose
text depends only on its input, so equal seeds give equal bytes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .errors import CubeError
from .generate import Case
from .marked import (
    MAbs, MApp, MarkedTerm, contents, contents_context, marked_convertible,
    marked_infer, marked_normalize, marked_reducts, marked_subterms, mfree_indices,
    msubst, is_marked_normal,
)
from .reduction import (
    ReductionKind, contract, convertible, is_beta_redex, is_eta_redex, is_normal,
    normalize, reducts, step,
)
from .surface import parse_term, print_context, print_term
from .terms import (
    Abs, App, LabeledTerm, Prod, Sort, Term, Var, free_indices, shift, size,
    strict_subterms, subst,
)
from .translate import circ_context, encode_circ, lift_translate, star_translate
from .typecheck import CC, check, infer, wf_context

__all__ = [
    "PROPERTIES", "ENCODING_PROPERTIES", "Failure", "Report", "run_properties",
    "reaches", "shrink",
]

MAX_SEQUENCE = 200
MAX_REDUCTS = 12
SIMULATION_BUDGET = 500

Property = Callable[[Case], Optional[str]]
PROPERTIES: dict[str, Property] = {}
ENCODING_PROPERTIES: dict[str, Property] = {}


def _register(table: dict[str, Property], name: str) -> Callable[[Property], Property]:
    def deco(fn: Property) -> Property:
        table[name] = fn
        return fn
    return deco


def prop(name: str) -> Callable[[Property], Property]:
    return _register(PROPERTIES, name)


def encoding_prop(name: str) -> Callable[[Property], Property]:
    return _register(ENCODING_PROPERTIES, name)


def _show(c: Case, t: Term | None = None) -> str:
    return print_term(c.term if t is None else t, c.ctx)


# -- unmarked metatheory ------------------------------------------------------

def _rightmost(t: Term) -> Optional[Term]:
    last = None
    for _, _, u in reducts(t):
        last = u
    return last


@prop("subject-reduction")
def subject_reduction(c: Case) -> Optional[str]:
    for name, next_ in (("leftmost", lambda t: (step(t) or (None,))[0]), ("rightmost", _rightmost)):
        t = c.term
        for _ in range(MAX_SEQUENCE):
            t = next_(t)
            if t is None:
                break
            try:
                check(c.ctx, t, c.type, c.system)
            except CubeError as err:
                return f"{name} reduct {_show(c, t)} lost the type: {err}"
    return None


@prop("type-uniqueness")
def type_uniqueness(c: Case) -> Optional[str]:
    direct = infer(c.ctx, c.term, c.system)
    via_marks = contents(star_translate(c.ctx, c.term, c.system).type)
    if not convertible(direct, via_marks):
        return f"types {print_term(direct, c.ctx)} and {print_term(via_marks, c.ctx)} differ"
    return None


@prop("confluence")
def confluence(c: Case) -> Optional[str]:
    target = normalize(c.term)
    for path, kind, u in itertools.islice(reducts(c.term), MAX_REDUCTS):
        if normalize(u) != target:
            return f"{kind.value}-reduct at {path} normalizes elsewhere"
    return None


@prop("print-parse")
def print_parse(c: Case) -> Optional[str]:
    text = print_term(c.term, c.ctx)
    back = parse_term(text, c.ctx)
    return None if back == c.term else f"{text!r} parses back differently"


# -- marked metatheory --------------------------------------------------------

@prop("marked-subject-reduction")
def marked_subject_reduction(c: Case) -> Optional[str]:
    lift = lift_translate(c.ctx, c.term, c.system)
    for path, kind, u in itertools.islice(marked_reducts(lift.term), MAX_REDUCTS):
        try:
            ty = marked_infer(lift.ctx, u, c.system)
        except CubeError as err:
            return f"marked {kind.value}-step at {path} is ill-typed: {err}"
        if not marked_convertible(ty, lift.type):
            return f"marked {kind.value}-step at {path} changed the type"
    return None


@prop("contents-morphism")
def contents_morphism(c: Case) -> Optional[str]:
    lift = lift_translate(c.ctx, c.term, c.system)
    before = contents(lift.term)
    one_step = {u for _, _, u in reducts(before)}
    for path, kind, u in itertools.islice(marked_reducts(lift.term), MAX_REDUCTS):
        after = contents(u)
        if after != before and after not in one_step:
            return f"marked {kind.value}-step at {path} is not mirrored by its contents"
    return None


@prop("beta-lifting")
def beta_lifting(c: Case) -> Optional[str]:
    lift = lift_translate(c.ctx, c.term, c.system)
    lifted = {contents(u) for _, _, u in marked_reducts(lift.term, ReductionKind.BETA)}
    for path, _, v in reducts(contents(lift.term), ReductionKind.BETA):
        if v not in lifted:
            return f"beta-step at {path} has no marked counterpart"
    return None


@prop("toto")
def toto(c: Case) -> Optional[str]:
    star = star_translate(c.ctx, c.term, c.system)
    lift = lift_translate(c.ctx, c.term, c.system)
    a, b = star.term, marked_normalize(lift.term)
    if contents(a) != contents(b):
        return "normal marked terms have different contents"
    if a != b:
        return "normal marked terms with equal contents differ"
    for i, (x, y) in enumerate(zip(star.ctx.entries, lift.ctx.entries)):
        if x.type != marked_normalize(y.type):
            return f"context entry {i} is not the normal form of its lift"
    return None


@prop("tyty")
def tyty(c: Case) -> Optional[str]:
    star = star_translate(c.ctx, c.term, c.system)
    if not is_marked_normal(star.term):
        return "marked translation is not normal"
    if not is_normal(contents(star.term)):
        return "contents of a normal marked term is not normal"
    if contents(star.term) != normalize(c.term):
        return "contents of the marked translation is not the normal form"
    return None


@prop("marked-soundness")
def marked_soundness(c: Case) -> Optional[str]:
    lift = lift_translate(c.ctx, c.term, c.system)
    T = marked_infer(lift.ctx, lift.term, c.system)
    try:
        got = infer(contents_context(lift.ctx), contents(lift.term), c.system)
    except CubeError as err:
        return f"contents ill-typed: {err}"
    if not convertible(got, contents(T)):
        return "contents typed differently from the marks"
    return None


# -- the circle encoding ---------------------------------------------------

def _parts(t: Term) -> tuple[Term, ...]:
    if isinstance(t, App):
        return (t.fun, t.arg)
    if isinstance(t, Abs):
        return (t.dom, t.body)
    if isinstance(t, Prod):
        return (t.dom, t.cod)
    return ()


def _head_contract(t: Term) -> Optional[Term]:
    """Contract the head redex, looking through abstractions and function positions."""
    if is_beta_redex(t) or is_eta_redex(t):
        return contract(t)
    if isinstance(t, App):
        f = _head_contract(t.fun)
        return None if f is None else App(f, t.arg)
    if isinstance(t, Abs):
        b = _head_contract(t.body)
        return None if b is None else Abs(t.hint, t.dom, b)
    return None


class _Search:
    def __init__(self, budget: int) -> None:
        self.left = budget
        self.memo: dict[tuple[Term, Term], bool] = {}

    def solve(self, s: Term, d: Term) -> bool:
        """Whether ``s`` reduces to ``d`` in zero or more steps."""
        if s == d:
            return True
        key = (s, d)
        if key in self.memo:
            return self.memo[key]
        self.memo[key] = False
        ok = False
        # congruence: reduce the parts separately
        if type(s) is type(d) and _parts(s):
            ok = all(self.solve(x, y) for x, y in zip(_parts(s), _parts(d)))
        # an eta-contraction at the root, once the body has the right shape
        if not ok and isinstance(s, Abs) and self.left > 0:
            ok = self.solve(s.body, App(shift(d, 1), Var(0)))
            self.left -= ok
        # otherwise the head redex has to go first
        if not ok and self.left > 0:
            h = _head_contract(s)
            if h is not None:
                self.left -= 1
                ok = self.solve(h, d)
        self.memo[key] = ok
        return ok


def reaches(src: Term, dst: Term, budget: int = SIMULATION_BUDGET) -> bool:
    """Whether ``src`` reduces to ``dst`` in one or more steps.

    Backtracking search in standard order: first try to reach ``dst`` by
    reducing inside matching constructors, then by a root eta-step, and
    only then contract the head redex.  Every move is a genuine one-step
    reduction; at most ``budget`` contractions are spent, counting those on
    abandoned branches.
    """
    if src == dst:
        return False
    return _Search(budget).solve(src, dst)


def _redexes_with_depth(t: MarkedTerm) -> Iterable[tuple[int, MApp]]:
    if isinstance(t, MApp) and isinstance(t.fun, MAbs):
        yield 0, t
    for d, sub in marked_subterms(t):
        if isinstance(sub, MApp) and isinstance(sub.fun, MAbs):
            yield d, sub


@encoding_prop("encoding-free-variables")
def encoding_free_variables(c: Case) -> Optional[str]:
    lift = lift_translate(c.ctx, c.term, c.system)
    n = len(lift.ctx)
    allowed = mfree_indices(lift.term) | {n}
    extra = free_indices(encode_circ(lift.term, n)) - allowed
    return f"unexpected free indices {sorted(extra)}" if extra else None


@encoding_prop("encoding-substitution")
def encoding_substitution(c: Case) -> Optional[str]:
    lift = lift_translate(c.ctx, c.term, c.system)
    n = len(lift.ctx)
    for d, redex in _redexes_with_depth(lift.term):
        body, arg = redex.fun.body, redex.arg
        left = subst(encode_circ(body, n + d + 1), 0, encode_circ(arg, n + d))
        right = encode_circ(msubst(body, 0, arg), n + d)
        if normalize(left) != normalize(right):
            return f"substitution does not commute with the encoding at depth {d}"
    return None


@encoding_prop("encoding-simulation")
def encoding_simulation(c: Case) -> Optional[str]:
    lift = lift_translate(c.ctx, c.term, c.system)
    n = len(lift.ctx)
    a = encode_circ(lift.term, n)
    for path, kind, b in itertools.islice(marked_reducts(lift.term), MAX_REDUCTS):
        if not reaches(a, encode_circ(b, n)):
            return f"marked {kind.value}-step at {path} not simulated within {SIMULATION_BUDGET} expansions"
    return None


@encoding_prop("encoding-typing")
def encoding_typing(c: Case) -> Optional[str]:
    lift = lift_translate(c.ctx, c.term, c.system)
    n = len(lift.ctx)
    ctx = circ_context(lift.ctx)
    try:
        wf_context(ctx, CC)
        check(ctx, encode_circ(lift.term, n), encode_circ(lift.type, n), CC)
    except CubeError as err:
        return f"encoded judgement fails in cc: {err}"
    return None


# -- runner -------------------------------------------------------------------

@dataclass(frozen=True)
class Failure:
    prop: str
    index: int
    case: Case
    shrunk: Case
    detail: str


@dataclass
class Report:
    counts: dict[str, int] = field(default_factory=dict)
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def render(self) -> str:
        lines = []
        for name, n in self.counts.items():
            bad = sum(1 for f in self.failures if f.prop == name)
            lines.append(f"{name:<28} {n - bad:>5}/{n:<5} {'ok' if bad == 0 else 'FAILED'}")
        for f in self.failures:
            lines.append(f"FAIL {f.prop} case {f.index} [{f.case.system.label}]: {f.detail}")
            lines.append(f"  context: {_context_text(f.shrunk)}")
            lines.append(f"  term:    {_show(f.shrunk)}")
        lines.append(f"{len(self.failures)} failure(s)")
        return "\n".join(lines) + "\n"


def _context_text(c: Case) -> str:
    return print_context(c.ctx) or "(empty)"


def _evaluate(p: Property, c: Case) -> Optional[str]:
    try:
        return p(c)
    except CubeError as err:
        return f"{type(err).__name__}: {err}"
    except RecursionError:
        return "recursion limit"


def shrink(p: Property, c: Case) -> Case:
    """Walk down to a smallest strict subterm that still fails ``p``."""
    while True:
        subs = sorted(strict_subterms(LabeledTerm(c.ctx, c.term)), key=lambda lt: size(lt.term))
        for lt in subs:
            if isinstance(lt.term, Sort):
                continue
            try:
                ty = infer(lt.ctx, lt.term, c.system)
            except CubeError:
                continue
            candidate = Case(lt.ctx, lt.term, ty, c.system)
            if _evaluate(p, candidate) is not None:
                c = candidate
                break
        else:
            return c


def run_properties(cases: list[Case], table: Optional[dict[str, Property]] = None,
                   names: Optional[Iterable[str]] = None) -> Report:
    table = PROPERTIES if table is None else table
    selected = list(table) if names is None else list(names)
    report = Report()
    for name in selected:
        p = table[name]
        report.counts[name] = len(cases)
        for i, c in enumerate(cases):
            detail = _evaluate(p, c)
            if detail is not None:
                report.failures.append(Failure(name, i, c, shrink(p, c), detail))
    return report
