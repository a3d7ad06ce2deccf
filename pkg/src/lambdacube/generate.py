"""Seeded random generation of well-typed terms.

Generation is directed by the typing rules: to build a term of a given
type we pick a rule whose conclusion can have that type and generate its
premises.  Products only use the sort pairs of the target system, so the
output stays inside it.  Every produced case is re-checked before it is
returned; candidates that fail (a dependent argument that happened not
to match, say) are dropped and retried.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import CubeError
from .reduction import normalize, whnf
from .terms import (
    PROP, TYPE, Abs, App, Context, Prod, Sort, Term, Var, children,
    free_indices, shift, size, subst,
)
from .typecheck import ALL_SYSTEMS, SystemSpec, check, infer, wf_context

__all__ = ["Case", "TermGenerator", "gen_context", "normal_corpus", "redex_corpus", "mixed_cases", "positions", "replace_at"]

KIND_NAMES = ["A", "B", "C", "D", "E"]
FAMILY_NAMES = ["F", "G", "H", "K"]
VALUE_NAMES = ["a", "b", "c", "f", "g", "h", "k", "m", "n"]
BINDER_NAMES = ["x", "y", "z", "u", "v", "w"]
# depth may go below zero for arguments of neutral terms, but not far
MIN_DEPTH = -2


@dataclass(frozen=True)
class Case:
    ctx: Context
    term: Term
    type: Term
    system: SystemSpec


class TermGenerator:
    def __init__(self, sys: SystemSpec, rng: random.Random, max_depth: int = 3,
                 max_size: int = 40) -> None:
        self.sys = sys
        self.rng = rng
        self.max_depth = max_depth
        self.max_size = max_size

    # -- types and kinds -------------------------------------------------

    def of_sort(self, ctx: Context, s: Sort, depth: int) -> Optional[Term]:
        """A term whose type is the sort ``s``: a type if ``s`` is Prop, a kind if Type."""
        if depth < MIN_DEPTH:
            return PROP if s == TYPE else None
        options = ["atom"] * 3 + ["prod"] * depth
        if s == TYPE:
            options.append("prop")
        self.rng.shuffle(options)
        for choice in options:
            if choice == "prop":
                return PROP
            if choice == "atom":
                found = self.neutral(ctx, s, depth)
                if found is not None:
                    return found
            if choice == "prod":
                found = self.product(ctx, s, depth)
                if found is not None:
                    return found
        return PROP if s == TYPE else None

    def product(self, ctx: Context, s2: Sort, depth: int) -> Optional[Term]:
        firsts = [s1 for s1 in (PROP, TYPE) if (s1, s2) in self.sys]
        self.rng.shuffle(firsts)
        for s1 in firsts:
            dom = self.of_sort(ctx, s1, depth - 1)
            if dom is None:
                continue
            hint = self.binder_name(ctx, s1)
            cod = self.of_sort(ctx.extend(hint, dom), s2, depth - 1)
            if cod is None:
                continue
            return Prod(hint, dom, cod)
        return None

    # -- terms -------------------------------------------------------------

    def term_of(self, ctx: Context, goal: Term, depth: int) -> Optional[Term]:
        """A beta-normal term of type ``goal`` (``goal`` normal), or None."""
        if depth < MIN_DEPTH:
            return None
        if isinstance(goal, Sort):
            return self.of_sort(ctx, goal, depth)
        if isinstance(goal, Prod):
            if self.rng.random() < 0.75 or depth <= 0:
                body = self.term_of(ctx.extend(goal.hint, goal.dom), goal.cod, depth - 1)
                if body is not None:
                    hint = goal.hint if goal.hint != "_" else self.binder_name(ctx, _domain_sort(goal.dom))
                    return Abs(hint, goal.dom, body)
            return self.neutral(ctx, goal, depth)
        return self.neutral(ctx, goal, depth)

    def neutral(self, ctx: Context, goal: Term, depth: int) -> Optional[Term]:
        """A variable applied to arguments, whose type is ``goal``."""
        goal_arity = _arity(goal)
        heads = list(range(len(ctx)))
        self.rng.shuffle(heads)
        for i in heads:
            ty = normalize(ctx.type_of(i))
            n = _arity(ty)
            ks = list(range(n + 1))
            self.rng.shuffle(ks)
            # the argument count that leaves the right number of products first
            if 0 <= n - goal_arity <= n:
                ks.remove(n - goal_arity)
                ks.insert(0, n - goal_arity)
            for k in ks[:2]:
                found = self.spine_of(ctx, Var(i), ty, k, goal, depth)
                if found is not None:
                    return found
        return None

    def spine_of(self, ctx: Context, head: Term, ty: Term, k: int, goal: Term,
                 depth: int) -> Optional[Term]:
        t = head
        for _ in range(k):
            ty = whnf(ty)
            if not isinstance(ty, Prod):
                return None
            arg = self.term_of(ctx, normalize(ty.dom), depth - 1)
            if arg is None:
                return None
            t = App(t, arg)
            ty = subst(ty.cod, 0, arg)
        if normalize(ty) != goal:
            return None
        return t

    def binder_name(self, ctx: Context, s: Optional[Sort]) -> str:
        pool = KIND_NAMES if s == TYPE else BINDER_NAMES
        used = set(ctx.names())
        for name in pool:
            if name not in used:
                return name
        return f"{pool[0]}{len(ctx)}"

    # -- contexts ----------------------------------------------------------------

    def context(self, n_kinds: int = 2, n_values: int = 3) -> Context:
        ctx = Context()
        used: set[str] = set()

        def fresh(pool: list[str]) -> str:
            for name in pool:
                if name not in used:
                    used.add(name)
                    return name
            name = f"{pool[0]}{len(used)}"
            used.add(name)
            return name

        for _ in range(n_kinds):
            kind: Term = PROP
            if self.rng.random() < 0.4:
                candidate = self.of_sort(ctx, TYPE, 1)
                if candidate is not None:
                    kind = candidate
            ctx = ctx.extend(fresh(KIND_NAMES if kind == PROP else FAMILY_NAMES), kind)
        for _ in range(n_values):
            ty = self.of_sort(ctx, PROP, 2)
            if ty is None:
                continue
            ctx = ctx.extend(fresh(VALUE_NAMES), ty)
        return ctx


def _domain_sort(dom: Term) -> Sort:
    """Sort of a normal domain: kinds are products ending in Prop."""
    while isinstance(dom, Prod):
        dom = dom.cod
    return TYPE if dom == PROP else PROP


def _arity(T: Term) -> int:
    n = 0
    while isinstance(T, Prod):
        n += 1
        T = T.cod
    return n


def gen_context(sys: SystemSpec, rng: random.Random) -> Context:
    gen = TermGenerator(sys, rng)
    while True:
        ctx = gen.context(rng.randint(1, 3), rng.randint(1, 4))
        try:
            wf_context(ctx, sys)
        except CubeError:
            continue
        return ctx


def _one_normal(gen: TermGenerator, ctx: Context) -> Optional[Case]:
    rng = gen.rng
    roll = rng.random()
    if roll < 0.15:
        goal: Term = TYPE
    elif roll < 0.35:
        goal = PROP
    else:
        goal = gen.of_sort(ctx, PROP, 2)
        if goal is None:
            return None
        goal = normalize(goal)
    t = gen.term_of(ctx, goal, gen.max_depth)
    if t is None:
        return None
    t = normalize(t)
    if size(t) > gen.max_size:
        return None
    try:
        check(ctx, t, goal, gen.sys)
        ty = infer(ctx, t, gen.sys)
    except CubeError:
        return None
    return Case(ctx, t, ty, gen.sys)


def normal_cases(sys: SystemSpec, seed: int, count: int) -> list[Case]:
    """``count`` distinct beta-eta normal well-typed cases in ``sys``."""
    rng = random.Random(f"{seed}:{sys.rule_code()}")
    gen = TermGenerator(sys, rng)
    out: list[Case] = []
    seen: set[tuple[Context, Term]] = set()
    attempts = 0
    ctx = gen_context(sys, rng)
    while len(out) < count and attempts < count * 200:
        attempts += 1
        if attempts % 6 == 0:
            ctx = gen_context(sys, rng)
        case = _one_normal(gen, ctx)
        if case is None or (case.ctx, case.term) in seen:
            continue
        seen.add((case.ctx, case.term))
        out.append(case)
    return out


def normal_corpus(seed: int = 0, per_system: int = 70,
                  systems: tuple[SystemSpec, ...] = ALL_SYSTEMS) -> list[Case]:
    out: list[Case] = []
    for sys in systems:
        out.extend(normal_cases(sys, seed, per_system))
    return out


# -- redex injection -------------------------------------------------------------

def positions(t: Term, ctx: Context, path: tuple[int, ...] = ()
              ) -> Iterator[tuple[tuple[int, ...], Context, Term]]:
    """Every subterm with its path and local context, in pre-order."""
    yield path, ctx, t
    for i, (child, cctx) in enumerate(children(t, ctx)):
        yield from positions(child, cctx, path + (i,))


def replace_at(t: Term, path: tuple[int, ...], new: Term) -> Term:
    if not path:
        return new
    i, rest = path[0], path[1:]
    if isinstance(t, App):
        return App(replace_at(t.fun, rest, new), t.arg) if i == 0 else App(t.fun, replace_at(t.arg, rest, new))
    if isinstance(t, Abs):
        return Abs(t.hint, replace_at(t.dom, rest, new), t.body) if i == 0 else Abs(t.hint, t.dom, replace_at(t.body, rest, new))
    if isinstance(t, Prod):
        return Prod(t.hint, replace_at(t.dom, rest, new), t.cod) if i == 0 else Prod(t.hint, t.dom, replace_at(t.cod, rest, new))
    raise IndexError(path)


def _abstract(s: Term, index: int) -> Term:
    """Turn free occurrences of ``Var(index)`` in ``s`` into a new innermost binder."""
    lifted = shift(s, 1)

    def go(t: Term, c: int) -> Term:
        if isinstance(t, Var):
            return Var(c) if t.index == index + 1 + c else t
        if isinstance(t, App):
            return App(go(t.fun, c), go(t.arg, c))
        if isinstance(t, Abs):
            return Abs(t.hint, go(t.dom, c), go(t.body, c + 1))
        if isinstance(t, Prod):
            return Prod(t.hint, go(t.dom, c), go(t.cod, c + 1))
        return t

    return go(lifted, 0)


def expansions(ctx: Context, s: Term, sys: SystemSpec, rng: random.Random) -> list[Term]:
    """Candidate terms that reduce in one step to ``s`` (not yet checked)."""
    out = []
    try:
        ty = infer(ctx, s, sys)
    except CubeError:
        return out
    frees = sorted(free_indices(s))
    if frees:
        i = rng.choice(frees)
        out.append(App(Abs("z", ctx.type_of(i), _abstract(s, i)), Var(i)))
    out.append(App(Abs("z", ty, Var(0)), s))
    w = whnf(ty)
    if isinstance(w, Prod):
        out.append(Abs(w.hint if w.hint != "_" else "z", w.dom, App(shift(s, 1), Var(0))))
    return out


def inject_redexes(case: Case, rng: random.Random, count: int = 2) -> Optional[Case]:
    t = case.term
    done = 0
    for _ in range(count * 4):
        if done >= count:
            break
        spots = [(p, c, s) for p, c, s in positions(t, case.ctx) if not isinstance(s, Sort)]
        if not spots:
            break
        path, lctx, s = rng.choice(spots)
        for new in expansions(lctx, s, case.system, rng):
            candidate = replace_at(t, path, new)
            try:
                check(case.ctx, candidate, case.type, case.system)
            except CubeError:
                continue
            t = candidate
            done += 1
            break
    if done == 0:
        return None
    return Case(case.ctx, t, case.type, case.system)


def redex_corpus(seed: int = 0, per_system: int = 30,
                 systems: tuple[SystemSpec, ...] = ALL_SYSTEMS) -> list[Case]:
    out = []
    for sys in systems:
        rng = random.Random(f"redex:{seed}:{sys.rule_code()}")
        for case in normal_cases(sys, seed, per_system * 2):
            if len([c for c in out if c.system == sys]) >= per_system:
                break
            if isinstance(case.term, Sort):
                continue
            injected = inject_redexes(case, rng, rng.randint(1, 2))
            if injected is not None:
                out.append(injected)
    return out


def mixed_cases(sys: SystemSpec, seed: int, count: int) -> list[Case]:
    """``count`` cases in ``sys``: normal terms, about half with injected redexes."""
    rng = random.Random(f"mixed:{seed}:{sys.rule_code()}")
    out = []
    for case in normal_cases(sys, seed, count):
        if not isinstance(case.term, Sort) and rng.random() < 0.5:
            case = inject_redexes(case, rng, rng.randint(1, 3)) or case
        out.append(case)
    return out
