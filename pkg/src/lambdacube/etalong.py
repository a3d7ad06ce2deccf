"""Measures, the term orders < and <', and eta-long forms.

The measure of an unmarked term adds the measure of its normal type at
variables, applications and abstractions; its definition (and that of the
eta-long form) is by well-founded recursion on <, so every function here
is fuel-guarded even though the recursion always terminates on
well-typed input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import PreconditionError
from .marked import (
    MAbs, MApp, MarkedContext, MarkedTerm, MProd, MVar, marked_infer,
    marked_normalize, mshift, mspine, split_marked_telescope, is_marked_normal,
)
from .reduction import (
    DEFAULT_FUEL, Fuel, is_beta_normal, normalize, split_telescope,
)
from .terms import (
    Abs, App, Context, LabeledTerm, Prod, Sort, Term, Var, apply, is_sort,
    shift, spine, strict_subterms,
)
from .translate import star_translate
from .typecheck import SystemSpec, infer

__all__ = [
    "measure_marked", "measure_unmarked", "Measurer", "normal_type",
    "predecessors", "predecessors_prime", "descend", "Descent",
    "eta_long", "eta_long_marked", "plus_translate",
]

EXPANSION_HINT = "y"


def measure_marked(t: MarkedTerm) -> int:
    if isinstance(t, Sort):
        return 1
    if isinstance(t, MVar):
        return measure_marked(t.mark) + 1
    if isinstance(t, MApp):
        return measure_marked(t.fun) + measure_marked(t.arg) + measure_marked(t.mark)
    if isinstance(t, MAbs):
        return measure_marked(t.dom) + measure_marked(t.body) + measure_marked(t.mark)
    if isinstance(t, MProd):
        return measure_marked(t.dom) + measure_marked(t.cod)
    raise TypeError(f"not a marked term: {t!r}")


def normal_type(ctx: Context, t: Term, sys: SystemSpec, fuel: int | Fuel = DEFAULT_FUEL) -> Term:
    return normalize(infer(ctx, t, sys, fuel), fuel)


class Measurer:
    """Memoized measure of labeled terms for one system.

    The memo table is per instance; create one per call site.
    """

    def __init__(self, sys: SystemSpec, fuel: int = DEFAULT_FUEL) -> None:
        self.sys = sys
        self.fuel = Fuel(fuel, "measure")
        self.memo: dict[LabeledTerm, int] = {}

    def __call__(self, ctx: Context, t: Term) -> int:
        key = LabeledTerm(ctx, t)
        if key in self.memo:
            return self.memo[key]
        self.fuel.tick()
        if isinstance(t, Sort):
            value = 1
        elif isinstance(t, Var):
            value = self(ctx, self.type_of(ctx, t)) + 1
        elif isinstance(t, App):
            value = self(ctx, t.fun) + self(ctx, t.arg) + self(ctx, self.type_of(ctx, t))
        elif isinstance(t, Abs):
            value = (self(ctx, t.dom) + self(ctx.extend(t.hint, t.dom), t.body)
                     + self(ctx, self.type_of(ctx, t)))
        elif isinstance(t, Prod):
            value = self(ctx, t.dom) + self(ctx.extend(t.hint, t.dom), t.cod)
        else:
            raise TypeError(f"not a term: {t!r}")
        self.memo[key] = value
        return value

    def type_of(self, ctx: Context, t: Term) -> Term:
        return normal_type(ctx, t, self.sys)


def measure_unmarked(ctx: Context, t: Term, sys: SystemSpec, fuel: int = DEFAULT_FUEL) -> int:
    if not is_beta_normal(t):
        raise PreconditionError("the measure is only defined on normal terms")
    return Measurer(sys, fuel)(ctx, t)


# -- the orders ----------------------------------------------------------------

def _generators(lt: LabeledTerm, sys: SystemSpec, type_view: Callable[[Context, Term], Term]
                ) -> tuple[LabeledTerm, ...]:
    if is_sort(lt.term):
        return ()
    out = {s: None for s in strict_subterms(lt) if not is_sort(s.term)}
    T = type_view(lt.ctx, normal_type(lt.ctx, lt.term, sys))
    if not is_sort(T):
        out.setdefault(LabeledTerm(lt.ctx, T))
    return tuple(out)


def predecessors(lt: LabeledTerm, sys: SystemSpec) -> tuple[LabeledTerm, ...]:
    """Immediate generators of ``<`` below ``lt``: its non-sort strict
    subterms and, unless it is a sort, the normal form of its type."""
    return _generators(lt, sys, lambda ctx, T: T)


def predecessors_prime(lt: LabeledTerm, sys: SystemSpec) -> tuple[LabeledTerm, ...]:
    """As :func:`predecessors`, with the eta-long form of the normal type."""
    return _generators(lt, sys, lambda ctx, T: eta_long(ctx, T, sys))


@dataclass
class Descent:
    root: LabeledTerm
    downset: tuple[LabeledTerm, ...]
    depth: int
    edges: list[tuple[LabeledTerm, LabeledTerm]] = field(repr=False)


def descend(lt: LabeledTerm, sys: SystemSpec, prime: bool = False,
            fuel: int = DEFAULT_FUEL) -> Descent:
    """Everything below ``lt`` in the transitive order, and the length of
    the longest descending chain from ``lt``."""
    gen = predecessors_prime if prime else predecessors
    budget = Fuel(fuel, "descent")
    preds: dict[LabeledTerm, tuple[LabeledTerm, ...]] = {}
    work = [lt]
    while work:
        node = work.pop()
        if node in preds:
            continue
        budget.tick()
        preds[node] = gen(node, sys)
        work.extend(p for p in preds[node] if p not in preds)

    depth: dict[LabeledTerm, int] = {}
    # preds is acyclic when the order is well founded; the fuel above would
    # have tripped on an infinite chain, but a cycle must still be caught.
    active: set[LabeledTerm] = set()

    def longest(node: LabeledTerm) -> int:
        if node in depth:
            return depth[node]
        if node in active:
            raise PreconditionError("cycle in the order: not well founded")
        active.add(node)
        depth[node] = max((1 + longest(p) for p in preds[node]), default=0)
        active.discard(node)
        return depth[node]

    d = longest(lt)
    downset = tuple(n for n in preds if n != lt)
    edges = [(a, b) for a, bs in preds.items() for b in bs]
    return Descent(lt, downset, d, edges)


# -- eta-long forms --------------------------------------------------------

def _binder_name(hint: str) -> str:
    return EXPANSION_HINT if hint in ("_", "") else hint


def eta_long(ctx: Context, t: Term, sys: SystemSpec, fuel: int = DEFAULT_FUEL,
             certificates: Optional[list[tuple[int, int]]] = None) -> Term:
    """Eta-long form of a beta-normal well-typed term.

    When ``certificates`` is a list, every expansion of a bound variable
    appends ``(measure of the variable, measure of the expanded term)``;
    the first must always be the smaller.
    """
    if not is_beta_normal(t):
        raise PreconditionError("eta-long forms are only defined on normal terms")
    budget = Fuel(fuel, "eta-long expansion")
    measure = Measurer(sys, fuel) if certificates is not None else None

    def go(ctx: Context, t: Term) -> Term:
        budget.tick()
        if isinstance(t, Sort):
            return t
        if isinstance(t, Abs):
            return Abs(t.hint, go(ctx, t.dom), go(ctx.extend(t.hint, t.dom), t.body))
        if isinstance(t, Prod):
            return Prod(t.hint, go(ctx, t.dom), go(ctx.extend(t.hint, t.dom), t.cod))
        head, args = spine(t)
        if not isinstance(head, Var):
            raise PreconditionError(f"not a normal term: {t!r}")
        tel = split_telescope(normal_type(ctx, t, sys))
        n = len(tel)
        ctxs = [ctx]
        for hint, P in tel.doms:
            ctxs.append(ctxs[-1].extend(hint, P))
        doms = [go(ctxs[i], P) for i, (_, P) in enumerate(tel.doms)]
        expanded = []
        for i in range(1, n + 1):
            if measure is not None:
                certificates.append((measure(ctxs[i], Var(0)), measure(ctx, t)))
                if certificates[-1][0] >= certificates[-1][1]:
                    raise AssertionError(f"termination certificate violated at {t!r}")
            expanded.append(shift(go(ctxs[i], Var(0)), n - i))
        body = apply(shift(head, n), *(shift(go(ctx, c), n) for c in args), *expanded)
        for (hint, _), dom in zip(reversed(tel.doms), reversed(doms)):
            body = Abs(_binder_name(hint), dom, body)
        return body

    return go(ctx, t)


def eta_long_marked(ctx: MarkedContext, t: MarkedTerm, sys: SystemSpec,
                    fuel: int = DEFAULT_FUEL) -> MarkedTerm:
    """Eta-long form of a normal well-typed marked term.

    The appended variables and the wrapping abstractions are marked with the
    eta-long telescope that remains after that point.
    """
    if not is_marked_normal(t):
        raise PreconditionError("marked eta-long forms are only defined on normal terms")
    budget = Fuel(fuel, "marked eta-long expansion")

    def go(ctx: MarkedContext, t: MarkedTerm) -> MarkedTerm:
        budget.tick()
        if isinstance(t, Sort):
            return t
        if isinstance(t, MAbs):
            return MAbs(t.hint, go(ctx, t.dom), go(ctx.extend(t.hint, t.dom), t.body), go(ctx, t.mark))
        if isinstance(t, MProd):
            return MProd(t.hint, go(ctx, t.dom), go(ctx.extend(t.hint, t.dom), t.cod))
        head, args = mspine(t)
        if not isinstance(head, MVar):
            raise PreconditionError(f"not a normal marked term: {t!r}")
        T = marked_normalize(marked_infer(ctx, t, sys, fuel), fuel)
        tel, final = split_marked_telescope(T)
        n = len(tel)
        ctxs = [ctx]
        for hint, P in tel:
            ctxs.append(ctxs[-1].extend(hint, P))
        doms = [go(ctxs[i], P) for i, (_, P) in enumerate(tel)]
        tails = [go(ctxs[n], final)]
        for i in range(n - 1, -1, -1):
            tails.insert(0, MProd(_binder_name(tel[i][0]), doms[i], tails[0]))
        body: MarkedTerm = MVar(head.index, go(ctx, head.mark))
        for c, mark in args:
            body = MApp(body, go(ctx, c), go(ctx, mark))
        body = mshift(body, n)
        for i in range(1, n + 1):
            x = mshift(go(ctxs[i], MVar(0, mshift(tel[i - 1][1], 1))), n - i)
            body = MApp(body, x, mshift(tails[i], n - i))
        for i in range(n, 0, -1):
            body = MAbs(_binder_name(tel[i - 1][0]), doms[i - 1], body, tails[i - 1])
        return body

    return go(ctx, t)


def plus_translate(ctx: Context, t: Term, sys: SystemSpec, fuel: int = DEFAULT_FUEL) -> MarkedTerm:
    """Eta-long form of the marked translation of ``t``."""
    star = star_translate(ctx, t, sys, fuel)
    return eta_long_marked(star.ctx, star.term, sys, fuel)
