"""Translations between marked and unmarked terms.

``encode_circ`` maps a marked term to an unmarked one that simulates its
reductions, in a context extended by a fresh outermost variable ``o : Prop``.
Because ``o`` sits at the outermost position, the de Bruijn indices of the
original variables are unchanged; ``o`` itself is ``Var(ctx_len + depth)``.

``star_translate`` maps a well-typed unmarked term to a normal marked term.
It follows the run of the syntax-directed checker, which plays the role of
the typing derivation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ErrorKind, TypingError
from .marked import (
    MAbs, MApp, MarkedContext, MarkedTerm, MProd, MVar, marked_convertible,
    marked_normalize, marked_whnf, msubst,
)
from .reduction import DEFAULT_FUEL, Fuel
from .terms import PROP, TYPE, Abs, App, Context, Prod, Sort, Term, Var, shift
from .typecheck import SystemSpec, infer, wf_context

__all__ = [
    "encode_circ", "encode_bar", "circ_context", "StarResult",
    "star_translate", "star_context", "lift_translate",
]


def _prop_telescope(P: MarkedTerm) -> tuple[list[tuple[str, MarkedTerm]], bool]:
    doms = []
    while isinstance(P, MProd):
        doms.append((P.hint, P.dom))
        P = P.cod
    return doms, P == PROP


def _circ(t: MarkedTerm, o: int) -> Term:
    # ``o`` is the current index of the fresh variable.
    if isinstance(t, Sort):
        return t
    if isinstance(t, MProd):
        return Prod(t.hint, _circ(t.dom, o), _circ(t.cod, o + 1))
    if isinstance(t, MVar):
        inner: Term = Var(t.index)
    elif isinstance(t, MApp):
        inner = App(_circ(t.fun, o), _circ(t.arg, o))
    elif isinstance(t, MAbs):
        inner = Abs(t.hint, _circ(t.dom, o), _circ(t.body, o + 1))
    else:
        raise TypeError(f"not a marked term: {t!r}")
    return App(Abs("z", PROP, shift(inner, 1)), _bar(t.mark, o))


def _bar(P: MarkedTerm, o: int) -> Term:
    doms, ends_in_prop = _prop_telescope(P)
    if not ends_in_prop:
        return _circ(P, o)
    encoded = [(h, _circ(A, o + i)) for i, (h, A) in enumerate(doms)]
    out: Term = Var(o + len(doms))
    for h, A in reversed(encoded):
        out = Prod(h, A, out)
    return out


def encode_circ(t: MarkedTerm, ctx_len: int = 0) -> Term:
    """The circle encoding of ``t``, for ``t`` scoped over ``ctx_len`` entries."""
    return _circ(t, ctx_len)


def encode_bar(t: MarkedTerm, ctx_len: int = 0) -> Term:
    """Like :func:`encode_circ`, but a product chain ending in ``Prop`` ends in ``o``."""
    return _bar(t, ctx_len)


def circ_context(ctx: MarkedContext) -> Context:
    entries = [("o", PROP)]
    entries += [(d.hint, encode_circ(d.type, i)) for i, d in enumerate(ctx.entries)]
    return Context.of(*entries)


@dataclass(frozen=True)
class StarResult:
    ctx: MarkedContext
    term: MarkedTerm
    type: MarkedTerm


class _Star:
    def __init__(self, normal: bool, fuel: Fuel) -> None:
        self.normal = normal
        self.fuel = fuel

    def nf(self, t: MarkedTerm) -> MarkedTerm:
        return marked_normalize(t, self.fuel) if self.normal else t

    def context(self, ctx: Context) -> MarkedContext:
        out = MarkedContext()
        for d in ctx.entries:
            out = out.extend(d.hint, self.term(out, d.type)[0])
        return out

    def term(self, mctx: MarkedContext, t: Term) -> tuple[MarkedTerm, MarkedTerm]:
        if isinstance(t, Sort):
            if t != PROP:
                raise TypingError(ErrorKind.TYPE_HAS_NO_TYPE)
            return PROP, TYPE
        if isinstance(t, Var):
            P = mctx.type_of(t.index)
            return MVar(t.index, P), P
        if isinstance(t, Prod):
            dom, _ = self.term(mctx, t.dom)
            cod, cod_ty = self.term(mctx.extend(t.hint, dom), t.cod)
            s = marked_whnf(cod_ty, self.fuel)
            if not isinstance(s, Sort):
                raise TypingError(ErrorKind.NOT_A_SORT, got=cod_ty)
            return MProd(t.hint, dom, cod), s
        if isinstance(t, Abs):
            dom, _ = self.term(mctx, t.dom)
            body, body_ty = self.term(mctx.extend(t.hint, dom), t.body)
            P = MProd(t.hint, dom, body_ty)
            return MAbs(t.hint, dom, body, P), P
        if isinstance(t, App):
            fun, fun_ty = self.term(mctx, t.fun)
            prod = marked_whnf(fun_ty, self.fuel)
            if not isinstance(prod, MProd):
                raise TypingError(ErrorKind.NOT_A_FUNCTION, got=fun_ty)
            arg, arg_ty = self.term(mctx, t.arg)
            if not marked_convertible(prod.dom, arg_ty, self.fuel):
                raise TypingError(ErrorKind.DOMAIN_MISMATCH, expected=prod.dom, got=arg_ty)
            V = msubst(prod.cod, 0, arg)
            return self.nf(MApp(fun, arg, V)), self.nf(V)
        raise TypeError(f"not a term: {t!r}")


def _translate(ctx: Context, t: Term, sys: SystemSpec, fuel: int, normal: bool) -> StarResult:
    wf_context(ctx, sys, fuel)
    infer(ctx, t, sys, fuel)
    star = _Star(normal, Fuel(fuel, "marked translation"))
    mctx = star.context(ctx)
    term, ty = star.term(mctx, t)
    return StarResult(mctx, term, ty)


def star_translate(ctx: Context, t: Term, sys: SystemSpec, fuel: int = DEFAULT_FUEL) -> StarResult:
    """Normal marked context, term and type whose contents are convertible
    to ``ctx``, ``t`` and the type of ``t``."""
    return _translate(ctx, t, sys, fuel, normal=True)


def star_context(ctx: Context, sys: SystemSpec, fuel: int = DEFAULT_FUEL) -> MarkedContext:
    wf_context(ctx, sys, fuel)
    return _Star(True, Fuel(fuel, "marked translation")).context(ctx)


def lift_translate(ctx: Context, t: Term, sys: SystemSpec, fuel: int = DEFAULT_FUEL) -> StarResult:
    """Same construction without normalizing: every mark is the structural
    type, so the contents of the result is exactly ``t`` and redexes of
    ``t`` survive as marked redexes."""
    return _translate(ctx, t, sys, fuel, normal=False)
