"""Marked terms: every variable, application and abstraction carries its type.

Sorts and products stay unmarked.  Free variables may occur in marks, so
shifting, substitution and reduction all traverse them.  Conversion
between marked terms ignores marks entirely and compares contents.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .errors import ErrorKind, NotAType, ShiftUnderflow, TypingError
from .reduction import DEFAULT_FUEL, Fuel, ReductionKind, _fuel, convertible
from .terms import PROP, TYPE, Abs, App, Context, Prod, Sort, Term, Var
from .typecheck import SystemSpec

__all__ = [
    "MVar", "MApp", "MAbs", "MProd", "MarkedTerm", "MDecl", "MarkedContext",
    "mshift", "msubst", "moccurs_free", "mfree_indices", "msize", "mark_of",
    "contents", "contents_context", "marked_convertible",
    "marked_step", "marked_reducts", "marked_whnf", "marked_normalize",
    "marked_beta_normalize", "is_marked_normal", "marked_infer", "marked_check",
    "marked_wf_context", "marked_subterms", "mspine", "split_marked_telescope",
]


@dataclass(frozen=True, slots=True)
class MVar:
    index: int
    mark: MarkedTerm


@dataclass(frozen=True, slots=True)
class MApp:
    fun: MarkedTerm
    arg: MarkedTerm
    mark: MarkedTerm


@dataclass(frozen=True, slots=True)
class MAbs:
    hint: str = field(compare=False)
    dom: MarkedTerm
    body: MarkedTerm
    mark: MarkedTerm


@dataclass(frozen=True, slots=True)
class MProd:
    hint: str = field(compare=False)
    dom: MarkedTerm
    cod: MarkedTerm


MarkedTerm = Union[Sort, MVar, MApp, MAbs, MProd]


@dataclass(frozen=True, slots=True)
class MDecl:
    hint: str = field(compare=False)
    type: MarkedTerm


@dataclass(frozen=True, slots=True)
class MarkedContext:
    entries: tuple[MDecl, ...] = ()

    @classmethod
    def of(cls, *pairs: tuple[str, MarkedTerm]) -> MarkedContext:
        return cls(tuple(MDecl(h, t) for h, t in pairs))

    def __len__(self) -> int:
        return len(self.entries)

    def extend(self, hint: str, type_: MarkedTerm) -> MarkedContext:
        return MarkedContext(self.entries + (MDecl(hint, type_),))

    def type_of(self, index: int) -> MarkedTerm:
        decl = self.entries[len(self.entries) - 1 - index]
        return mshift(decl.type, index + 1)

    def names(self) -> list[str]:
        return [d.hint for d in self.entries]

    def prefix(self, n: int) -> MarkedContext:
        return MarkedContext(self.entries[:n])


# -- structural helpers ---------------------------------------------------

def _kids(t: MarkedTerm) -> tuple[tuple[MarkedTerm, int], ...]:
    """Children with the number of binders crossed to reach them.

    Term positions come before the mark, left to right.
    """
    if isinstance(t, MVar):
        return ((t.mark, 0),)
    if isinstance(t, MApp):
        return ((t.fun, 0), (t.arg, 0), (t.mark, 0))
    if isinstance(t, MAbs):
        return ((t.dom, 0), (t.body, 1), (t.mark, 0))
    if isinstance(t, MProd):
        return ((t.dom, 0), (t.cod, 1))
    return ()


def _rebuild(t: MarkedTerm, i: int, c: MarkedTerm) -> MarkedTerm:
    if isinstance(t, MVar):
        return MVar(t.index, c)
    if isinstance(t, MApp):
        parts = [t.fun, t.arg, t.mark]
        parts[i] = c
        return MApp(*parts)
    if isinstance(t, MAbs):
        parts = [t.dom, t.body, t.mark]
        parts[i] = c
        return MAbs(t.hint, *parts)
    if isinstance(t, MProd):
        return MProd(t.hint, c, t.cod) if i == 0 else MProd(t.hint, t.dom, c)
    raise IndexError(i)


def mark_of(t: MarkedTerm) -> Optional[MarkedTerm]:
    if isinstance(t, (MVar, MApp, MAbs)):
        return t.mark
    return None


def mshift(t: MarkedTerm, by: int, cutoff: int = 0) -> MarkedTerm:
    if by == 0:
        return t

    def go(t: MarkedTerm, c: int) -> MarkedTerm:
        if isinstance(t, MVar):
            mark = go(t.mark, c)
            if t.index < c:
                return MVar(t.index, mark)
            new = t.index + by
            if new < c:
                raise ShiftUnderflow(f"index {t.index} shifted by {by} below cutoff {c}")
            return MVar(new, mark)
        if isinstance(t, MApp):
            return MApp(go(t.fun, c), go(t.arg, c), go(t.mark, c))
        if isinstance(t, MAbs):
            return MAbs(t.hint, go(t.dom, c), go(t.body, c + 1), go(t.mark, c))
        if isinstance(t, MProd):
            return MProd(t.hint, go(t.dom, c), go(t.cod, c + 1))
        return t

    return go(t, cutoff)


def msubst(t: MarkedTerm, target: int, u: MarkedTerm) -> MarkedTerm:
    """Substitute in the term and in its marks; same conventions as ``subst``."""
    cache: dict[int, MarkedTerm] = {}

    def lifted(c: int) -> MarkedTerm:
        if c not in cache:
            cache[c] = mshift(u, c)
        return cache[c]

    def go(t: MarkedTerm, c: int) -> MarkedTerm:
        if isinstance(t, MVar):
            i = t.index
            if i == target + c:
                return lifted(c)
            mark = go(t.mark, c)
            return MVar(i - 1 if i > target + c else i, mark)
        if isinstance(t, MApp):
            return MApp(go(t.fun, c), go(t.arg, c), go(t.mark, c))
        if isinstance(t, MAbs):
            return MAbs(t.hint, go(t.dom, c), go(t.body, c + 1), go(t.mark, c))
        if isinstance(t, MProd):
            return MProd(t.hint, go(t.dom, c), go(t.cod, c + 1))
        return t

    return go(t, 0)


def mfree_indices(t: MarkedTerm) -> frozenset[int]:
    out: set[int] = set()

    def go(t: MarkedTerm, c: int) -> None:
        if isinstance(t, MVar) and t.index >= c:
            out.add(t.index - c)
        for child, d in _kids(t):
            go(child, c + d)

    go(t, 0)
    return frozenset(out)


def moccurs_free(t: MarkedTerm, index: int) -> bool:
    if isinstance(t, MVar) and t.index == index:
        return True
    return any(moccurs_free(child, index + d) for child, d in _kids(t))


def msize(t: MarkedTerm) -> int:
    return 1 + sum(msize(child) for child, _ in _kids(t))


def marked_subterms(t: MarkedTerm) -> Iterator[tuple[int, MarkedTerm]]:
    """Strict subterms, marks included, with their binder depth below ``t``."""

    def go(t: MarkedTerm, d: int) -> Iterator[tuple[int, MarkedTerm]]:
        for child, inc in _kids(t):
            yield d + inc, child
            yield from go(child, d + inc)

    return go(t, 0)


def mspine(t: MarkedTerm) -> tuple[MarkedTerm, list[tuple[MarkedTerm, MarkedTerm]]]:
    """Split ``(...(h c1)^T1 ... cn)^Tn`` into ``h`` and ``[(c1, T1), ...]``."""
    args = []
    while isinstance(t, MApp):
        args.append((t.arg, t.mark))
        t = t.fun
    args.reverse()
    return t, args


def _mapply(head: MarkedTerm, args: list[tuple[MarkedTerm, MarkedTerm]]) -> MarkedTerm:
    for a, m in args:
        head = MApp(head, a, m)
    return head


def split_marked_telescope(T: MarkedTerm) -> tuple[list[tuple[str, MarkedTerm]], MarkedTerm]:
    doms = []
    while isinstance(T, MProd):
        doms.append((T.hint, T.dom))
        T = T.cod
    head, args = mspine(T)
    if not (isinstance(head, MVar) or (isinstance(head, Sort) and not args)):
        raise NotAType(f"marked telescope ends in a non-atomic term: {T!r}")
    return doms, T


# -- contents and conversion -----------------------------------------------

def contents(t: MarkedTerm) -> Term:
    """Erase every mark."""
    if isinstance(t, MVar):
        return Var(t.index)
    if isinstance(t, MApp):
        return App(contents(t.fun), contents(t.arg))
    if isinstance(t, MAbs):
        return Abs(t.hint, contents(t.dom), contents(t.body))
    if isinstance(t, MProd):
        return Prod(t.hint, contents(t.dom), contents(t.cod))
    return t


def contents_context(ctx: MarkedContext) -> Context:
    return Context.of(*((d.hint, contents(d.type)) for d in ctx.entries))


def marked_convertible(a: MarkedTerm, b: MarkedTerm, fuel: int | Fuel = DEFAULT_FUEL) -> bool:
    return convertible(contents(a), contents(b), fuel)


# -- reduction ---------------------------------------------------------------

def _is_beta_redex(t: MarkedTerm) -> bool:
    return isinstance(t, MApp) and isinstance(t.fun, MAbs)


def _is_eta_redex(t: MarkedTerm) -> bool:
    if not (isinstance(t, MAbs) and isinstance(t.body, MApp)):
        return False
    arg = t.body.arg
    return (
        isinstance(arg, MVar) and arg.index == 0
        and not moccurs_free(t.body.fun, 0)
    )


def _root_kind(t: MarkedTerm) -> Optional[ReductionKind]:
    if _is_beta_redex(t):
        return ReductionKind.BETA
    if _is_eta_redex(t):
        return ReductionKind.ETA
    return None


def _contract(t: MarkedTerm) -> MarkedTerm:
    if _is_beta_redex(t):
        return msubst(t.fun.body, 0, t.arg)
    return mshift(t.body.fun, -1)


def marked_step(t: MarkedTerm, kind: ReductionKind | None = None) -> Optional[MarkedTerm]:
    """Contract the leftmost-outermost redex, searching marks as well."""
    found = _step(t, kind)
    return None if found is None else found[0]


def _step(t: MarkedTerm, kind: ReductionKind | None) -> Optional[tuple[MarkedTerm, tuple[int, ...]]]:
    rk = _root_kind(t)
    if rk is not None and (kind is None or kind is rk):
        return _contract(t), ()
    for i, (child, _) in enumerate(_kids(t)):
        found = _step(child, kind)
        if found is not None:
            return _rebuild(t, i, found[0]), (i,) + found[1]
    return None


def marked_reducts(
    t: MarkedTerm, kind: ReductionKind | None = None
) -> Iterator[tuple[tuple[int, ...], ReductionKind, MarkedTerm]]:
    rk = _root_kind(t)
    if rk is not None and (kind is None or kind is rk):
        yield (), rk, _contract(t)
    for i, (child, _) in enumerate(_kids(t)):
        for pos, k, new in marked_reducts(child, kind):
            yield (i,) + pos, k, _rebuild(t, i, new)


def marked_whnf(t: MarkedTerm, fuel: int | Fuel = DEFAULT_FUEL) -> MarkedTerm:
    f = _fuel(fuel)
    head, args = mspine(t)
    i = 0
    while True:
        if isinstance(head, MAbs) and i < len(args):
            f.tick()
            head = msubst(head.body, 0, args[i][0])
            i += 1
        elif isinstance(head, MApp):
            head, more = mspine(head)
            args = more + args[i:]
            i = 0
        else:
            return _mapply(head, args[i:])


def _beta_nf(t: MarkedTerm, f: Fuel) -> MarkedTerm:
    t = marked_whnf(t, f)
    if isinstance(t, MVar):
        return MVar(t.index, _beta_nf(t.mark, f))
    if isinstance(t, MApp):
        return MApp(_beta_nf(t.fun, f), _beta_nf(t.arg, f), _beta_nf(t.mark, f))
    if isinstance(t, MAbs):
        return MAbs(t.hint, _beta_nf(t.dom, f), _beta_nf(t.body, f), _beta_nf(t.mark, f))
    if isinstance(t, MProd):
        return MProd(t.hint, _beta_nf(t.dom, f), _beta_nf(t.cod, f))
    return t


def _eta_nf(t: MarkedTerm, f: Fuel) -> MarkedTerm:
    if isinstance(t, MVar):
        return MVar(t.index, _eta_nf(t.mark, f))
    if isinstance(t, MApp):
        return MApp(_eta_nf(t.fun, f), _eta_nf(t.arg, f), _eta_nf(t.mark, f))
    if isinstance(t, MProd):
        return MProd(t.hint, _eta_nf(t.dom, f), _eta_nf(t.cod, f))
    if isinstance(t, MAbs):
        node = MAbs(t.hint, _eta_nf(t.dom, f), _eta_nf(t.body, f), _eta_nf(t.mark, f))
        if _is_eta_redex(node):
            f.tick()
            return mshift(node.body.fun, -1)
        return node
    return t


def marked_beta_normalize(t: MarkedTerm, fuel: int | Fuel = DEFAULT_FUEL) -> MarkedTerm:
    return _beta_nf(t, _fuel(fuel))


def marked_normalize(t: MarkedTerm, fuel: int | Fuel = DEFAULT_FUEL) -> MarkedTerm:
    f = _fuel(fuel)
    return _eta_nf(_beta_nf(t, f), f)


def is_marked_normal(t: MarkedTerm, kind: ReductionKind | None = None) -> bool:
    return _step(t, kind) is None


# -- typing ------------------------------------------------------------------

class _MarkedChecker:
    def __init__(self, sys: SystemSpec, fuel: int | Fuel) -> None:
        self.sys = sys
        self.fuel = fuel if isinstance(fuel, Fuel) else Fuel(fuel, "marked type checking")

    def conv(self, a: MarkedTerm, b: MarkedTerm) -> bool:
        return marked_convertible(a, b, self.fuel)

    def sort_of(self, ctx: MarkedContext, t: MarkedTerm, path: tuple[int, ...]) -> Sort:
        ty = self.infer(ctx, t, path)
        w = marked_whnf(ty, self.fuel)
        if not isinstance(w, Sort):
            raise TypingError(ErrorKind.NOT_A_SORT, path, got=ty)
        return w

    def mark_ok(self, ctx: MarkedContext, mark: MarkedTerm, want: MarkedTerm,
                path: tuple[int, ...]) -> None:
        self.sort_of(ctx, mark, path)
        if not self.conv(mark, want):
            raise TypingError(ErrorKind.MARK_MISMATCH, path, expected=want, got=mark)

    def infer(self, ctx: MarkedContext, t: MarkedTerm, path: tuple[int, ...] = ()) -> MarkedTerm:
        if isinstance(t, Sort):
            if t == PROP:
                return TYPE
            raise TypingError(ErrorKind.TYPE_HAS_NO_TYPE, path)
        if isinstance(t, MVar):
            if not 0 <= t.index < len(ctx):
                raise TypingError(ErrorKind.UNBOUND_VARIABLE, path, detail=f"index {t.index}")
            self.mark_ok(ctx, t.mark, ctx.type_of(t.index), path + (0,))
            return t.mark
        if isinstance(t, MProd):
            s1 = self.sort_of(ctx, t.dom, path + (0,))
            s2 = self.sort_of(ctx.extend(t.hint, t.dom), t.cod, path + (1,))
            if (s1, s2) not in self.sys:
                raise TypingError(ErrorKind.RULE_NOT_IN_SYSTEM, path, rule=(s1, s2))
            return s2
        if isinstance(t, MAbs):
            body_ty = self.infer(ctx.extend(t.hint, t.dom), t.body, path + (1,))
            product = MProd(t.hint, t.dom, body_ty)
            self.sort_of(ctx, product, path)
            self.mark_ok(ctx, t.mark, product, path + (2,))
            return t.mark
        if isinstance(t, MApp):
            fun_ty = self.infer(ctx, t.fun, path + (0,))
            w = marked_whnf(fun_ty, self.fuel)
            if not isinstance(w, MProd):
                raise TypingError(ErrorKind.NOT_A_FUNCTION, path + (0,), got=fun_ty)
            arg_ty = self.infer(ctx, t.arg, path + (1,))
            if not self.conv(w.dom, arg_ty):
                raise TypingError(ErrorKind.DOMAIN_MISMATCH, path + (1,), expected=w.dom, got=arg_ty)
            self.mark_ok(ctx, t.mark, msubst(w.cod, 0, t.arg), path + (2,))
            return t.mark
        raise TypeError(f"not a marked term: {t!r}")


def marked_wf_context(ctx: MarkedContext, sys: SystemSpec, fuel: int | Fuel = DEFAULT_FUEL) -> None:
    checker = _MarkedChecker(sys, fuel)
    for i, decl in enumerate(ctx.entries):
        try:
            checker.sort_of(ctx.prefix(i), decl.type, ())
        except TypingError as err:
            raise TypingError(ErrorKind.ILL_FORMED_CONTEXT, entry=i, inner=err) from err


def marked_infer(ctx: MarkedContext, t: MarkedTerm, sys: SystemSpec,
                 fuel: int | Fuel = DEFAULT_FUEL) -> MarkedTerm:
    """Type of a marked term.  For variables, applications and abstractions
    this is the outermost mark, after checking it against the synthesized
    type."""
    return _MarkedChecker(sys, fuel).infer(ctx, t)


def marked_check(ctx: MarkedContext, t: MarkedTerm, T: MarkedTerm, sys: SystemSpec,
                 fuel: int | Fuel = DEFAULT_FUEL) -> None:
    checker = _MarkedChecker(sys, fuel)
    got = checker.infer(ctx, t)
    if T == TYPE:
        if got != TYPE:
            raise TypingError(ErrorKind.DOMAIN_MISMATCH, expected=T, got=got)
        return
    checker.sort_of(ctx, T, ())
    if not checker.conv(got, T):
        raise TypingError(ErrorKind.DOMAIN_MISMATCH, expected=T, got=got)
