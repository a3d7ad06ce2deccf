"""Beta and eta reduction on unmarked terms.

Single steps follow the leftmost-outermost order.  Full normalization
first exhausts beta (normal order) and then eta; on a beta-normal term an
eta contraction can never create a beta-redex, so the second phase leaves
the term beta-normal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import FuelExhausted, NotAType
from .terms import (
    Abs, App, Prod, Sort, Term, Var, apply, occurs_free, shift, spine, subst,
)

DEFAULT_FUEL = 100_000

Path = tuple[int, ...]


class ReductionKind(enum.Enum):
    BETA = "beta"
    ETA = "eta"


class Fuel:
    """Mutable step budget shared by the recursive helpers of one call."""

    __slots__ = ("limit", "left", "what")

    def __init__(self, limit: int, what: str = "reduction") -> None:
        if limit < 1:
            raise ValueError("fuel must be at least 1")
        self.limit = limit
        self.left = limit
        self.what = what

    def tick(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise FuelExhausted(self.limit, self.what)


def _fuel(fuel: int | Fuel) -> Fuel:
    return fuel if isinstance(fuel, Fuel) else Fuel(fuel)


def is_beta_redex(t: Term) -> bool:
    return isinstance(t, App) and isinstance(t.fun, Abs)


def is_eta_redex(t: Term) -> bool:
    return (
        isinstance(t, Abs)
        and isinstance(t.body, App)
        and t.body.arg == Var(0)
        and not occurs_free(t.body.fun, 0)
    )


def contract(t: Term) -> Term:
    """Contract the redex at the root of ``t``."""
    if is_beta_redex(t):
        return subst(t.fun.body, 0, t.arg)
    if is_eta_redex(t):
        return shift(t.body.fun, -1)
    raise ValueError("not a redex")


def _root_kind(t: Term) -> Optional[ReductionKind]:
    if is_beta_redex(t):
        return ReductionKind.BETA
    if is_eta_redex(t):
        return ReductionKind.ETA
    return None


def _rebuild(t: Term, i: int, child: Term) -> Term:
    if isinstance(t, App):
        return App(child, t.arg) if i == 0 else App(t.fun, child)
    if isinstance(t, Abs):
        return Abs(t.hint, child, t.body) if i == 0 else Abs(t.hint, t.dom, child)
    if isinstance(t, Prod):
        return Prod(t.hint, child, t.cod) if i == 0 else Prod(t.hint, t.dom, child)
    raise IndexError(i)


def _kids(t: Term) -> tuple[Term, ...]:
    if isinstance(t, App):
        return (t.fun, t.arg)
    if isinstance(t, Abs):
        return (t.dom, t.body)
    if isinstance(t, Prod):
        return (t.dom, t.cod)
    return ()


def step(t: Term, kind: ReductionKind | None = None) -> Optional[tuple[Term, Path]]:
    """Contract the leftmost-outermost redex of ``kind`` (any kind if None).

    Returns the reduct and the position of the contracted redex, or None
    when ``t`` is normal for that kind.
    """
    rk = _root_kind(t)
    if rk is not None and (kind is None or kind is rk):
        return contract(t), ()
    for i, child in enumerate(_kids(t)):
        found = step(child, kind)
        if found is not None:
            new, pos = found
            return _rebuild(t, i, new), (i,) + pos
    return None


def reducts(t: Term, kind: ReductionKind | None = None) -> Iterator[tuple[Path, ReductionKind, Term]]:
    """Every one-step reduct of ``t``, in leftmost-outermost order."""
    rk = _root_kind(t)
    if rk is not None and (kind is None or kind is rk):
        yield (), rk, contract(t)
    for i, child in enumerate(_kids(t)):
        for pos, k, new in reducts(child, kind):
            yield (i,) + pos, k, _rebuild(t, i, new)


def whnf(t: Term, fuel: int | Fuel = DEFAULT_FUEL) -> Term:
    """Reduce head beta-redexes only."""
    f = _fuel(fuel)
    head, args = spine(t)
    i = 0
    while True:
        if isinstance(head, Abs) and i < len(args):
            f.tick()
            head = subst(head.body, 0, args[i])
            i += 1
        elif isinstance(head, App):
            head, more = spine(head)
            args = more + args[i:]
            i = 0
        else:
            return apply(head, *args[i:])


def _beta_nf(t: Term, f: Fuel) -> Term:
    t = whnf(t, f)
    if isinstance(t, App):
        return App(_beta_nf(t.fun, f), _beta_nf(t.arg, f))
    if isinstance(t, Abs):
        return Abs(t.hint, _beta_nf(t.dom, f), _beta_nf(t.body, f))
    if isinstance(t, Prod):
        return Prod(t.hint, _beta_nf(t.dom, f), _beta_nf(t.cod, f))
    return t


def _eta_nf(t: Term, f: Fuel) -> Term:
    if isinstance(t, App):
        return App(_eta_nf(t.fun, f), _eta_nf(t.arg, f))
    if isinstance(t, Prod):
        return Prod(t.hint, _eta_nf(t.dom, f), _eta_nf(t.cod, f))
    if isinstance(t, Abs):
        node = Abs(t.hint, _eta_nf(t.dom, f), _eta_nf(t.body, f))
        if is_eta_redex(node):
            f.tick()
            return shift(node.body.fun, -1)
        return node
    return t


def beta_normalize(t: Term, fuel: int | Fuel = DEFAULT_FUEL) -> Term:
    return _beta_nf(t, _fuel(fuel))


def eta_normalize(t: Term, fuel: int | Fuel = DEFAULT_FUEL) -> Term:
    """Eta normal form, computed bottom-up; meant for beta-normal input."""
    return _eta_nf(t, _fuel(fuel))


def normalize(t: Term, fuel: int | Fuel = DEFAULT_FUEL) -> Term:
    f = _fuel(fuel)
    return _eta_nf(_beta_nf(t, f), f)


def is_normal(t: Term, kind: ReductionKind | None = None) -> bool:
    return step(t, kind) is None


def is_beta_normal(t: Term) -> bool:
    return step(t, ReductionKind.BETA) is None


def whnf_product(t: Term, fuel: int | Fuel = DEFAULT_FUEL) -> Optional[tuple[Term, Term]]:
    """Domain and codomain of ``t`` once head-reduced to a product."""
    w = whnf(t, fuel)
    if isinstance(w, Prod):
        return w.dom, w.cod
    return None


def whnf_sort(t: Term, fuel: int | Fuel = DEFAULT_FUEL) -> Optional[Sort]:
    w = whnf(t, fuel)
    return w if isinstance(w, Sort) else None


def convertible(a: Term, b: Term, fuel: int | Fuel = DEFAULT_FUEL) -> bool:
    if a == b:
        return True
    return normalize(a, fuel) == normalize(b, fuel)


def is_atomic(t: Term) -> bool:
    head, args = spine(t)
    if isinstance(head, Var):
        return True
    return isinstance(head, Sort) and not args


@dataclass(frozen=True)
class Telescope:
    """``(x1:P1) ... (xn:Pn) P`` with ``P`` atomic.

    Each domain is scoped over the domains before it; ``head`` is scoped
    over all of them.
    """

    doms: tuple[tuple[str, Term], ...]
    head: Term

    def __len__(self) -> int:
        return len(self.doms)

    def to_term(self) -> Term:
        out = self.head
        for hint, dom in reversed(self.doms):
            out = Prod(hint, dom, out)
        return out


def split_telescope(T: Term) -> Telescope:
    doms = []
    while isinstance(T, Prod):
        doms.append((T.hint, T.dom))
        T = T.cod
    if not is_atomic(T):
        raise NotAType(f"telescope ends in a non-atomic term: {T!r}")
    return Telescope(tuple(doms), T)
