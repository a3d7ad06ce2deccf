"""Unmarked terms of the cube, de Bruijn indexed.

Binder names are kept only as printing hints and never take part in
equality, so structural equality of terms is alpha-equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

from .errors import ShiftUnderflow

__all__ = [
    "Sort", "Var", "App", "Abs", "Prod", "Term", "PROP", "TYPE",
    "Decl", "Context", "LabeledTerm",
    "shift", "subst", "occurs_free", "free_indices", "is_sort", "is_scoped",
    "strict_subterms", "spine", "apply", "size", "arrow", "subterm_at",
]


@dataclass(frozen=True, slots=True)
class Sort:
    name: str

    def __post_init__(self) -> None:
        if self.name not in ("Prop", "Type"):
            raise ValueError(f"not a sort: {self.name!r}")

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return self.name


PROP = Sort("Prop")
TYPE = Sort("Type")


@dataclass(frozen=True, slots=True)
class Var:
    index: int


@dataclass(frozen=True, slots=True)
class App:
    fun: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class Abs:
    hint: str = field(compare=False)
    dom: Term
    body: Term


@dataclass(frozen=True, slots=True)
class Prod:
    hint: str = field(compare=False)
    dom: Term
    cod: Term


Term = Union[Sort, Var, App, Abs, Prod]


def arrow(dom: Term, cod: Term) -> Prod:
    """Non-dependent product; ``cod`` is given in the outer scope."""
    return Prod("_", dom, shift(cod, 1))


@dataclass(frozen=True, slots=True)
class Decl:
    hint: str = field(compare=False)
    type: Term


@dataclass(frozen=True, slots=True)
class Context:
    """Declarations, outermost first.  Index 0 is the last entry."""

    entries: tuple[Decl, ...] = ()

    @classmethod
    def of(cls, *pairs: tuple[str, Term]) -> Context:
        return cls(tuple(Decl(h, t) for h, t in pairs))

    def __len__(self) -> int:
        return len(self.entries)

    def extend(self, hint: str, type_: Term) -> Context:
        return Context(self.entries + (Decl(hint, type_),))

    def type_of(self, index: int) -> Term:
        """Declared type of ``Var(index)``, expressed in this whole context."""
        decl = self.entries[len(self.entries) - 1 - index]
        return shift(decl.type, index + 1)

    def hint_of(self, index: int) -> str:
        return self.entries[len(self.entries) - 1 - index].hint

    def names(self) -> list[str]:
        return [d.hint for d in self.entries]

    def prefix(self, n: int) -> Context:
        return Context(self.entries[:n])


@dataclass(frozen=True, slots=True)
class LabeledTerm:
    """A term together with the context it is typed in."""

    ctx: Context
    term: Term


def shift(t: Term, by: int, cutoff: int = 0) -> Term:
    """Add ``by`` to every free index ``>= cutoff``."""
    if by == 0:
        return t

    def go(t: Term, c: int) -> Term:
        if isinstance(t, Var):
            if t.index < c:
                return t
            new = t.index + by
            if new < c:
                raise ShiftUnderflow(f"index {t.index} shifted by {by} below cutoff {c}")
            return Var(new)
        if isinstance(t, App):
            return App(go(t.fun, c), go(t.arg, c))
        if isinstance(t, Abs):
            return Abs(t.hint, go(t.dom, c), go(t.body, c + 1))
        if isinstance(t, Prod):
            return Prod(t.hint, go(t.dom, c), go(t.cod, c + 1))
        return t

    return go(t, cutoff)


def subst(t: Term, target: int, u: Term) -> Term:
    """Replace ``Var(target)`` by ``u`` and close the gap left by it.

    ``u`` is scoped in the resulting context (the one without ``target``);
    it is shifted as it moves under binders, and indices above ``target``
    are decremented.
    """
    cache: dict[int, Term] = {}

    def lifted(c: int) -> Term:
        if c not in cache:
            cache[c] = shift(u, c)
        return cache[c]

    def go(t: Term, c: int) -> Term:
        if isinstance(t, Var):
            i = t.index
            if i == target + c:
                return lifted(c)
            if i > target + c:
                return Var(i - 1)
            return t
        if isinstance(t, App):
            return App(go(t.fun, c), go(t.arg, c))
        if isinstance(t, Abs):
            return Abs(t.hint, go(t.dom, c), go(t.body, c + 1))
        if isinstance(t, Prod):
            return Prod(t.hint, go(t.dom, c), go(t.cod, c + 1))
        return t

    return go(t, 0)


def occurs_free(t: Term, index: int) -> bool:
    if isinstance(t, Var):
        return t.index == index
    if isinstance(t, App):
        return occurs_free(t.fun, index) or occurs_free(t.arg, index)
    if isinstance(t, (Abs, Prod)):
        second = t.body if isinstance(t, Abs) else t.cod
        return occurs_free(t.dom, index) or occurs_free(second, index + 1)
    return False


def free_indices(t: Term) -> frozenset[int]:
    out: set[int] = set()

    def go(t: Term, c: int) -> None:
        if isinstance(t, Var):
            if t.index >= c:
                out.add(t.index - c)
        elif isinstance(t, App):
            go(t.fun, c)
            go(t.arg, c)
        elif isinstance(t, Abs):
            go(t.dom, c)
            go(t.body, c + 1)
        elif isinstance(t, Prod):
            go(t.dom, c)
            go(t.cod, c + 1)

    go(t, 0)
    return frozenset(out)


def is_sort(t: object) -> bool:
    return isinstance(t, Sort)


def is_scoped(t: Term, depth: int) -> bool:
    """True iff every free index of ``t`` is below ``depth``."""
    return all(i < depth for i in free_indices(t))


def size(t: Term) -> int:
    if isinstance(t, App):
        return 1 + size(t.fun) + size(t.arg)
    if isinstance(t, Abs):
        return 1 + size(t.dom) + size(t.body)
    if isinstance(t, Prod):
        return 1 + size(t.dom) + size(t.cod)
    return 1


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split ``(h c1 ... cn)`` into ``h`` and ``[c1, ..., cn]``."""
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def apply(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


def children(t: Term, ctx: Context) -> Iterator[tuple[Term, Context]]:
    if isinstance(t, App):
        yield t.fun, ctx
        yield t.arg, ctx
    elif isinstance(t, Abs):
        yield t.dom, ctx
        yield t.body, ctx.extend(t.hint, t.dom)
    elif isinstance(t, Prod):
        yield t.dom, ctx
        yield t.cod, ctx.extend(t.hint, t.dom)


def strict_subterms(lt: LabeledTerm) -> tuple[LabeledTerm, ...]:
    """All strict subterms, each labeled with the context it lives in.

    Returned in pre-order with duplicates removed, so the result is a set
    with a reproducible iteration order.
    """
    seen: dict[LabeledTerm, None] = {}

    def go(t: Term, ctx: Context) -> None:
        for child, cctx in children(t, ctx):
            seen.setdefault(LabeledTerm(cctx, child))
            go(child, cctx)

    go(lt.term, lt.ctx)
    return tuple(seen)


def subterm_at(t: Term, path: tuple[int, ...]) -> Term:
    for i in path:
        if isinstance(t, App):
            t = (t.fun, t.arg)[i]
        elif isinstance(t, Abs):
            t = (t.dom, t.body)[i]
        elif isinstance(t, Prod):
            t = (t.dom, t.cod)[i]
        else:
            raise IndexError(f"no child {i} in {t!r}")
    return t
