"""The eight systems of the cube and syntax-directed type inference.

The declarative rules are turned into an algorithm by inverting them on
the head constructor of the subject; conversion is only checked where an
argument meets a domain and in explicit :func:`check` calls.  Inferred
types are structural and left unnormalized.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import ErrorKind, TypingError, UnknownSystem
from .reduction import DEFAULT_FUEL, Fuel, convertible, whnf_product, whnf_sort
from .terms import (
    PROP, TYPE, Abs, App, Context, Prod, Sort, Term, Var, subst,
)

Rule = tuple[Sort, Sort]

_LETTER = {"P": PROP, "T": TYPE}


@dataclass(frozen=True)
class SystemSpec:
    rules: frozenset[Rule]
    name: Optional[str] = None

    def __post_init__(self) -> None:
        if (PROP, PROP) not in self.rules:
            raise UnknownSystem("every system contains the rule (Prop,Prop)")
        for s1, s2 in self.rules:
            if not (isinstance(s1, Sort) and isinstance(s2, Sort)):
                raise UnknownSystem(f"not a sort pair: {(s1, s2)!r}")

    def __contains__(self, rule: Rule) -> bool:
        return rule in self.rules

    def rule_code(self) -> str:
        """Canonical short form, e.g. ``PP,TP``."""
        order = [(PROP, PROP), (PROP, TYPE), (TYPE, PROP), (TYPE, TYPE)]
        return ",".join(f"{a.name[0]}{b.name[0]}" for a, b in order if (a, b) in self.rules)

    @property
    def label(self) -> str:
        return self.name or self.rule_code()

    def __str__(self) -> str:
        return self.label

    def __repr__(self) -> str:
        # the rule set is a frozenset; keep the repr independent of hash order
        return f"SystemSpec({self.rule_code()!r}, name={self.name!r})"


def _rules(code: str) -> frozenset[Rule]:
    out = set()
    for part in code.replace(" ", "").split(","):
        if len(part) != 2 or any(c not in _LETTER for c in part):
            raise UnknownSystem(f"bad rule {part!r}; expected two letters from P/T")
        out.add((_LETTER[part[0]], _LETTER[part[1]]))
    return frozenset(out)


SYSTEM_RULES = {
    "stlc": "PP",
    "lambda-p": "PP,PT",
    "f": "PP,TP",
    "f-omega-weak": "PP,TT",
    "f-omega": "PP,TP,TT",
    "lambda-p2": "PP,PT,TP",
    "lambda-p-omega-weak": "PP,PT,TT",
    "cc": "PP,PT,TP,TT",
}


def named_system(name: str) -> SystemSpec:
    """Resolve a system name, or an explicit rule list such as ``PP,TP``."""
    key = name.strip().lower()
    if key in SYSTEM_RULES:
        return SystemSpec(_rules(SYSTEM_RULES[key]), key)
    rules = _rules(name.strip().upper())
    for known, code in SYSTEM_RULES.items():
        if _rules(code) == rules:
            return SystemSpec(rules, known)
    raise UnknownSystem(f"unknown system {name!r}")


ALL_SYSTEMS: tuple[SystemSpec, ...] = tuple(named_system(n) for n in SYSTEM_RULES)
CC = named_system("cc")


@dataclass(frozen=True)
class Judgement:
    ctx: Context
    subject: Term
    type: Term
    system: SystemSpec

    def recheck(self, fuel: int = DEFAULT_FUEL) -> None:
        check(self.ctx, self.subject, self.type, self.system, fuel)


class _Checker:
    def __init__(self, sys: SystemSpec, fuel: int | Fuel) -> None:
        self.sys = sys
        self.fuel = fuel if isinstance(fuel, Fuel) else Fuel(fuel, "type checking")

    def conv(self, a: Term, b: Term) -> bool:
        return convertible(a, b, self.fuel)

    def sort_of(self, ctx: Context, t: Term, path: tuple[int, ...]) -> Sort:
        ty = self.infer(ctx, t, path)
        s = whnf_sort(ty, self.fuel)
        if s is None:
            raise TypingError(ErrorKind.NOT_A_SORT, path, got=ty)
        return s

    def infer(self, ctx: Context, t: Term, path: tuple[int, ...] = ()) -> Term:
        if isinstance(t, Sort):
            if t == PROP:
                return TYPE
            raise TypingError(ErrorKind.TYPE_HAS_NO_TYPE, path)
        if isinstance(t, Var):
            if not 0 <= t.index < len(ctx):
                raise TypingError(ErrorKind.UNBOUND_VARIABLE, path, detail=f"index {t.index}")
            return ctx.type_of(t.index)
        if isinstance(t, Prod):
            s1 = self.sort_of(ctx, t.dom, path + (0,))
            s2 = self.sort_of(ctx.extend(t.hint, t.dom), t.cod, path + (1,))
            if (s1, s2) not in self.sys:
                raise TypingError(ErrorKind.RULE_NOT_IN_SYSTEM, path, rule=(s1, s2))
            return s2
        if isinstance(t, Abs):
            body_ty = self.infer(ctx.extend(t.hint, t.dom), t.body, path + (1,))
            product = Prod(t.hint, t.dom, body_ty)
            self.sort_of(ctx, product, path)
            return product
        if isinstance(t, App):
            fun_ty = self.infer(ctx, t.fun, path + (0,))
            prod = whnf_product(fun_ty, self.fuel)
            if prod is None:
                raise TypingError(ErrorKind.NOT_A_FUNCTION, path + (0,), got=fun_ty)
            dom, cod = prod
            arg_ty = self.infer(ctx, t.arg, path + (1,))
            if not self.conv(dom, arg_ty):
                raise TypingError(ErrorKind.DOMAIN_MISMATCH, path + (1,), expected=dom, got=arg_ty)
            return subst(cod, 0, t.arg)
        raise TypeError(f"not a term: {t!r}")


def wf_context(ctx: Context, sys: SystemSpec, fuel: int | Fuel = DEFAULT_FUEL) -> None:
    """Raise unless every declared type has a sort under the entries before it."""
    checker = _Checker(sys, fuel)
    for i, decl in enumerate(ctx.entries):
        try:
            checker.sort_of(ctx.prefix(i), decl.type, ())
        except TypingError as err:
            raise TypingError(ErrorKind.ILL_FORMED_CONTEXT, entry=i, inner=err) from err


def infer(ctx: Context, t: Term, sys: SystemSpec, fuel: int | Fuel = DEFAULT_FUEL) -> Term:
    """A type ``T`` with ``ctx |- t : T``; the context is assumed well formed."""
    return _Checker(sys, fuel).infer(ctx, t)


def infer_sort(ctx: Context, t: Term, sys: SystemSpec, fuel: int | Fuel = DEFAULT_FUEL) -> Sort:
    return _Checker(sys, fuel).sort_of(ctx, t, ())


def check(ctx: Context, t: Term, T: Term, sys: SystemSpec, fuel: int | Fuel = DEFAULT_FUEL) -> None:
    checker = _Checker(sys, fuel)
    got = checker.infer(ctx, t)
    if T == TYPE:
        if got != TYPE:
            raise TypingError(ErrorKind.DOMAIN_MISMATCH, expected=T, got=got)
        return
    checker.sort_of(ctx, T, ())
    if not checker.conv(got, T):
        raise TypingError(ErrorKind.DOMAIN_MISMATCH, expected=T, got=got)


def judge(ctx: Context, t: Term, sys: SystemSpec, fuel: int | Fuel = DEFAULT_FUEL) -> Judgement:
    """Check the context, infer a type and package the result."""
    wf_context(ctx, sys, fuel)
    return Judgement(ctx, t, infer(ctx, t, sys, fuel), sys)


def typable(ctx: Context, t: Term, sys: SystemSpec, fuel: int | Fuel = DEFAULT_FUEL) -> bool:
    try:
        infer(ctx, t, sys, fuel)
    except TypingError:
        return False
    return True


def systems_containing(rules: Iterable[Rule]) -> list[SystemSpec]:
    wanted = set(rules)
    return [s for s in ALL_SYSTEMS if wanted <= s.rules]
