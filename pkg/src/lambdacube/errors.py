"""Exception hierarchy shared by every kernel module."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any


class CubeError(Exception):
    """Base class for all errors raised by the kernel."""


class FuelExhausted(CubeError):
    """A reduction ran out of its step budget.

    On well-typed input this never happens (reduction is strongly
    normalizing), so it signals an ill-typed or adversarial term.
    """

    def __init__(self, fuel: int, what: str = "reduction") -> None:
        super().__init__(f"{what} exceeded the fuel budget of {fuel} steps")
        self.fuel = fuel
        self.what = what


class ShiftUnderflow(CubeError):
    """A negative shift would have produced a negative de Bruijn index."""


class NotAType(CubeError):
    """The term cannot be decomposed as a telescope over an atomic term."""


class PreconditionError(CubeError):
    """An operation was called on input outside its domain."""


class UnknownSystem(CubeError):
    """A system name or rule list could not be resolved."""


class ErrorKind(enum.Enum):
    UNBOUND_VARIABLE = "UnboundVariable"
    TYPE_HAS_NO_TYPE = "TypeHasNoType"
    RULE_NOT_IN_SYSTEM = "RuleNotInSystem"
    NOT_A_FUNCTION = "NotAFunction"
    NOT_A_SORT = "NotASort"
    DOMAIN_MISMATCH = "DomainMismatch"
    MARK_MISMATCH = "MarkMismatch"
    ILL_FORMED_CONTEXT = "IllFormedContext"


@dataclass(eq=False)
class TypingError(CubeError):
    """A judgement could not be derived.

    ``path`` is the sequence of child indices leading from the root of the
    checked term to the offending subterm.  Which of the optional fields are
    populated depends on ``kind``:

    * ``RULE_NOT_IN_SYSTEM``: ``rule`` holds the offending sort pair.
    * ``DOMAIN_MISMATCH`` / ``MARK_MISMATCH``: ``expected`` and ``got``.
    * ``ILL_FORMED_CONTEXT``: ``entry`` is the failing context position
      (outermost first) and ``inner`` the underlying error.
    """

    kind: ErrorKind
    path: tuple[int, ...] = ()
    rule: tuple[Any, Any] | None = None
    expected: Any = None
    got: Any = None
    entry: int | None = None
    inner: TypingError | None = None
    detail: str = ""

    def __post_init__(self) -> None:
        super().__init__(self.message)

    @property
    def message(self) -> str:
        text = self.kind.value
        if self.rule is not None:
            text += f"({self.rule[0]},{self.rule[1]})"
        if self.kind is ErrorKind.ILL_FORMED_CONTEXT and self.inner is not None:
            text += f" at entry {self.entry}: {self.inner.message}"
        if self.detail:
            text += f": {self.detail}"
        return text

    def __str__(self) -> str:
        return self.message
