"""ASCII concrete syntax for terms, marked terms and contexts.

Grammar (``term`` is the entry point)::

    term   ::= '[' x ':' term ']' term          abstraction
             | '(' x ':' term ')' term          product
             | app ( '->' term )?               arrow, right associative
    app    ::= atom+ ( binder )?                left associative
    atom   ::= Prop | Type | x | '(' term ')'   optionally followed by '^(' term ')'

Marks (``^( )``) are only accepted by the marked parsers, and there every
variable, application and abstraction must carry one.  ``#`` starts a
comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .errors import CubeError, ErrorKind, TypingError
from .marked import MAbs, MApp, MarkedContext, MarkedTerm, MProd, MVar, mshift, moccurs_free
from .terms import PROP, TYPE, Abs, App, Context, Prod, Sort, Term, Var, occurs_free, shift, spine

__all__ = [
    "SourceSpan", "ParseError", "parse_term", "parse_marked", "parse_context",
    "parse_marked_context", "print_term", "print_marked", "print_context",
    "print_marked_context",
]

KEYWORDS = {"Prop", "Type"}


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int
    line: int
    column: int

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValueError("span start after end")

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class ParseError(CubeError):
    def __init__(self, span: SourceSpan, message: str, expected: Sequence[str] = ()) -> None:
        if not message:
            raise ValueError("parse errors need a message")
        self.span = span
        self.message = message
        self.expected = tuple(expected)
        text = f"{span}: {message}"
        if self.expected:
            text += f" (expected {', '.join(self.expected)})"
        super().__init__(text)


# -- tokens ------------------------------------------------------------------

@dataclass(frozen=True)
class _Tok:
    kind: str  # 'ident', 'sep', 'eof', or the symbol itself
    text: str
    span: SourceSpan


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<sep>[;\n])
  | (?P<arrow>->)
  | (?P<sym>[\[\]():^])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)


def _tokenize(src: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        span = SourceSpan(pos, pos + 1 if m is None else m.end(), line, pos - line_start + 1)
        if m is None:
            raise ParseError(span, f"unexpected character {src[pos]!r}")
        kind = m.lastgroup
        text = m.group()
        if kind == "sep":
            toks.append(_Tok("sep", text, span))
            if text == "\n":
                line, line_start = line + 1, m.end()
        elif kind == "arrow":
            toks.append(_Tok("->", text, span))
        elif kind == "sym":
            toks.append(_Tok(text, text, span))
        elif kind == "ident":
            toks.append(_Tok("ident", text, span))
        pos = m.end()
    toks.append(_Tok("eof", "", SourceSpan(pos, pos, line, pos - line_start + 1)))
    return toks


# -- raw syntax trees --------------------------------------------------------

@dataclass
class _Raw:
    kind: str  # sort, var, app, abs, prod
    span: SourceSpan
    name: str = ""
    kids: list[_Raw] = field(default_factory=list)
    mark: Optional[_Raw] = None


class _Parser:
    def __init__(self, src: str, marked: bool) -> None:
        self.toks = _tokenize(src)
        self.i = 0
        self.marked = marked
        self.newlines_are_space = True

    # token helpers
    def peek(self, k: int = 0) -> _Tok:
        j = self.i
        seen = -1
        while True:
            tok = self.toks[j]
            if not (tok.kind == "sep" and tok.text == "\n" and self.newlines_are_space):
                seen += 1
                if seen == k or tok.kind == "eof":
                    return tok
            j += 1

    def advance(self) -> _Tok:
        while True:
            tok = self.toks[self.i]
            self.i += 1
            if not (tok.kind == "sep" and tok.text == "\n" and self.newlines_are_space):
                return tok

    def expect(self, kind: str, what: str = "") -> _Tok:
        tok = self.peek()
        if tok.kind != kind:
            shown = tok.text if tok.kind != "eof" else "end of input"
            shown = "newline" if shown == "\n" else shown
            raise ParseError(tok.span, f"unexpected {shown!r}", [what or kind])
        return self.advance()

    # grammar
    def term(self) -> _Raw:
        tok = self.peek()
        if tok.kind == "[":
            return self.binder("abs", "[", "]")
        if tok.kind == "(" and self.peek(1).kind == "ident" and self.peek(2).kind == ":":
            return self.binder("prod", "(", ")")
        left = self.app()
        if self.peek().kind == "->":
            self.advance()
            right = self.term()
            return _Raw("prod", left.span, "->", [left, right])
        return left

    def binder(self, kind: str, open_: str, close: str) -> _Raw:
        start = self.expect(open_)
        name = self.expect("ident", "a binder name")
        if name.text in KEYWORDS:
            raise ParseError(name.span, f"{name.text} cannot be bound")
        self.expect(":")
        dom = self.term()
        self.expect(close)
        body = self.term()
        return _Raw(kind, start.span, name.text, [dom, body])

    def starts_atom(self) -> bool:
        tok = self.peek()
        return tok.kind in ("ident", "(")

    def app(self) -> _Raw:
        head = self.atom()
        while True:
            if self.starts_atom():
                head = _Raw("app", head.span, kids=[head, self.atom()])
            elif self.peek().kind == "[":
                return _Raw("app", head.span, kids=[head, self.binder("abs", "[", "]")])
            else:
                return head

    def atom(self) -> _Raw:
        tok = self.peek()
        if tok.kind == "ident":
            self.advance()
            node = _Raw("sort" if tok.text in KEYWORDS else "var", tok.span, tok.text)
        elif tok.kind == "(":
            self.advance()
            node = self.term()
            self.expect(")")
        else:
            shown = "end of input" if tok.kind == "eof" else tok.text
            raise ParseError(tok.span, f"unexpected {shown!r}", ["identifier", "'('", "'['"])
        if self.peek().kind == "^":
            caret = self.advance()
            if not self.marked:
                raise ParseError(caret.span, "marks are only allowed in marked terms")
            if node.kind not in ("var", "app", "abs"):
                raise ParseError(caret.span, f"a {node.kind} cannot carry a mark")
            if node.mark is not None:
                raise ParseError(caret.span, "term already carries a mark")
            self.expect("(", "'(' after '^'")
            node.mark = self.term()
            self.expect(")")
        return node

    def at_end(self) -> None:
        tok = self.peek()
        if tok.kind != "eof":
            raise ParseError(tok.span, f"unexpected {tok.text!r} after the term", ["end of input"])

    def context(self) -> list[tuple[_Tok, _Raw]]:
        self.newlines_are_space = False
        entries = []
        while True:
            while self.peek().kind == "sep":
                self.advance()
            if self.peek().kind == "eof":
                return entries
            name = self.expect("ident", "a declaration name")
            if name.text in KEYWORDS:
                raise ParseError(name.span, f"{name.text} cannot be declared")
            self.expect(":")
            ty = self.term()
            tok = self.peek()
            if tok.kind not in ("sep", "eof"):
                raise ParseError(tok.span, f"unexpected {tok.text!r}", ["';'", "newline"])
            entries.append((name, ty))


# -- resolution to de Bruijn -------------------------------------------------

def _lookup(names: list[str], raw: _Raw) -> int:
    for k in range(len(names) - 1, -1, -1):
        if names[k] == raw.name:
            return len(names) - 1 - k
    raise TypingError(ErrorKind.UNBOUND_VARIABLE,
                      detail=f"unbound identifier {raw.name!r} at {raw.span}")


def _resolve(raw: _Raw, names: list[str]) -> Term:
    if raw.kind == "sort":
        return Sort(raw.name)
    if raw.kind == "var":
        return Var(_lookup(names, raw))
    if raw.kind == "app":
        return App(_resolve(raw.kids[0], names), _resolve(raw.kids[1], names))
    dom = _resolve(raw.kids[0], names)
    if raw.kind == "prod" and raw.name == "->":
        return Prod("_", dom, shift(_resolve(raw.kids[1], names), 1))
    body = _resolve(raw.kids[1], names + [raw.name])
    return (Abs if raw.kind == "abs" else Prod)(raw.name, dom, body)


def _resolve_marked(raw: _Raw, names: list[str]) -> MarkedTerm:
    if raw.kind in ("var", "app", "abs"):
        if raw.mark is None:
            raise ParseError(raw.span, f"missing mark on {raw.kind}", ["'^('"])
        mark = _resolve_marked(raw.mark, names)
    if raw.kind == "sort":
        return Sort(raw.name)
    if raw.kind == "var":
        return MVar(_lookup(names, raw), mark)
    if raw.kind == "app":
        return MApp(_resolve_marked(raw.kids[0], names), _resolve_marked(raw.kids[1], names), mark)
    dom = _resolve_marked(raw.kids[0], names)
    if raw.kind == "prod":
        if raw.name == "->":
            return MProd("_", dom, mshift(_resolve_marked(raw.kids[1], names), 1))
        return MProd(raw.name, dom, _resolve_marked(raw.kids[1], names + [raw.name]))
    return MAbs(raw.name, dom, _resolve_marked(raw.kids[1], names + [raw.name]), mark)


def _names(ctx: Union[Context, MarkedContext, Sequence[str], None]) -> list[str]:
    if ctx is None:
        return []
    if isinstance(ctx, (Context, MarkedContext)):
        return ctx.names()
    return list(ctx)


def parse_term(src: str, ctx: Union[Context, Sequence[str], None] = None) -> Term:
    """Parse ``src``; free identifiers resolve against ``ctx`` (names or a context)."""
    p = _Parser(src, marked=False)
    raw = p.term()
    p.at_end()
    return _resolve(raw, _names(ctx))


def parse_marked(src: str, ctx: Union[MarkedContext, Sequence[str], None] = None) -> MarkedTerm:
    p = _Parser(src, marked=True)
    raw = p.term()
    p.at_end()
    return _resolve_marked(raw, _names(ctx))


def parse_context(src: str) -> Context:
    """``name : type`` entries separated by ``;`` or newlines, outermost first."""
    names: list[str] = []
    out = []
    for name, raw in _Parser(src, marked=False).context():
        out.append((name.text, _resolve(raw, names)))
        names.append(name.text)
    return Context.of(*out)


def parse_marked_context(src: str) -> MarkedContext:
    names: list[str] = []
    out = []
    for name, raw in _Parser(src, marked=True).context():
        out.append((name.text, _resolve_marked(raw, names)))
        names.append(name.text)
    return MarkedContext.of(*out)


# -- printing ------------------------------------------------------------------

_SUFFIX = re.compile(r"^(.*?)(\d*)$")


def _fresh(hint: str, used: list[str]) -> str:
    base = "x" if hint in ("", "_") or hint in KEYWORDS else hint
    if base not in used:
        return base
    stem = _SUFFIX.match(base).group(1) or "x"
    n = 1
    while f"{stem}{n}" in used:
        n += 1
    return f"{stem}{n}"


def _name_of(names: list[str], index: int) -> str:
    if index >= len(names):
        return f"#{index}"  # unbound: printed, but never parses back
    return names[len(names) - 1 - index]


class _Printer:
    """Shared layout for both term languages; ``marked`` picks the node types."""

    def __init__(self, marked: bool) -> None:
        self.marked = marked

    def top(self, t, names: list[str]) -> str:
        if isinstance(t, Sort):
            return t.name
        if isinstance(t, (Var, MVar)):
            return self.marks(_name_of(names, t.index), t, names)
        if isinstance(t, (Abs, MAbs)):
            x = _fresh(t.hint, names)
            text = f"[{x}:{self.top(t.dom, names)}] {self.top(t.body, names + [x])}"
            return f"({text})^({self.top(t.mark, names)})" if self.marked else text
        if isinstance(t, (Prod, MProd)):
            uses = moccurs_free(t.cod, 0) if self.marked else occurs_free(t.cod, 0)
            if not uses:
                cod = mshift(t.cod, -1) if self.marked else shift(t.cod, -1)
                return f"{self.arg(t.dom, names)} -> {self.top(cod, names)}"
            x = _fresh(t.hint, names)
            return f"({x}:{self.top(t.dom, names)}) {self.top(t.cod, names + [x])}"
        if isinstance(t, App):
            head, args = spine(t)
            return "(" + " ".join([self.arg(head, names)] + [self.arg(a, names) for a in args]) + ")"
        if isinstance(t, MApp):
            return f"({self.arg(t.fun, names)} {self.arg(t.arg, names)})^({self.top(t.mark, names)})"
        raise TypeError(f"cannot print {t!r}")

    def arg(self, t, names: list[str]) -> str:
        text = self.top(t, names)
        if isinstance(t, (Prod, MProd)) or (isinstance(t, Abs)):
            return f"({text})"
        return text

    def marks(self, text: str, t, names: list[str]) -> str:
        return f"{text}^({self.top(t.mark, names)})" if self.marked else text


def print_term(t: Term, ctx: Union[Context, Sequence[str], None] = None) -> str:
    return _Printer(False).top(t, _names(ctx))


def print_marked(t: MarkedTerm, ctx: Union[MarkedContext, Sequence[str], None] = None) -> str:
    return _Printer(True).top(t, _names(ctx))


def print_context(ctx: Context, sep: str = "; ") -> str:
    names = ctx.names()
    return sep.join(f"{d.hint} : {print_term(d.type, names[:i])}" for i, d in enumerate(ctx.entries))


def print_marked_context(ctx: MarkedContext, sep: str = "; ") -> str:
    names = ctx.names()
    return sep.join(f"{d.hint} : {print_marked(d.type, names[:i])}" for i, d in enumerate(ctx.entries))
