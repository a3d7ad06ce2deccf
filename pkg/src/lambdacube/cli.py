"""Command-line front end: ``cube <verb> [options] TERM``.

Exit status: 0 success, 1 semantic failure (type error, failed property),
2 parse or usage error, 3 fuel exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from .errors import CubeError, FuelExhausted, TypingError, UnknownSystem
from .etalong import descend, eta_long, eta_long_marked, measure_marked, measure_unmarked
from .generate import mixed_cases
from .marked import contents
from .properties import run_properties
from .reduction import DEFAULT_FUEL, normalize
from .surface import (
    ParseError, parse_context, parse_marked, parse_marked_context, parse_term,
    print_marked, print_marked_context, print_term,
)
from .terms import Context, LabeledTerm, Term
from .translate import star_translate
from .typecheck import ALL_SYSTEMS, SystemSpec, infer, named_system, wf_context

EXIT_OK, EXIT_SEMANTIC, EXIT_PARSE, EXIT_FUEL = 0, 1, 2, 3


@dataclass
class RunConfig:
    system: SystemSpec
    fuel: int
    ctx_source: str
    term_source: str
    structured: bool
    args: argparse.Namespace


class _Done(Exception):
    """Carries a command's result and diagnostics out of the handler."""

    def __init__(self, lines: list[str], result: Any, diagnostics: list[dict], status: int) -> None:
        self.lines, self.result, self.diagnostics, self.status = lines, result, diagnostics, status


def _default_fuel() -> int:
    env = os.environ.get("CUBE_FUEL")
    if env is None:
        return DEFAULT_FUEL
    try:
        return int(env)
    except ValueError:
        raise UnknownSystem(f"CUBE_FUEL must be an integer, got {env!r}") from None


def _read(source: Optional[str]) -> str:
    """Inline text, or the contents of a file given as ``@path`` or an existing path."""
    if not source:
        return ""
    if source.startswith("@"):
        return Path(source[1:]).read_text(encoding="utf-8")
    if "\n" not in source and Path(source).is_file():
        return Path(source).read_text(encoding="utf-8")
    return source


def _context(cfg: RunConfig) -> Context:
    ctx = parse_context(cfg.ctx_source)
    wf_context(ctx, cfg.system, cfg.fuel)
    return ctx


def _term(cfg: RunConfig, ctx: Context) -> Term:
    return parse_term(cfg.term_source, ctx)


def _normal(cfg: RunConfig, ctx: Context, t: Term) -> Term:
    infer(ctx, t, cfg.system, cfg.fuel)
    return normalize(t, cfg.fuel)


# -- verbs ---------------------------------------------------------------------

def cmd_check(cfg: RunConfig) -> tuple[list[str], Any]:
    ctx = _context(cfg)
    t = _term(cfg, ctx)
    ty = infer(ctx, t, cfg.system, cfg.fuel)
    nf = normalize(ty, cfg.fuel)
    lines = [f"type: {print_term(ty, ctx)}"]
    if nf != ty:
        lines.append(f"normal type: {print_term(nf, ctx)}")
    return lines, {"type": print_term(ty, ctx), "normal_type": print_term(nf, ctx)}


def cmd_nf(cfg: RunConfig) -> tuple[list[str], Any]:
    ctx = _context(cfg)
    text = print_term(_normal(cfg, ctx, _term(cfg, ctx)), ctx)
    return [text], text


def _marked_output(cfg: RunConfig, plus: bool) -> tuple[list[str], Any]:
    ctx = _context(cfg)
    t = _term(cfg, ctx)
    star = star_translate(ctx, t, cfg.system, cfg.fuel)
    term = eta_long_marked(star.ctx, star.term, cfg.system, cfg.fuel) if plus else star.term
    text = print_marked(term, star.ctx)
    return [text], {"term": text, "type": print_marked(star.type, star.ctx),
                    "context": print_marked_context(star.ctx)}


def cmd_eta_long(cfg: RunConfig) -> tuple[list[str], Any]:
    if cfg.args.marked:
        return _marked_output(cfg, plus=True)
    ctx = _context(cfg)
    nf = _normal(cfg, ctx, _term(cfg, ctx))
    text = print_term(eta_long(ctx, nf, cfg.system, cfg.fuel), ctx)
    return [text], text


def cmd_mark(cfg: RunConfig) -> tuple[list[str], Any]:
    return _marked_output(cfg, plus=cfg.args.plus)


def cmd_contents(cfg: RunConfig) -> tuple[list[str], Any]:
    try:
        names = parse_context(cfg.ctx_source).names()
    except ParseError:
        names = parse_marked_context(cfg.ctx_source).names()
    text = print_term(contents(parse_marked(cfg.term_source, names)), names)
    return [text], text


def cmd_measure(cfg: RunConfig) -> tuple[list[str], Any]:
    ctx = _context(cfg)
    t = _term(cfg, ctx)
    if cfg.args.marked:
        value = measure_marked(star_translate(ctx, t, cfg.system, cfg.fuel).term)
    else:
        value = measure_unmarked(ctx, _normal(cfg, ctx, t), cfg.system, cfg.fuel)
    return [str(value)], value


def cmd_descend(cfg: RunConfig) -> tuple[list[str], Any]:
    ctx = _context(cfg)
    root = LabeledTerm(ctx, _normal(cfg, ctx, _term(cfg, ctx)))
    result = descend(root, cfg.system, prime=cfg.args.prime, fuel=cfg.fuel)

    def show(lt: LabeledTerm) -> str:
        text = print_term(lt.term, lt.ctx)
        names = lt.ctx.names()
        extra = [f"{lt.ctx.entries[k].hint} : {print_term(lt.ctx.entries[k].type, names[:k])}"
                 for k in range(len(ctx), len(lt.ctx))]
        return text + ("  under " + "; ".join(extra) if extra else "")

    members = [show(lt) for lt in result.downset]
    lines = [f"  {m}" for m in members]
    lines.append(f"size: {len(members)}")
    lines.append(f"depth: {result.depth}")
    descent_ok: Optional[bool] = None
    if cfg.args.prime:
        lines.append("mu-descent: not checked for the primed order")
    else:
        mu: dict[LabeledTerm, int] = {}

        def m(lt: LabeledTerm) -> int:
            if lt not in mu:
                mu[lt] = measure_unmarked(lt.ctx, lt.term, cfg.system, cfg.fuel)
            return mu[lt]

        bad = [(a, b) for a, b in result.edges if not m(b) < m(a)]
        descent_ok = not bad
        lines.append("mu-descent: OK" if descent_ok else f"mu-descent: {len(bad)} violation(s)")
        if bad:
            raise _Done(lines, None, [{"kind": "MuDescent", "message": f"{len(bad)} edge(s) do not decrease"}],
                        EXIT_SEMANTIC)
    return lines, {"downset": members, "size": len(members), "depth": result.depth,
                   "mu_descent": descent_ok}


def cmd_fuzz(cfg: RunConfig) -> tuple[list[str], Any]:
    count, seed = cfg.args.count, cfg.args.seed
    if count < 1:
        raise UnknownSystem("--count must be at least 1")
    systems = ALL_SYSTEMS if cfg.args.system == "all" else (cfg.system,)
    cases = [c for sys in systems for c in mixed_cases(sys, seed, count)]
    report = run_properties(cases)
    text = report.render().rstrip("\n").split("\n")
    header = f"fuzz: {len(cases)} case(s), seed {seed}, systems {','.join(s.label for s in systems)}"
    lines = [header] + text
    if not report.ok:
        raise _Done(lines, {"cases": len(cases), "failures": len(report.failures)},
                    [{"kind": "PropertyFailure", "property": f.prop, "case": f.index,
                      "term": print_term(f.shrunk.term, f.shrunk.ctx)} for f in report.failures],
                    EXIT_SEMANTIC)
    return lines, {"cases": len(cases), "failures": 0}


COMMANDS: dict[str, Callable[[RunConfig], tuple[list[str], Any]]] = {
    "check": cmd_check, "nf": cmd_nf, "eta-long": cmd_eta_long, "mark": cmd_mark,
    "contents": cmd_contents, "measure": cmd_measure, "descend": cmd_descend, "fuzz": cmd_fuzz,
}


# -- driver -----------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cube", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=list(COMMANDS))
    p.add_argument("term", nargs="?", default="",
                   help="term source, inline or @file (not used by fuzz)")
    p.add_argument("--system", default="cc",
                   help="system name, or 'all' for fuzz (default: cc)")
    p.add_argument("--rules", help="explicit sort pairs such as PP,TP; overrides --system")
    p.add_argument("--context", default="", help="context file, or inline declarations")
    p.add_argument("--fuel", type=int, help="reduction step budget (default: $CUBE_FUEL or 100000)")
    p.add_argument("--format", choices=["text", "structured"], default="text")
    p.add_argument("--marked", action="store_true", help="marked output for eta-long and measure")
    p.add_argument("--plus", action="store_true", help="with mark: eta-long form of the translation")
    p.add_argument("--prime", action="store_true", help="with descend: use the primed order")
    p.add_argument("--count", type=int, default=100, help="fuzz cases per system")
    p.add_argument("--seed", type=int, default=0, help="fuzz seed")
    return p


def _diagnostic(err: Exception) -> dict:
    if isinstance(err, TypingError):
        out: dict[str, Any] = {"kind": err.kind.value, "message": err.message, "path": list(err.path)}
        if err.rule is not None:
            out["rule"] = [str(s) for s in err.rule]
        return out
    if isinstance(err, ParseError):
        return {"kind": "ParseError", "message": err.message, "line": err.span.line,
                "column": err.span.column, "expected": list(err.expected)}
    return {"kind": type(err).__name__, "message": str(err)}


def _status(err: Exception) -> int:
    if isinstance(err, FuelExhausted):
        return EXIT_FUEL
    if isinstance(err, (ParseError, UnknownSystem, OSError)):
        return EXIT_PARSE
    return EXIT_SEMANTIC


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        # intermixed parsing lets the term follow options
        args = _parser().parse_intermixed_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    structured = args.format == "structured"
    system_label = args.rules or args.system
    lines: list[str] = []
    result: Any = None
    diagnostics: list[dict] = []
    status = EXIT_OK
    try:
        if args.rules:
            system = named_system(args.rules)
        elif args.command == "fuzz" and args.system == "all":
            system = named_system("cc")
        else:
            system = named_system(args.system)
        if args.command != "fuzz" or args.system != "all":
            system_label = system.label
        fuel = args.fuel if args.fuel is not None else _default_fuel()
        if fuel < 1:
            raise UnknownSystem("fuel must be at least 1")
        if args.command != "fuzz" and not args.term:
            raise UnknownSystem(f"{args.command} needs a term")
        cfg = RunConfig(system, fuel, _read(args.context), _read(args.term), structured, args)
        lines, result = COMMANDS[args.command](cfg)
    except _Done as done:
        lines, result, diagnostics, status = done.lines, done.result, done.diagnostics, done.status
    except (CubeError, OSError, RecursionError) as exc:
        if isinstance(exc, RecursionError):
            exc = FuelExhausted(0, "recursion depth")
        diagnostics = [_diagnostic(exc)]
        status = _status(exc)

    if structured:
        record = {"command": args.command, "system": system_label, "input": args.term,
                  "result": result, "diagnostics": diagnostics}
        out.write(json.dumps(record, sort_keys=False) + "\n")
    else:
        for line in lines:
            out.write(line + "\n")
        for d in diagnostics:
            where = f" at {d['line']}:{d['column']}" if "line" in d else ""
            path = f" (path {'.'.join(map(str, d['path']))})" if d.get("path") else ""
            err.write(f"error: {d['message']}{where}{path}\n")
    return status


if __name__ == "__main__":
    raise SystemExit(main())
