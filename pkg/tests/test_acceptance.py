"""The eight acceptance criteria, one test each.

Each test records a one-line PASS/FAIL verdict with its runtime; pytest
prints them in the terminal summary, and running this file directly
prints them to stdout.
"""

import functools
import random
import sys
import time
import traceback

from lambdacube import (
    ALL_SYSTEMS, CC, Abs, App, Context, LabeledTerm, Prod, PROP, TYPE, TypingError, Var,
    check, contents, descend, eta_long, infer, is_marked_normal, marked_infer, marked_normalize,
    measure_unmarked, parse_context, parse_marked, parse_marked_context, parse_term, predecessors,
    print_term, star_translate, wf_context,
)
from lambdacube.etalong import Measurer, normal_type
from lambdacube.generate import mixed_cases, normal_corpus, redex_corpus
from lambdacube.marked import marked_convertible, marked_reducts, marked_step, marked_subterms
from lambdacube.properties import ENCODING_PROPERTIES, run_properties
from lambdacube.reduction import ReductionKind, is_beta_normal, is_eta_redex, normalize

RESULTS: dict[int, str] = {}
FUZZ_SEED = 2024


def criterion(number, title, limit=None):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            verdict, note = "FAIL", ""
            try:
                note = fn(*args, **kwargs) or ""
                elapsed = time.perf_counter() - start
                if limit is not None and elapsed >= limit:
                    note = f"over the {limit:g}s limit"
                    raise AssertionError(f"criterion {number} took {elapsed:.2f}s, limit {limit}s")
                verdict = "PASS"
            except BaseException as exc:
                note = note or f"{type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
                raise
            finally:
                elapsed = time.perf_counter() - start
                RESULTS[number] = f"criterion {number}: {verdict:4} {elapsed:7.2f}s  {title}" + (f"  ({note})" if note else "")
        return wrapper
    return deco


@functools.lru_cache(maxsize=None)
def shared_corpus():
    return tuple(normal_corpus(seed=0, per_system=70))


# -- 1 ------------------------------------------------------------------------------

TP = "T : Prop; y : T^(Prop) -> T^(Prop)"
BLOCKED = ("([x:T^(Prop)] (y^((([z:T^(Prop)] (T^(Prop) -> T^(Prop)))^(T^(Prop) -> Prop) "
           "x^(T^(Prop)))^(Prop)) x^(T^(Prop)))^(T^(Prop)))^(T^(Prop) -> T^(Prop))")
UNBLOCKED = "([x:T^(Prop)] (y^(T^(Prop) -> T^(Prop)) x^(T^(Prop)))^(T^(Prop)))^(T^(Prop) -> T^(Prop))"


@criterion(1, "eta-normal marked term with an eta-redex as contents", limit=1.0)
def test_criterion_1_blocked_eta_redex():
    ctx = parse_marked_context(TP)
    t = parse_marked(BLOCKED, ctx)
    marked_infer(ctx, t, CC)
    assert not list(marked_reducts(t, ReductionKind.ETA))
    assert contents(t) == Abs("x", Var(1), App(Var(1), Var(0)))
    assert is_eta_redex(contents(t))
    mid = marked_step(t)
    assert mid == parse_marked(UNBLOCKED, ctx)
    assert list(marked_reducts(mid, ReductionKind.ETA))
    y = parse_marked("y^(T^(Prop) -> T^(Prop))", ctx)
    assert marked_normalize(t) == y
    assert contents(marked_normalize(t)) == Var(0)


# -- 2 ------------------------------------------------------------------------------


def _typable(ctx, t, sys):
    try:
        infer(ctx, t, sys)
        return True
    except TypingError:
        return False


def _well_formed(ctx, sys):
    try:
        wf_context(ctx, sys)
        return True
    except TypingError:
        return False


@criterion(2, "8x2 system matrix", limit=1.0)
def test_criterion_2_system_matrix():
    poly_id = parse_term("[A:Prop][x:A]x", [])
    dependent = parse_context("T : Prop; Pr : T -> Prop")
    table = {s.label: (_typable(Context(), poly_id, s), _well_formed(dependent, s)) for s in ALL_SYSTEMS}
    expected = {
        "stlc": (False, False), "lambda-p": (False, True), "f": (True, False),
        "f-omega-weak": (False, False), "f-omega": (True, False), "lambda-p2": (True, True),
        "lambda-p-omega-weak": (False, True), "cc": (True, True),
    }
    assert table == expected
    for s in ALL_SYSTEMS:
        assert table[s.label] == ((TYPE, PROP) in s, (PROP, TYPE) in s)


# -- 3 ------------------------------------------------------------------------------


@criterion(3, "round trip through the marked translation on >=500 normal terms", limit=60.0)
def test_criterion_3_round_trip():
    corpus = shared_corpus()
    assert len(corpus) >= 500
    assert {c.system.label for c in corpus} == {s.label for s in ALL_SYSTEMS}
    for c in corpus:
        r = star_translate(c.ctx, c.term, c.system)
        assert contents(r.term) == c.term, print_term(c.term, c.ctx)
        assert marked_convertible(marked_infer(r.ctx, r.term, c.system), r.type)
        assert is_marked_normal(r.term) and is_marked_normal(r.type)
    return f"{len(corpus)} terms"


# -- 4 ------------------------------------------------------------------------------


def _embedded(small, big, depth):
    return any(d == depth and s == small for d, s in marked_subterms(big))


@criterion(4, "well-foundedness witnesses for both orders")
def test_criterion_4_well_foundedness():
    corpus = shared_corpus()
    edges = 0
    pairs = []
    for c in corpus:
        m = Measurer(c.system, 100_000)
        root = LabeledTerm(c.ctx, c.term)
        for prime in (False, True):
            d = descend(root, c.system, prime=prime)
            for a, b in d.edges:
                assert m(b.ctx, b.term) < m(a.ctx, a.term)
                edges += 1
        pairs.extend((c, t) for t in predecessors(root, c.system))
    sample = random.Random(4).sample(pairs, 250)
    for c, t in sample:
        big = star_translate(c.ctx, c.term, c.system).term
        small = star_translate(t.ctx, t.term, c.system).term
        assert _embedded(small, big, len(t.ctx) - len(c.ctx))
    return f"{edges} edges, {len(sample)} embedded pairs"


# -- 5 ------------------------------------------------------------------------------


@criterion(5, "eta-long laws and termination certificates", limit=60.0)
def test_criterion_5_eta_long_laws():
    certificates = 0
    for c in shared_corpus():
        certs: list[tuple[int, int]] = []
        e = eta_long(c.ctx, c.term, c.system, certificates=certs)
        assert is_beta_normal(e)
        assert normalize(e) == c.term
        assert eta_long(c.ctx, e, c.system) == e
        check(c.ctx, e, normal_type(c.ctx, c.term, c.system), c.system)
        assert all(x < t for x, t in certs)
        certificates += len(certs)
    return f"{certificates} certificates"


# -- 6 ------------------------------------------------------------------------------


@criterion(6, "metatheory fuzz, 1000 cases", limit=300.0)
def test_criterion_6_fuzz():
    per_system = 1000 // len(ALL_SYSTEMS)
    cases = [c for s in ALL_SYSTEMS for c in mixed_cases(s, FUZZ_SEED, per_system)]
    assert len(cases) == 1000
    report = run_properties(cases)
    assert report.ok, report.render()
    return f"seed {FUZZ_SEED}, {len(report.counts)} properties"


# -- 7 ------------------------------------------------------------------------------


@criterion(7, "encoding lemmas on a 100-term corpus")
def test_criterion_7_encoding():
    cases = redex_corpus(seed=0, per_system=13)[:100]
    assert len(cases) == 100
    report = run_properties(cases, ENCODING_PROPERTIES)
    assert report.ok, report.render()


# -- 8 ------------------------------------------------------------------------------


@criterion(8, "worked measures and the printed eta-long form")
def test_criterion_8_worked_values():
    g0 = parse_context("P : Prop; f : P -> P")
    assert measure_unmarked(g0, PROP, CC) == 1
    assert measure_unmarked(g0, parse_term("P", g0), CC) == 2
    assert measure_unmarked(g0, parse_term("f", g0), CC) == 5
    out = print_term(eta_long(g0, parse_term("f", g0), CC), g0)
    assert out.encode() == b"[y:P] (f y)"


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for fn in tests:
        try:
            fn()
        except BaseException:
            failed += 1
            traceback.print_exc(limit=1)
    for n in sorted(RESULTS):
        print(RESULTS[n])
    sys.exit(1 if failed else 0)
