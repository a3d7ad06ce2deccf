from lambdacube import (
    CC, PROP, TYPE, Context, MVar, Var, contents, contents_context, convertible, infer,
    is_marked_normal, lift_translate, marked_infer, named_system, star_context, star_translate,
)
from lambdacube.marked import marked_convertible
from lambdacube.properties import ENCODING_PROPERTIES, reaches, run_properties
from lambdacube.terms import Abs, App

STLC = named_system("stlc")


def test_star_examples(g0):
    r = star_translate(g0, PROP, CC)
    assert (r.term, r.type) == (PROP, TYPE)
    ctx = Context.of(("P", PROP), ("a", Var(0)))
    r = star_translate(ctx, Var(0), STLC)
    assert r.term == MVar(0, MVar(1, PROP))
    assert r.type == MVar(1, PROP)


def test_star_context(g0):
    mctx = star_context(g0, STLC)
    assert contents_context(mctx) == g0
    assert mctx.entries[2].type == MVar(1, PROP)


def test_star_round_trip(small_corpus):
    for c in small_corpus:
        r = star_translate(c.ctx, c.term, c.system)
        assert contents(r.term) == c.term
        assert is_marked_normal(r.term) and is_marked_normal(r.type)
        assert marked_convertible(marked_infer(r.ctx, r.term, c.system), r.type)
        assert convertible(contents(r.type), infer(c.ctx, c.term, c.system))


def test_star_normalizes_redexes(redex_cases):
    for c in redex_cases[:40]:
        r = star_translate(c.ctx, c.term, c.system)
        assert is_marked_normal(r.term)
        assert convertible(contents(r.term), c.term)


def test_lift_keeps_the_term(redex_cases):
    for c in redex_cases[:40]:
        lift = lift_translate(c.ctx, c.term, c.system)
        assert contents(lift.term) == c.term


def test_reaches_needs_at_least_one_step():
    ident = Abs("x", PROP, Var(0))
    assert not reaches(PROP, PROP)
    assert reaches(App(ident, PROP), PROP)
    assert not reaches(PROP, App(ident, PROP))


def test_encoding_lemmas_small(redex_cases):
    report = run_properties(redex_cases[:25], ENCODING_PROPERTIES)
    assert report.ok, report.render()
