import pytest

from lambdacube import (
    CC, PROP, Context, LabeledTerm, PreconditionError, check, descend, eta_long,
    eta_long_marked, measure_marked, measure_unmarked, named_system,
    normalize, parse_context, parse_marked, parse_term, plus_translate, predecessors,
    predecessors_prime, print_marked, print_term, star_translate,
)
from lambdacube.etalong import Measurer, normal_type
from lambdacube.marked import MProd, MVar, contents, marked_subterms, mshift
from lambdacube.reduction import is_beta_normal
from lambdacube.terms import App, children
from oracles import oracle_measure

STLC = named_system("stlc")


def lt(ctx, src):
    return LabeledTerm(ctx, parse_term(src, ctx))


def test_measure_marked_examples():
    P = MVar(0, PROP)
    assert measure_marked(PROP) == 1
    assert measure_marked(P) == 2
    assert measure_marked(MVar(1, MProd("x", P, mshift(P, 1)))) == 5


def test_measure_unmarked_examples(g0):
    assert measure_unmarked(Context(), PROP, CC) == 1
    assert measure_unmarked(parse_context("P : Prop"), parse_term("P", ["P"]), CC) == 2
    assert measure_unmarked(g0, parse_term("f", g0), CC) == 5
    with pytest.raises(PreconditionError):
        measure_unmarked(g0, parse_term("([x:P] x) a", g0), CC)


def test_measure_agrees_with_oracle(small_corpus):
    for c in small_corpus:
        assert measure_unmarked(c.ctx, c.term, c.system) == oracle_measure(c.ctx, c.term, c.system)


def test_predecessors_examples(g0):
    p_ctx = parse_context("P : Prop")
    assert predecessors(lt(p_ctx, "P"), CC) == ()
    assert set(predecessors(lt(g0, "a"), CC)) == {lt(g0, "P")}
    assert set(predecessors(lt(g0, "(f a)"), CC)) == {lt(g0, "f"), lt(g0, "a"), lt(g0, "P")}


def test_descend_examples(g0):
    d = descend(LabeledTerm(Context(), PROP), CC)
    assert (d.downset, d.depth) == ((), 0)
    d = descend(lt(g0, "a"), CC)
    assert (set(d.downset), d.depth) == ({lt(g0, "P")}, 1)
    # f contributes its type P -> P, whose strict subterms are P and the
    # codomain P under the anonymous binder; the chain is (f a) > f > P -> P > P
    d = descend(lt(g0, "(f a)"), CC)
    under = g0.extend("_", parse_term("P", g0))
    expected = {lt(g0, "f"), lt(g0, "a"), lt(g0, "P"), lt(g0, "P -> P"), lt(under, "P")}
    assert set(d.downset) == expected
    assert d.depth == 3


def test_measure_decreases_along_both_orders(small_corpus):
    for c in small_corpus:
        m = Measurer(c.system, 100_000)
        for prime in (False, True):
            for a, b in descend(LabeledTerm(c.ctx, c.term), c.system, prime=prime).edges:
                assert m(b.ctx, b.term) < m(a.ctx, a.term)


def test_eta_long_examples(g0):
    assert print_term(eta_long(g0, parse_term("f", g0), STLC), g0) == "[y:P] (f y)"
    assert eta_long(g0, parse_term("a", g0), STLC) == parse_term("a", g0)
    assert eta_long(g0, parse_term("[x:P] x", g0), STLC) == parse_term("[x:P] x", g0)
    dep = parse_context("T : Prop; Pr : T -> Prop; g : (x:T) (Pr x)")
    assert eta_long(dep, parse_term("g", dep), CC) == parse_term("[x:T] (g x)", dep)
    with pytest.raises(PreconditionError):
        eta_long(g0, parse_term("([x:P] x) a", g0), STLC)


def test_eta_long_laws(small_corpus):
    for c in small_corpus:
        certs = []
        e = eta_long(c.ctx, c.term, c.system, certificates=certs)
        assert is_beta_normal(e)
        assert normalize(e) == c.term
        assert eta_long(c.ctx, e, c.system) == e
        check(c.ctx, e, normal_type(c.ctx, c.term, c.system), c.system)
        assert all(x < t for x, t in certs)


def test_eta_long_marked_examples(g0):
    star = star_translate(g0, parse_term("f", g0), STLC)
    expected = "([y:P^(Prop)] (f^(P^(Prop) -> P^(Prop)) y^(P^(Prop)))^(P^(Prop)))^(P^(Prop) -> P^(Prop))"
    assert print_marked(eta_long_marked(star.ctx, star.term, STLC), star.ctx) == expected
    assert eta_long_marked(star.ctx, PROP, STLC) == PROP
    assert plus_translate(g0, parse_term("f", g0), STLC) == parse_marked(expected, star.ctx)
    assert print_marked(plus_translate(g0, parse_term("a", g0), STLC), star.ctx) == "a^(P^(Prop))"
    assert plus_translate(Context(), PROP, CC) == PROP


def test_contents_commutes_with_eta_long(small_corpus):
    for c in small_corpus:
        star = star_translate(c.ctx, c.term, c.system)
        plus = eta_long_marked(star.ctx, star.term, c.system)
        assert contents(plus) == eta_long(c.ctx, contents(star.term), c.system)


def test_predecessors_prime_examples(g0):
    assert set(predecessors_prime(lt(g0, "a"), CC)) == {lt(g0, "P")}
    ho = parse_context("A : Prop; G : (A -> Prop) -> Prop; F : A -> Prop; x : G F")
    assert lt(ho, "G F") in predecessors(lt(ho, "x"), CC)
    assert lt(ho, "G [y:A] (F y)") in predecessors_prime(lt(ho, "x"), CC)
    p_ctx = parse_context("P : Prop")
    assert predecessors_prime(lt(p_ctx, "P"), CC) == ()


def _embeds(small, big, k, weaken=False):
    for d, s in marked_subterms(big):
        if d == k and s == small:
            return True
        if weaken and d > k and any(s == mshift(small, d - k, c) for c in range(k + 1)):
            return True
    return False


def _function_positions(t, ctx, out):
    if isinstance(t, App):
        out.add(LabeledTerm(ctx, t.fun))
    for child, cctx in children(t, ctx):
        _function_positions(child, cctx, out)
    return out


def test_star_embeds_the_order(small_corpus):
    for c in small_corpus:
        u = LabeledTerm(c.ctx, c.term)
        big = star_translate(c.ctx, c.term, c.system).term
        for t in predecessors(u, c.system):
            small = star_translate(t.ctx, t.term, c.system).term
            assert _embeds(small, big, len(t.ctx) - len(c.ctx))


def test_plus_embeds_the_primed_order_away_from_function_positions(small_corpus):
    # eta-expansion wraps u in fresh binders, so predecessors reappear
    # weakened under them
    for c in small_corpus:
        u = LabeledTerm(c.ctx, c.term)
        big = plus_translate(c.ctx, c.term, c.system)
        heads = _function_positions(c.term, c.ctx, set())
        for t in predecessors_prime(u, c.system):
            if t in heads:
                continue
            small = plus_translate(t.ctx, t.term, c.system)
            assert _embeds(small, big, len(t.ctx) - len(c.ctx), weaken=True)


def test_plus_does_not_embed_function_positions(g0):
    # f < (f a), but f expands to [y:P] (f y), which is not inside (f a)+
    u, t = lt(g0, "(f a)"), lt(g0, "f")
    assert t in predecessors_prime(u, STLC)
    big = plus_translate(g0, u.term, STLC)
    small = plus_translate(g0, t.term, STLC)
    assert not _embeds(small, big, 0, weaken=True)
