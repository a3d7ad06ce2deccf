import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lambdacube.errors import ShiftUnderflow
from lambdacube.terms import (
    PROP, TYPE, Abs, App, Context, LabeledTerm, Prod, Var, free_indices, is_scoped,
    occurs_free, shift, strict_subterms, subst, subterm_at,
)
from oracles import oracle_subst

P, F, A = Var(2), Var(1), Var(0)  # P : Prop; f : P -> P; a : P


def terms(max_free=4):
    leaves = st.one_of(st.just(PROP), st.integers(0, max_free).map(Var))

    def grow(sub):
        hint = st.sampled_from(["x", "y", "_"])
        return st.one_of(
            st.builds(App, sub, sub),
            st.builds(Abs, hint, sub, sub),
            st.builds(Prod, hint, sub, sub),
        )

    return st.recursive(leaves, grow, max_leaves=12)


def test_shift_examples():
    assert shift(Var(0), 1, 0) == Var(1)
    assert shift(Abs("_", PROP, Var(0)), 1, 0) == Abs("_", PROP, Var(0))
    assert shift(App(Var(0), Var(2)), 3, 1) == App(Var(0), Var(5))


def test_shift_underflow():
    with pytest.raises(ShiftUnderflow):
        shift(Var(0), -1)
    assert shift(Var(3), -1, 0) == Var(2)


def test_subst_examples():
    a = Var(7)
    assert subst(Var(0), 0, a) == a
    assert subst(App(Var(1), Var(0)), 0, a) == App(Var(0), a)
    # derived with the named-variable oracle; the domain is a closed type
    closed = Prod("_", PROP, PROP)
    assert subst(Abs("_", closed, Var(1)), 0, Var(0)) == Abs("_", closed, Var(1))
    assert oracle_subst(Abs("_", closed, Var(1)), 0, Var(0), depth=1) == Abs("_", closed, Var(1))


def test_occurs_free_examples():
    assert occurs_free(Var(0), 0)
    assert not occurs_free(Abs("_", PROP, Var(0)), 0)
    assert occurs_free(Abs("_", Var(0), Var(1)), 0)


def test_hints_do_not_affect_equality():
    assert Abs("x", PROP, Var(0)) == Abs("y", PROP, Var(0))
    assert hash(Prod("x", PROP, Var(0))) == hash(Prod("_", PROP, Var(0)))


def test_sorts_are_distinct():
    assert PROP != TYPE and PROP == PROP


@settings(max_examples=300, deadline=None)
@given(terms(), terms(), st.integers(0, 3))
def test_shift_subst_coherence(t, u, n):
    assert shift(subst(t, 0, u), n, 0) == subst(shift(t, n, 1), 0, shift(u, n, 0))


@settings(max_examples=300, deadline=None)
@given(terms(), terms(), st.integers(0, 4))
def test_subst_agrees_with_named_oracle(t, u, k):
    depth = 1 + max([k, *free_indices(t), *free_indices(u)])
    assert subst(t, k, u) == oracle_subst(t, k, u, depth)


@settings(max_examples=300, deadline=None)
@given(terms(), terms(), st.integers(0, 5))
def test_free_variables_of_substitution(t, u, k):
    if occurs_free(subst(t, 0, u), k):
        assert occurs_free(t, k + 1) or occurs_free(u, k)


def _lt(ctx, t):
    return LabeledTerm(ctx, t)


def test_strict_subterms_examples(g0):
    assert strict_subterms(_lt(Context(), PROP)) == ()
    assert set(strict_subterms(_lt(g0, App(F, A)))) == {_lt(g0, F), _lt(g0, A)}
    # [x:P](f x) in g0: derived by unfolding the definition by hand
    inner = g0.extend("x", P)
    got = set(strict_subterms(_lt(g0, Abs("x", P, App(Var(2), Var(0))))))
    assert got == {_lt(g0, P), _lt(inner, App(Var(2), Var(0))), _lt(inner, Var(2)), _lt(inner, Var(0))}


def test_strict_subterms_dedupe_and_scope(small_corpus):
    for c in small_corpus:
        subs = strict_subterms(_lt(c.ctx, c.term))
        assert len(subs) == len(set(subs))
        assert all(is_scoped(s.term, len(s.ctx)) for s in subs)


def test_labeled_terms_compare_contexts_strictly(g0):
    other = Context.of(("P", PROP), ("f", Prod("_", Var(0), Var(1))), ("a", Var(1)))
    assert _lt(g0, A) == _lt(other, A)
    assert _lt(g0, A) != _lt(g0.prefix(2).extend("a", Var(0)), A)


def test_subterm_at():
    t = App(Var(1), Abs("x", PROP, Var(0)))
    assert subterm_at(t, (1, 1)) == Var(0)
    assert subterm_at(t, ()) == t
