"""
Marked terms
============

Every variable, application and abstraction carries its type.  Erasing
the marks gives the contents; reduction may also happen inside marks.
"""

# %%
from lambdacube import (
    CC, contents, marked_infer, marked_normalize, parse_context, parse_marked,
    parse_marked_context, parse_term, print_marked, print_term, star_translate,
)
from lambdacube.marked import marked_reducts, marked_step
from lambdacube.reduction import ReductionKind, is_eta_redex

ctx = parse_marked_context("T : Prop; y : T^(Prop) -> T^(Prop)")
src = ("([x:T^(Prop)] (y^((([z:T^(Prop)] (T^(Prop) -> T^(Prop)))^(T^(Prop) -> Prop) "
       "x^(T^(Prop)))^(Prop)) x^(T^(Prop)))^(T^(Prop)))^(T^(Prop) -> T^(Prop))")
t = parse_marked(src, ctx)
print(print_term(contents(t), ctx.names()), "is an eta-redex:", is_eta_redex(contents(t)))

# %%
# The mark of y mentions the bound x, so the marked term is not an
# eta-redex.  One step inside that mark removes the obstruction.
print("eta steps available:", len(list(marked_reducts(t, ReductionKind.ETA))))
u = marked_step(t)
print(print_marked(u, ctx))
print(print_marked(marked_normalize(t), ctx))
print(print_marked(marked_infer(ctx, t, CC), ctx))

# %%
# Any well-typed term has a normal marked counterpart with the same contents.
g0 = parse_context("P : Prop; f : P -> P; a : P")
r = star_translate(g0, parse_term("[x:P] f x", g0), CC)
print(print_marked(r.term, r.ctx), ":", print_marked(r.type, r.ctx))
