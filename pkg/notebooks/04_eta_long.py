"""
Eta-long forms
==============

Every atomic subterm of functional type is applied to enough fresh
variables, themselves expanded.
"""

# %%
from lambdacube import CC, eta_long, parse_context, parse_term, plus_translate, print_marked, print_term
from lambdacube.translate import star_context

g0 = parse_context("P : Prop; f : P -> P; a : P")
print(print_term(eta_long(g0, parse_term("f", g0), CC), g0))

ctx = parse_context("A : Prop; b : A; c : (A -> A) -> A; g : A -> A -> A")
for src in ["c", "g", "c (g b)", "[x:A] g x"]:
    t = parse_term(src, ctx)
    print(f"{src:<14} => {print_term(eta_long(ctx, t, CC), ctx)}")

# %%
# Each expansion of a bound variable comes with a measure certificate: the
# variable is smaller than the term being expanded.
certs = []
eta_long(ctx, parse_term("c", ctx), CC, certificates=certs)
print(certs)

# %%
# the marked version expands marks as well
print(print_marked(plus_translate(g0, parse_term("f", g0), CC), star_context(g0, CC)))
