"""
Terms, contexts and the eight systems
=====================================

Terms are de Bruijn indexed; names survive only as printing hints.
"""

# %%
from lambdacube import ALL_SYSTEMS, CC, Context, infer, parse_context, parse_term, print_term
from lambdacube.typecheck import typable

g0 = parse_context("P : Prop; f : P -> P; a : P")
t = parse_term("[x:P] f (f x)", g0)
print(t)
print(print_term(t, g0), ":", print_term(infer(g0, t, CC), g0))

# %%
# Each system is a set of sort pairs allowed to form products.  The
# polymorphic identity needs products over Prop that quantify over types.
poly_id = parse_term("[A:Prop][x:A] x", [])
for s in ALL_SYSTEMS:
    print(f"{s.label:<22} {s.rule_code():<12} polymorphic identity: {typable(Context(), poly_id, s)}")

# %%
# Types are returned as built by the rules, so they may contain redexes.
ctx = parse_context("P : Prop")
t = parse_term("[x:([y:Prop] y) P] x", ctx)
print(print_term(infer(ctx, t, CC), ctx))
