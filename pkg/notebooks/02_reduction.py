"""
Beta and eta reduction
======================

Normal forms are computed by exhausting beta steps, then eta steps.
"""

# %%
from lambdacube import parse_context, parse_term, print_term
from lambdacube.reduction import ReductionKind, normalize, reducts, step

g0 = parse_context("P : Prop; f : P -> P; a : P")
t = parse_term("([x:P] f x) (([y:P] y) a)", g0)

# every one-step reduct, leftmost-outermost first
for path, kind, u in reducts(t):
    print(kind.name, path, print_term(u, g0))

# %%
# following the leftmost-outermost strategy to the end
cur = t
while (found := step(cur)) is not None:
    cur, path = found
    print("->", print_term(cur, g0))
print("normal form:", print_term(normalize(t), g0))

# %%
# the eta rule only fires when the bound variable is absent from the function
u, _ = step(parse_term("[x:P] f x", g0), ReductionKind.ETA)
print(print_term(u, g0))
ctx = parse_context("P : Prop; h : P -> P -> P")
print(step(parse_term("[x:P] h x x", ctx), ReductionKind.ETA))
