"""
Measures and well-founded orders
================================

A term is above its strict subterms and above the normal form of its
type.  Walking down from a term always stops, and the measure drops on
every step.
"""

# %%
from lambdacube import CC, LabeledTerm, descend, measure_unmarked, parse_context, parse_term, print_term
from lambdacube.generate import normal_corpus

g0 = parse_context("P : Prop; f : P -> P; a : P")
for src in ["Prop", "P", "a", "f", "f a", "P -> P"]:
    print(f"mu({src}) = {measure_unmarked(g0, parse_term(src, g0), CC)}")

# %%
d = descend(LabeledTerm(g0, parse_term("f a", g0)), CC)
for lt in d.downset:
    print(" ", print_term(lt.term, lt.ctx), " context length", len(lt.ctx))
print("size", len(d.downset), "depth", d.depth)

# %%
# Over a generated corpus, chains stay short and both orders terminate.
corpus = normal_corpus(seed=0, per_system=4)
depths = [descend(LabeledTerm(c.ctx, c.term), c.system, prime=True).depth for c in corpus]
print("deepest chain under the primed order:", max(depths))

# %%
# The measure of a normal term can be compared with the measure of its
# marked translation on the same corpus.
from lambdacube import measure_marked, star_translate

pairs = [(measure_unmarked(c.ctx, c.term, c.system),
          measure_marked(star_translate(c.ctx, c.term, c.system).term)) for c in corpus]
print("equal:", sum(u == m for u, m in pairs), "of", len(pairs))
print("first few:", pairs[:6])
