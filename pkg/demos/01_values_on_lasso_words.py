"""
Weighted formulas on lasso words
================================

A weighted LTL formula assigns each infinite word a value in a monoid.
Here we evaluate a few formulas on ultimately periodic words, in the
tropical monoid (min, +) and in the liminf monoid (max, min).
"""

# %%
# Words are written as a stem followed by a repeated period.  Letters are
# sets of atoms; ``{}`` is the empty letter.
from wltl import LIMINF, TROPICAL, eval_semantics, parse, parse_lasso

w = parse_lasso("{a}{a}({b})^w")
print(w, "has", w.size, "distinct suffixes")

# %%
# In the tropical monoid ``&`` adds weights and ``|`` takes the minimum.
# The until below pays 2 for every ``a`` it waits through and 3 when ``b``
# finally holds.
f = parse("(2 & a) U (3 & b)", ["a", "b"], TROPICAL)
print(f, "=", eval_semantics(f, w, TROPICAL))

# %%
# ``true`` is the unit of the product, so it is ``0`` in the tropical
# monoid and ``inf`` in the liminf monoid.
for m in (TROPICAL, LIMINF):
    print(m.name, parse("true", [], m).value)

# %%
# Under liminf, ``G`` keeps the smallest weight that recurs forever.  Values
# seen only in the stem are forgotten once something else keeps recurring.
g = parse("G((a & 1) | (b & 4))", ["a", "b"], LIMINF)
for text in ["({a})^w", "{a}({b})^w", "{a}({a}{b})^w", "{b}({})^w"]:
    print(f"{text:>14}  {eval_semantics(g, parse_lasso(text), LIMINF)}")

# %%
# The values at every suffix position are available too.
print(eval_semantics(g, parse_lasso("{a}({a}{b})^w"), LIMINF, all_positions=True))
