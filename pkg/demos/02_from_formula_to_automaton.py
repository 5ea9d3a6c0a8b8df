"""
From a formula to a weighted Büchi automaton
============================================

Formulas of the restricted fragments translate into weighted automata whose
states are consistent sets of subformulas.  The behavior of the automaton on
a word equals the value of the formula.
"""

# %%
from wltl import LIMINF, TROPICAL, eval_behavior, eval_semantics, normalize, parse, parse_lasso, translate
from wltl.automata import to_dot, to_json
from wltl.formula import classify_fragment

f = parse("G(a & 2)", ["a", "b"], LIMINF)
print("\n".join(classify_fragment(f, LIMINF).lines()))

# %%
# The raw translation keeps epsilon moves of weight ``one`` and one final
# set per until subformula (here there is none).
result = translate(f, LIMINF, ap=["a", "b"])
a = result.automaton
for q in a.states:
    print(q, a.label(q), "(initial)" if q in a.initial else "")
print(to_json(a)[:400], "...")

# %%
# Degeneralizing and removing the epsilon moves gives a plain Büchi
# automaton, whose behavior has a closed form on lasso words.
b = normalize(a)
print(len(b.states), "states after normalization")
for text in ["({a})^w", "{b}({a})^w", "({a}{a,b})^w", "({a}{b})^w"]:
    w = parse_lasso(text)
    print(f"{text:>14}  semantics {eval_semantics(f, w, LIMINF)}  behavior {eval_behavior(b, w)}")

# %%
# A tropical example with an until: the final set asks that the until is
# eventually fulfilled.
g = parse("(2 & a) U (3 & b)", ["a", "b"], TROPICAL)
c = normalize(translate(g, TROPICAL).automaton)
for text in ["({a})^w", "{a}({b})^w", "{a}{a}({b})^w"]:
    w = parse_lasso(text)
    print(f"{text:>14}  semantics {eval_semantics(g, w, TROPICAL)}  behavior {eval_behavior(c, w)}")

# %%
# Graphviz output for the raw automaton.
print(to_dot(a))
