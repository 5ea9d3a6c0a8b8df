"""
Removing epsilon moves without losing paths
===========================================

In the liminf monoid the unit ``inf`` is transparent to the valuation, so
adding it to another weight changes the result.  Epsilon removal therefore
keeps unit moves apart from weighted ones by sending them into decoy copies
of the states.  A variant that only lets unit moves run between decoys
drops paths that alternate unit and weighted moves.
"""

# %%
import random

from wltl import LIMINF, TROPICAL, WeightedAutomaton, eval_behavior, eval_behavior_bruteforce, parse_lasso
from wltl.automata import degeneralize, remove_epsilon
from wltl.generate import random_automaton, random_lassos

A, B = frozenset({"a"}), frozenset({"b"})
one_state = WeightedAutomaton(
    LIMINF, ("a", "b"), ["q"], ["q"], [{"q"}], {("q", A, "q"): 2, ("q", B, "q"): LIMINF.one}
)
w = parse_lasso("({a}{b})^w")
print("brute force      ", eval_behavior_bruteforce(one_state, w))
print("decoys           ", eval_behavior(remove_epsilon(one_state), w))
print("decoy-only units ", eval_behavior(remove_epsilon(one_state, literal_decoys=True), w))

# %%
# On random automata the normal forms keep the behavior.  The brute force
# works on the original automaton, epsilon moves included.
rng = random.Random(1)
for m in (TROPICAL, LIMINF):
    checked = disagreements = 0
    for k in range(40):
        a = random_automaton(m, rng, ap=("a",))
        e = remove_epsilon(degeneralize(a))
        for word in random_lassos(5, seed=k, ap=("a",)):
            checked += 1
            disagreements += eval_behavior_bruteforce(a, word, max_nodes=10**6) != eval_behavior(e, word)
    print(f"{m.name}: {checked} words, {disagreements} disagreements")
