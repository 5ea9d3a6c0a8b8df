"""Weighted LTL over idempotent omega-valuation monoids and its translation to weighted Büchi automata."""

from .automata import WeightedAutomaton, degeneralize, normalize, remove_epsilon
from .consistency import CapExceeded, consistent_sets, next_table, reach
from .evaluate import LassoWord, check_equivalence, eval_behavior, eval_behavior_bruteforce, eval_semantics, parse_lasso
from .formula import parse, reduce, to_text
from .monoid import LIMINF, TROPICAL, get_monoid
from .translate import translate

__version__ = "0.1.0"

__all__ = [
    "WeightedAutomaton",
    "degeneralize",
    "normalize",
    "remove_epsilon",
    "CapExceeded",
    "consistent_sets",
    "next_table",
    "reach",
    "LassoWord",
    "check_equivalence",
    "eval_behavior",
    "eval_behavior_bruteforce",
    "eval_semantics",
    "parse_lasso",
    "parse",
    "reduce",
    "to_text",
    "LIMINF",
    "TROPICAL",
    "get_monoid",
    "translate",
]
