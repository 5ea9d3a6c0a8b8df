"""From a reduced fragment formula to an equivalent weighted automaton.

States are consistent sets.  A letter move leaves a set whose anchor is
reduced, reads a letter agreeing with the set's literals, and enters a
non-empty consistent set of one of its next formulas, weighted by that next
formula's value.  An epsilon move of weight ``one`` leads from a non-empty
set to each non-empty consistent set of its reduced anchor.  One final set
is built per until subformula.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict

from .automata import EPS, WeightedAutomaton, all_letters
from .consistency import (
    CapExceeded,
    ConsistentSet,
    consistent_sets,
    iter_consistent_sets,
    next_table,
    reach,
)
from .formula import (
    Formula,
    FormulaError,
    Until,
    atoms,
    conjuncts,
    in_translatable_fragment,
    is_reduced,
    reduce,
    untils,
)
from .monoid import PRODUCT, Monoid

__all__ = [
    "TranslationResult",
    "NotReduced",
    "FragmentMismatch",
    "CapExceeded",
    "translate",
    "is_final_for",
]


class NotReduced(FormulaError):
    pass


class FragmentMismatch(FormulaError):
    pass


@dataclass(frozen=True)
class TranslationResult:
    automaton: WeightedAutomaton
    formula: Formula
    state_index: Dict[ConsistentSet, int]
    until_index: Dict[Until, int]


def is_final_for(b: ConsistentSet, u: Until) -> bool:
    """Whether ``b`` belongs to the final set of the until subformula ``u``.

    Conjunctions are flattened completely, so an until hidden in a nested
    conjunct is still seen.
    """
    return bool(b) and u not in conjuncts(b.anchor)


def translate(f: Formula, monoid: Monoid, ap=None, cap: int = 10_000) -> TranslationResult:
    """Build the epsilon-automaton of ``f``.

    ``ap`` defaults to the atoms of ``f``.  Raises :class:`NotReduced`,
    :class:`FragmentMismatch` or :class:`CapExceeded`.
    """
    if not is_reduced(f, monoid):
        raise NotReduced(f"formula is not reduced: {f}")
    if not in_translatable_fragment(f, monoid):
        fragment = "RULTL" if monoid.kind == PRODUCT else "t-RULTL"
        raise FragmentMismatch(f"formula is outside {fragment}: {f}")
    ap = tuple(sorted(set(ap) if ap is not None else atoms(f)))
    missing = atoms(f) - set(ap)
    if missing:
        raise FormulaError(f"atoms {sorted(missing)} are not in the alphabet")

    initial = consistent_sets(f)
    sets = reach(initial, monoid, cap)
    ident = {b: i for i, b in enumerate(sets)}
    letters = all_letters(ap)
    weights = {}
    for b in sets:
        if not b:
            continue
        src = ident[b]
        reduced = reduce(b.anchor, monoid)
        for c in iter_consistent_sets(reduced):
            weights[(src, EPS, ident[c])] = monoid.one
        if reduced != b.anchor:
            continue
        table = next_table(b, monoid)
        targets = [(v, [ident[c] for c in iter_consistent_sets(xi)]) for xi, v in table.items()]
        for letter in letters:
            if not b.admits(letter):
                continue
            for v, cs in targets:
                for dst in cs:
                    key = (src, letter, dst)
                    weights[key] = monoid.plus(weights[key], v) if key in weights else v

    until_list = untils(f)
    family = [frozenset(ident[b] for b in sets if is_final_for(b, u)) for u in until_list]
    automaton = WeightedAutomaton(
        monoid=monoid,
        ap=ap,
        states=range(len(sets)),
        initial=[ident[b] for b in initial],
        final_family=family,
        weights=weights,
        labels={ident[b]: b.label(monoid) for b in sets},
    )
    return TranslationResult(
        automaton=automaton,
        formula=f,
        state_index=ident,
        until_index={u: i for i, u in enumerate(until_list)},
    )
