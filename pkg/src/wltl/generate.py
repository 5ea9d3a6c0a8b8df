"""Seeded random formulas, lasso words and automata for differential testing."""

from __future__ import annotations

import random
from typing import Optional, Sequence

from .automata import EPS, WeightedAutomaton, all_letters
from .evaluate import LassoWord
from .formula import (
    Always,
    And,
    Atom,
    Const,
    Formula,
    NegAtom,
    Next,
    Or,
    Until,
    in_translatable_fragment,
    is_reduced,
    reduce,
)
from .monoid import INF, NEG_INF, PRODUCT, Monoid


class FormulaGenerator:
    """Random formulas of the fragment that matches the monoid.

    Product monoids get RULTL formulas with integer weights ``0..5``;
    generalized monoids get t-RULTL formulas with weights ``-3..3`` plus
    the infinities, where restricted step formulas only use finite weights
    other than the unit.
    """

    def __init__(self, monoid: Monoid, ap: Sequence[str] = ("a", "b"), max_height: int = 4,
                 rng: Optional[random.Random] = None, max_size: int = 9):
        self.monoid = monoid
        self.ap = list(ap)
        self.max_height = max_height
        self.max_size = max_size
        self.rng = rng or random.Random(0)
        if monoid.kind == PRODUCT:
            self.weights = list(range(6))
        else:
            self.weights = list(range(-3, 4)) + [INF, NEG_INF]

    # building blocks -----------------------------------------------------

    def const(self) -> Const:
        return Const(self.rng.choice(self.weights))

    def restricted_const(self) -> Const:
        choices = [k for k in self.weights if not self.monoid.is_unit_like(k)]
        return Const(self.rng.choice(choices))

    def literal(self) -> Formula:
        name = self.rng.choice(self.ap)
        return Atom(name) if self.rng.random() < 0.65 else NegAtom(name)

    def boolean(self, depth: int) -> Formula:
        """Mostly literals; temporal operators stay rare to keep automata small."""
        rng = self.rng
        r = rng.random()
        if depth <= 0 or r < 0.55:
            if rng.random() < 0.06:
                return Const(rng.choice([self.monoid.zero, self.monoid.one]))
            return self.literal()
        op = rng.choices(["and", "or", "next", "until", "always"], [3, 3, 2, 1, 1])[0]
        if op == "and":
            return And(self.boolean(depth - 1), self.boolean(depth - 1))
        if op == "or":
            return Or(self.boolean(depth - 1), self.boolean(depth - 1))
        if op == "next":
            return Next(self.boolean(depth - 1))
        if op == "until":
            return Until(self.literal(), self.literal())
        return Always(self.literal())

    def _step_disjunct(self, depth: int, restricted: bool) -> Formula:
        k = self.restricted_const() if restricted else self.const()
        r = self.rng.random()
        if r < 0.15:
            return k
        if not restricted and r < 0.25:
            return self.boolean(depth - 1)
        phi = self.boolean(depth - 2)
        return And(k, phi) if self.rng.random() < 0.5 else And(phi, k)

    def step(self, depth: int, restricted: bool = False) -> Formula:
        f = self._step_disjunct(depth, restricted)
        if depth >= 3 and self.rng.random() < 0.35:
            f = Or(f, self._step_disjunct(depth - 1, restricted))
        return f

    # fragments ---------------------------------------------------------------

    def rultl(self, depth: int) -> Formula:
        rng = self.rng
        if depth <= 1:
            return self.const() if rng.random() < 0.4 else self.literal()
        op = rng.choice(["const", "bool", "next", "or", "and", "until", "until", "always", "always"])
        if op == "const":
            return self.const()
        if op == "bool":
            return self.boolean(depth - 1)
        if op == "next":
            return Next(self.rultl(depth - 1))
        if op == "or":
            return Or(self.rultl(depth - 1), self.rultl(depth - 1))
        if op == "and":
            b, r = self.boolean(depth - 2), self.rultl(depth - 1)
            return And(b, r) if rng.random() < 0.5 else And(r, b)
        if op == "until":
            return Until(self.step(depth - 1), self.step(depth - 1))
        return Always(self.step(depth - 1))

    def trultl(self, depth: int) -> Formula:
        rng = self.rng
        if depth <= 1:
            return self.const() if rng.random() < 0.4 else self.literal()
        op = rng.choice(["const", "bool", "next", "or", "and", "and", "until", "until", "always", "always"])
        if op == "const":
            return self.const()
        if op == "bool":
            return self.boolean(depth - 1)
        if op == "next":
            return Next(self.trultl(depth - 1))
        if op == "or":
            return Or(self.trultl(depth - 1), self.trultl(depth - 1))
        if op == "and":
            b = self.boolean(depth - 2)
            kind = rng.choice(["bool", "step", "until", "always"])
            if kind == "bool":
                partner = self.boolean(depth - 2)
            elif kind == "step":
                partner = self.step(depth - 1, restricted=True)
            elif kind == "until":
                partner = Until(self.step(depth - 2, True), self.step(depth - 2, True))
            else:
                partner = Always(self.step(depth - 2, True))
            return And(b, partner) if rng.random() < 0.5 else And(partner, b)
        if op == "until":
            return Until(self.step(depth - 1, True), self.step(depth - 1, True))
        return Always(self.step(depth - 1, True))

    def formula(self) -> Formula:
        """A reduced fragment formula within the height and size bounds.

        The size bound matters: every optional subformula doubles the number
        of consistent sets, so automaton size grows exponentially with it.
        """
        while True:
            if self.monoid.kind == PRODUCT:
                f = self.rultl(self.max_height + 1)
            else:
                f = self.trultl(self.max_height + 1)
            g = reduce(f, self.monoid)
            if (
                g.height <= self.max_height
                and g.size <= self.max_size
                and is_reduced(g, self.monoid)
                and in_translatable_fragment(g, self.monoid)
            ):
                return g


def random_formulas(monoid: Monoid, count: int, seed: int = 0, ap=("a", "b"), max_height: int = 4,
                    max_size: int = 9):
    gen = FormulaGenerator(monoid, ap, max_height, random.Random(seed), max_size)
    return [gen.formula() for _ in range(count)]


def random_lasso(rng: random.Random, ap: Sequence[str], max_stem: int = 3, max_period: int = 3) -> LassoWord:
    letters = all_letters(ap)
    stem = [rng.choice(letters) for _ in range(rng.randint(0, max_stem))]
    period = [rng.choice(letters) for _ in range(rng.randint(1, max_period))]
    return LassoWord(stem, period)


def random_lassos(count: int, seed: int = 0, ap=("a", "b"), max_stem: int = 3, max_period: int = 3) -> list:
    rng = random.Random(seed)
    return [random_lasso(rng, ap, max_stem, max_period) for _ in range(count)]


def random_automaton(
    monoid: Monoid,
    rng: random.Random,
    ap: Sequence[str] = ("a",),
    max_states: int = 6,
    max_final_sets: int = 3,
    density: float = 0.18,
    eps_density: float = 0.15,
) -> WeightedAutomaton:
    """A small automaton satisfying the structural rules for epsilon moves.

    Unit epsilon moves only join states with the same final-set membership.
    """
    n = rng.randint(1, max_states)
    states = [f"p{i}" for i in range(n)]
    if monoid.kind == PRODUCT:
        pool = [0] * 3 + list(range(1, 4))
    else:
        pool = [INF] * 3 + list(range(-3, 4))
    l = rng.randint(0, max_final_sets)
    family = [{q for q in states if rng.random() < 0.5} for _ in range(l)]
    initial = {q for q in states if rng.random() < 0.4} or {states[0]}
    weights = {}
    for p in states:
        for letter in all_letters(ap):
            for q in states:
                if rng.random() < density:
                    weights[(p, letter, q)] = rng.choice(pool)
        for q in states:
            same = all((p in f) == (q in f) for f in family)
            if same and rng.random() < eps_density:
                weights[(p, EPS, q)] = monoid.one
    return WeightedAutomaton(
        monoid=monoid,
        ap=ap,
        states=states,
        initial=initial,
        final_family=family,
        weights=weights,
    )
