from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import both, formulas
from wltl.consistency import (
    EMPTY,
    CapExceeded,
    ConsistentSet,
    consistent_sets,
    consistent_sets_bruteforce,
    is_consistent,
    maximal_consistent_subset,
    next_table,
    reach,
    violations,
)
from wltl.formula import And, Const, closure, parse, reduce
from wltl.generate import random_formulas
from wltl.monoid import LIMINF, TROPICAL

AP = ["a", "b", "c", "d"]


def p(text, m=TROPICAL):
    return parse(text, AP, m)


def members(*texts, m=TROPICAL):
    return frozenset(p(t, m) for t in texts)


def test_disjunction_sets():
    f = p("a | b")
    sets = consistent_sets(f)
    assert sets[0] is EMPTY
    assert {b.members for b in sets} == {
        frozenset(),
        members("a | b", "a"),
        members("a | b", "b"),
        members("a | b", "a", "b"),
    }


def test_violations():
    f = p("a & !a")
    assert violations(members("a & !a", "a", "!a"), f)
    assert violations(members("a", "!a"), f)
    assert is_consistent(frozenset(), f)


def test_constant_sets():
    # the empty set and {3}; successors {true} and {inf} come from reach
    assert [len(b) for b in consistent_sets(Const(3))] == [0, 1]
    assert len(reach(consistent_sets(Const(3)), TROPICAL)) == 4


@settings(max_examples=80, deadline=None)
@given(f=formulas(TROPICAL, max_size=8))
def test_enumeration_matches_powerset(f):
    fast = {b.members for b in consistent_sets(f)}
    slow = {b.members for b in consistent_sets_bruteforce(f)}
    assert fast == slow


def _maximal_by_search(b, g):
    cl = set(closure(g))
    pool = [h for h in b.members & cl if h != g]
    best = frozenset()
    if g not in b.members:
        return best
    for r in range(len(pool) + 1):
        for combo in combinations(pool, r):
            cand = frozenset(combo) | {g}
            if is_consistent(cand, g) and len(cand) > len(best):
                best = cand
    return best


@settings(max_examples=40, deadline=None)
@given(f=formulas(TROPICAL, max_size=7))
def test_maximal_subset_matches_search(f):
    for b in consistent_sets(f)[1:]:
        for g in closure(f):
            assert maximal_consistent_subset(b, g).members == _maximal_by_search(b, g)


def test_next_table_disjunction_of_weights():
    f = p("(a & 2) | (b & 3)")
    b = ConsistentSet(f, members("(a & 2) | (b & 3)", "a & 2", "b & 3", "a", "2", "b", "3"))
    table = next_table(b, TROPICAL)
    assert list(table) == [p("true & true")]
    # both branches lead to the same next formula; their weights are added
    assert table[p("true & true")] == 2


def test_next_table_until():
    phi = "(a & 2) | (b & 3)"
    psi = p(f"({phi}) U (X c)")
    b = ConsistentSet(psi, members(f"({phi}) U (X c)", phi, "a & 2", "b & 3", "a", "2", "b", "3", "X c"))
    table = next_table(b, TROPICAL)
    assert set(table) == {And(psi, p("true & true")), p("c")}
    assert table[p("c")] == 0
    assert table[And(psi, p("true & true"))] == 2


def test_next_of_empty_set():
    assert next_table(EMPTY, LIMINF) == {Const(LIMINF.zero): LIMINF.zero}


def test_reach_always():
    f = p("G(a & 2)", LIMINF)
    assert len(reach(consistent_sets(f), LIMINF)) == 5


@pytest.mark.parametrize("text", ["G(G(a & 2))", "((a & 2) U c) U d"])
def test_divergent_reach_hits_cap(text):
    f = p(text)
    start = [b for b in consistent_sets(f) if b]
    with pytest.raises(CapExceeded):
        reach(start, TROPICAL, cap=200)


def test_height_guard():
    with pytest.raises(CapExceeded, match="height"):
        reach(consistent_sets(p("G(G(a & 2))")), TROPICAL, cap=10**6, max_height=20)


@settings(max_examples=40, deadline=None)
@given(m=both, seed=st.integers(0, 10**6))
def test_generator_formulas_terminate(m, seed):
    (f,) = random_formulas(m, 1, seed=seed)
    assert len(reach(consistent_sets(f), m, cap=10_000)) >= 1
    assert reduce(f, m) == f
