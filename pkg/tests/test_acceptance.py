"""Acceptance criteria 1-8, exact arithmetic throughout (tolerance 0).

Each test records a verdict that the terminal summary prints as one line
per criterion.  Run directly with ``python3 tests/test_acceptance.py`` or
as part of ``pytest``.
"""

import itertools
import json
import random
import sys
import time
from pathlib import Path

import pytest

from conftest import record
from wltl.automata import EPS, degeneralize, from_json, remove_epsilon, to_dict, validate
from wltl.consistency import MAX_HEIGHT, CapExceeded, ConsistentSet, consistent_sets, next_table, reach
from wltl.evaluate import TooLarge, check_equivalence, eval_behavior, eval_behavior_bruteforce
from wltl.formula import And, Const, parse
from wltl.generate import random_automaton, random_formulas, random_lassos
from wltl.monoid import INF, LIMINF, NEG_INF, TROPICAL
from wltl.translate import translate

GOLDEN = Path(__file__).parent / "golden" / "always_a_and_2_liminf.json"
FORMULAS = 200
WORDS = 10
AUTOMATA = 100
ORACLE_NODES = 40


# --------------------------------------------------------------------------
# shared suite runs


def _formula_suite(m):
    start = time.perf_counter()
    stats = dict(formulas=0, samples=0, mismatches=[], oracle=0, oracle_bad=[], horizon_bad=[], capped=[])
    for k, f in enumerate(random_formulas(m, FORMULAS, seed=1)):
        try:
            r = check_equivalence(f, m, random_lassos(WORDS, seed=k), ap=("a", "b"), oracle_nodes=ORACLE_NODES)
        except CapExceeded:
            stats["capped"].append(f)
            continue
        stats["formulas"] += 1
        stats["samples"] += r.samples
        stats["mismatches"] += r.mismatches
        stats["oracle"] += r.oracle_checks
        stats["oracle_bad"] += r.oracle_mismatches
        stats["horizon_bad"] += r.horizon_mismatches
    stats["seconds"] = time.perf_counter() - start
    return stats


@pytest.fixture(scope="module")
def tropical_suite():
    return _formula_suite(TROPICAL)


@pytest.fixture(scope="module")
def liminf_suite():
    return _formula_suite(LIMINF)


@pytest.fixture(scope="module")
def automaton_suite():
    stats = {}
    for m in (TROPICAL, LIMINF):
        rng = random.Random(5)
        s = dict(automata=0, checks=0, bad=[], oracle=0, oracle_bad=[], invalid=0)
        for k in range(AUTOMATA):
            a = random_automaton(m, rng, ap=("a", "b"), density=0.12)
            if validate(a):
                s["invalid"] += 1
                continue
            s["automata"] += 1
            d = degeneralize(a)
            e = remove_epsilon(d)
            for w in random_lassos(WORDS, seed=k):
                expected = eval_behavior_bruteforce(a, w, max_nodes=10**6)
                after_degen = eval_behavior_bruteforce(d, w, max_nodes=10**6)
                after_eps = eval_behavior(e, w)
                s["checks"] += 1
                if not (expected == after_degen == after_eps):
                    s["bad"].append((k, str(w), expected, after_degen, after_eps))
                try:
                    brute = eval_behavior_bruteforce(e, w, max_nodes=ORACLE_NODES)
                except TooLarge:
                    continue
                s["oracle"] += 1
                if brute != after_eps:
                    s["oracle_bad"].append((k, str(w), brute, after_eps))
        stats[m.name] = s
    return stats


# --------------------------------------------------------------------------
# 1. golden automaton of G(a & 2) over liminf


def _isomorphic(x: dict, y: dict) -> bool:
    """Equality of two serialized automata up to a renaming of state ids."""
    xs = [s["id"] for s in x["states"]]
    ys = [s["id"] for s in y["states"]]
    if len(xs) != len(ys):
        return False

    def edges(d, rename):
        return sorted(
            (rename[t["from"]], json.dumps(t["letter"]), rename[t["to"]], t["weight"]) for t in d["transitions"]
        )

    target = edges(y, {q: q for q in ys})
    for perm in itertools.permutations(ys):
        rename = dict(zip(xs, perm))
        if (
            sorted(rename[q] for q in x["initial"]) == sorted(y["initial"])
            and sorted(sorted(rename[q] for q in f) for f in x["finalFamily"]) == sorted(map(sorted, y["finalFamily"]))
            and edges(x, rename) == target
        ):
            return True
    return False


def test_criterion_1_golden_automaton():
    start = time.perf_counter()
    f = parse("G(a & 2)", ["a", "b"], LIMINF)
    a = translate(f, LIMINF, ap=["a", "b"]).automaton
    data = to_dict(a)
    elapsed = time.perf_counter() - start

    golden = json.loads(GOLDEN.read_text())
    # compare the structure without the labels, so only a renaming is allowed
    shuffled = dict(data, states=[{"id": s["id"]} for s in data["states"]])
    same = _isomorphic(shuffled, golden) and from_json(GOLDEN.read_text()).monoid is LIMINF

    letters = [frozenset(s) for s in ([], ["a"], ["b"], ["a", "b"])]
    eps_loops = [p for (p, b, q) in a.weights if b is EPS and p == q]
    eps_moves = [(p, q) for (p, b, q) in a.weights if b is EPS and p != q]
    by_label = {a.label(q): q for q in a.states}
    true_state = by_label["{true}"]
    phi_state = by_label["{(G (a & 2)), (a & 2), a, 2}"]
    twos = sorted((b, q) for (p, b, q), w in a.weights.items() if w == 2 and p == phi_state)
    checks = [
        len(a.states) == 5,
        len(a.initial) == 2,
        a.final_family == (),
        len(eps_loops) == 3,
        len(eps_moves) == 1,
        all(a.weight(true_state, x, true_state) == INF for x in letters),
        [b for b, _ in twos] == sorted(x for x in letters if "a" in x),
        sorted(a.weights.values(), key=str) == sorted([INF] * 8 + [2] * 2, key=str),
        elapsed < 1.0,
    ]
    ok = same and all(checks)
    record(1, ok, f"5 states, 2 initial, no final sets, 8 unit and 2 weight-2 moves, {elapsed:.3f}s")
    assert ok


# --------------------------------------------------------------------------
# 2. consistent sets of a | b and next formulas of the weighted disjunction


def _members(texts, ap=("a", "b", "c")):
    return frozenset(parse(t, ap, TROPICAL) for t in texts)


def _next_examples():
    phi_text = "(a & 2) | (b & 3)"
    phi = parse(phi_text, ["a", "b", "c"], TROPICAL)
    b_phi = ConsistentSet(phi, _members([phi_text, "a & 2", "b & 3", "a", "2", "b", "3"]))
    psi_text = f"({phi_text}) U (X c)"
    psi = parse(psi_text, ["a", "b", "c"], TROPICAL)
    b_psi = ConsistentSet(psi, b_phi.members | _members([psi_text, "X c"]))
    tt = And(Const(0), Const(0))
    return (next_table(b_phi, TROPICAL), {tt}), (next_table(b_psi, TROPICAL), {And(psi, tt), parse("c", ["c"], TROPICAL)})


def test_criterion_2_sets_and_next_formulas():
    start = time.perf_counter()
    sets = {b.members for b in consistent_sets(parse("a | b", ["a", "b"], TROPICAL))}
    expected_sets = {frozenset(), _members(["a | b", "b"]), _members(["a | b", "a"]), _members(["a | b", "a", "b"])}
    (t_phi, keys_phi), (t_psi, keys_psi) = _next_examples()
    elapsed = time.perf_counter() - start
    c = parse("c", ["c"], TROPICAL)
    ok = sets == expected_sets and set(t_phi) == keys_phi and set(t_psi) == keys_psi and t_psi[c] == 0
    ok = ok and elapsed < 1.0
    literal = all(v == TROPICAL.one for v in list(t_phi.values()) + list(t_psi.values()))
    detail = (
        f"4 consistent sets and the stated next formulas match, v(c)=0; "
        f"v(true & true)={t_phi[And(Const(0), Const(0))]} where the stated value is 0, "
        f"and with 0 the automaton would value ({{a,b}})^w at 0 instead of 2; {elapsed:.3f}s"
    )
    record(2, ok and literal, detail)
    assert ok


@pytest.mark.xfail(strict=True, reason="the stated values 0 contradict the weight induction; see the decisions ledger")
def test_criterion_2_literal_next_weights():
    (t_phi, _), (t_psi, _) = _next_examples()
    assert all(v == TROPICAL.one for v in list(t_phi.values()) + list(t_psi.values()))


def test_criterion_2_stated_weight_would_be_wrong():
    """With weight 0 the automaton would value (a & 2) | (b & 3) on ({a,b})^w at 0, not 2."""
    from wltl.evaluate import eval_semantics, parse_lasso, pipeline

    f = parse("(a & 2) | (b & 3)", ["a", "b"], TROPICAL)
    w = parse_lasso("({a,b})^w")
    assert eval_semantics(f, w, TROPICAL) == 2
    assert eval_behavior(pipeline(f, TROPICAL), w) == 2


# --------------------------------------------------------------------------
# 3 and 4. semantics equals automaton behavior on generated formulas


def _suite_verdict(number, stats, fragment):
    ok = (
        stats["formulas"] >= FORMULAS
        and stats["samples"] >= FORMULAS * WORDS
        and not stats["mismatches"]
        and stats["seconds"] < 120
    )
    record(
        number,
        ok,
        f"{stats['formulas']} {fragment} formulas, {stats['samples']} words, "
        f"{len(stats['mismatches'])} mismatches, {stats['seconds']:.1f}s",
    )
    assert ok, stats["mismatches"][:3]


def test_criterion_3_tropical_translation(tropical_suite):
    _suite_verdict(3, tropical_suite, "RULTL")


def test_criterion_4_liminf_translation(liminf_suite):
    _suite_verdict(4, liminf_suite, "t-RULTL")


# --------------------------------------------------------------------------
# 5. degeneralization and epsilon removal keep the behavior


def test_criterion_5_normal_forms(automaton_suite):
    t, l = automaton_suite["tropical"], automaton_suite["liminf"]
    ok = all(s["automata"] >= AUTOMATA and s["checks"] >= AUTOMATA * WORDS and not s["bad"] for s in (t, l))
    record(
        5,
        ok,
        f"tropical {t['checks']} checks / {len(t['bad'])} bad, liminf {l['checks']} checks / {len(l['bad'])} bad",
    )
    assert ok, (t["bad"][:3], l["bad"][:3])


# --------------------------------------------------------------------------
# 6. monoid laws


def _sample_families(m, rng, restricted):
    """Finite weight families per position of an ultimately periodic index sequence."""
    if m is TROPICAL:
        pool = [0, 1, 2, 3, 5, INF]
    else:
        pool = [-2, -1, 0, 1, 3, INF, NEG_INF]
    heavy = [k for k in pool if not m.is_unit_like(k)]
    units = [m.zero, m.one]

    def family(free):
        size = rng.randint(1, 2)
        if free:
            return [rng.choice(pool) for _ in range(size)]
        source = heavy if rng.random() < 0.7 else units
        return [rng.choice(source) for _ in range(size)]

    stem = [family(True) for _ in range(rng.randint(0, 3))]
    period = [family(not restricted) for _ in range(rng.randint(1, 2))]
    return stem, period


def _distributes(m, stem, period) -> bool:
    """Valuation of the pointwise sums against the sum of valuations over choices.

    Choices range over an arbitrary pick on the stem and one period copy,
    followed by a fixed pick per period position.  For both monoids the
    best choice sequence has this shape, and every choice is bounded by the
    pointwise sums, so equality on this set is equality of both sides.
    """
    left = m.val_omega([m.sum(f) for f in stem], [m.sum(f) for f in period])
    right = m.zero
    head = stem + period
    for picks in itertools.product(*head):
        for tail in itertools.product(*period):
            right = m.plus(right, m.val_omega(list(picks), list(tail)))
    return left == right


def _monotone(m, rng, restricted) -> bool:
    """Pointwise smaller sequences have smaller valuations.

    Families on period positions share their unit-or-not class when
    ``restricted``, which is the side condition for generalized monoids.
    """
    stem, period = _sample_families(m, rng, restricted)
    # natural order: min for liminf, reversed numeric order for tropical
    key = (lambda k: k) if m is LIMINF else (lambda k: -k)
    low = [[min(f, key=key) for f in fam] for fam in (stem, period)]
    high = [[max(f, key=key) for f in fam] for fam in (stem, period)]
    return m.natural_leq(m.val_omega(*low), m.val_omega(*high))


def test_criterion_6_monoid_laws():
    rng = random.Random(2024)
    failures = []
    counts = {}
    for m in (TROPICAL, LIMINF):
        restricted = m is LIMINF
        n = 0
        for _ in range(1000):
            stem, period = _sample_families(m, rng, restricted)
            flat_stem = [f[0] for f in stem]
            flat_period = [f[-1] for f in period]
            k = rng.choice([f[0] for f in stem + period])
            laws = {
                "zero absorbs": m.val_omega(flat_stem + [m.zero], flat_period) == m.zero,
                "unit sequence": m.val_omega([], [m.one]) == m.one,
                "product units": m.times(m.zero, k) == m.zero == m.times(k, m.zero)
                and m.times(m.one, k) == k == m.times(k, m.one),
                "leading unit": m.val_omega([m.one] + flat_stem, flat_period) == m.val_omega(flat_stem, flat_period),
                "unit tail": m.val_omega([k], [m.one]) == k,
                "distributivity": _distributes(m, stem, period),
                "monotonicity": _monotone(m, rng, restricted),
                "total order": m.natural_leq(flat_stem[0], k) or m.natural_leq(k, flat_stem[0]) if flat_stem else True,
            }
            failures += [(m.name, name, stem, period) for name, good in laws.items() if not good]
            n += 1
        counts[m.name] = n

    # the unrestricted distributivity fails for liminf on the standard family
    stem = [[INF, 6], [5]]
    period = [[INF, 6]]
    left = LIMINF.val_omega([LIMINF.sum(f) for f in stem], [LIMINF.sum(f) for f in period])
    right = LIMINF.zero
    for picks in itertools.product(*(stem + period)):
        for tail in itertools.product(*period):
            right = LIMINF.plus(right, LIMINF.val_omega(list(picks), list(tail)))
    ok = not failures and left == 5 and right == 6 and all(c >= 1000 for c in counts.values())
    record(
        6,
        ok,
        f"{counts['tropical']} + {counts['liminf']} sampled sequences, {len(failures)} law failures; "
        f"mixed family gives {left} vs {right}",
    )
    assert ok, failures[:3]


# --------------------------------------------------------------------------
# 7. divergence guard


def test_criterion_7_divergence(tropical_suite, liminf_suite):
    ap = ["a", "b", "c", "d"]
    cases = {
        "G(G(a & 2))": ["G(G(a & 2))", "G(a & 2)", "a & 2", "a", "2"],
        "((a & 2) U c) U d": ["((a & 2) U c) U d", "(a & 2) U c", "a & 2", "a", "2"],
    }
    raised = []
    for text, parts in cases.items():
        f = parse(text, ap, TROPICAL)
        start = ConsistentSet(f, frozenset(parse(t, ap, TROPICAL) for t in parts))
        # the set count alone, then with the default nesting guard as well
        for guard in (None, MAX_HEIGHT):
            try:
                reach(start, TROPICAL, cap=200, max_height=guard)
                raised.append(False)
            except CapExceeded as exc:
                raised.append(guard is not None or "more than 200" in str(exc))
    completed = not tropical_suite["capped"] and not liminf_suite["capped"]
    ok = raised == [True] * 4 and completed
    record(7, ok, f"both divergent formulas exceed cap 200; generator formulas capped: "
                  f"{len(tropical_suite['capped']) + len(liminf_suite['capped'])}")
    assert ok


# --------------------------------------------------------------------------
# 8. the fast evaluators agree with the brute force and the horizon is enough


def test_criterion_8_oracles(tropical_suite, liminf_suite, automaton_suite):
    runs = [tropical_suite, liminf_suite]
    oracle = sum(s["oracle"] for s in runs) + sum(s["oracle"] for s in automaton_suite.values())
    bad = sum(len(s["oracle_bad"]) for s in runs) + sum(len(s["oracle_bad"]) for s in automaton_suite.values())
    horizon_bad = sum(len(s["horizon_bad"]) for s in runs)
    samples = sum(s["samples"] for s in runs)
    ok = oracle > 0 and bad == 0 and horizon_bad == 0
    record(8, ok, f"{oracle} brute-force comparisons, {bad} disagreements; "
                  f"horizon H vs 4H on {samples} words, {horizon_bad} differences")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
