"""Weighted generalized Büchi automata with epsilon moves.

An automaton stores only its non-zero transition weights.  Letters are
frozensets of atom names; the empty move is the :data:`EPS` sentinel.
Epsilon moves must weigh ``zero`` or ``one`` and a ``one``-weighted epsilon
move must not cross the boundary of any final set.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Dict, Hashable, Iterable, Mapping, Optional, Sequence

from .monoid import GENERALIZED, PRODUCT, Monoid, format_weight, get_monoid


class _Epsilon:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EPS"

    def __reduce__(self):
        return (_Epsilon, ())


EPS = _Epsilon()


class AutomatonError(ValueError):
    pass


class InvalidInput(AutomatonError):
    pass


class WrongKind(AutomatonError):
    pass


def all_letters(ap: Sequence[str]) -> list:
    """Every subset of ``ap``, smallest first."""
    names = sorted(ap)
    return [frozenset(c) for r in range(len(names) + 1) for c in combinations(names, r)]


def letter_text(letter) -> str:
    if letter is EPS:
        return "eps"
    return "{" + ",".join(sorted(letter)) + "}"


@dataclass(frozen=True)
class Decoy:
    """Shadow copy of a state, used by epsilon removal over generalized monoids."""

    state: Hashable


@dataclass(frozen=True, eq=False)
class WeightedAutomaton:
    monoid: Monoid
    ap: tuple
    states: tuple
    initial: frozenset
    final_family: tuple
    weights: Mapping
    labels: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "ap", tuple(sorted(self.ap)))
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "final_family", tuple(frozenset(f) for f in self.final_family))
        zero = self.monoid.zero
        object.__setattr__(
            self, "weights", {k: w for k, w in self.weights.items() if w != zero}
        )
        known = set(self.states)
        for (p, _, q) in self.weights:
            if p not in known or q not in known:
                raise InvalidInput(f"transition between unknown states {p!r}, {q!r}")
        if not self.initial <= known or any(not f <= known for f in self.final_family):
            raise InvalidInput("initial or final states outside the state set")

    def label(self, q) -> str:
        if q in self.labels:
            return self.labels[q]
        return str(q)

    def weight(self, p, letter, q):
        return self.weights.get((p, letter, q), self.monoid.zero)

    @cached_property
    def out_edges(self) -> Dict[Hashable, list]:
        out = defaultdict(list)
        for (p, letter, q), w in self.weights.items():
            out[p].append((letter, q, w))
        return dict(out)

    def edges_from(self, p) -> list:
        return self.out_edges.get(p, [])

    def letter_successors(self, p, letter) -> list:
        return [(q, w) for (b, q, w) in self.edges_from(p) if b == letter]

    @property
    def has_epsilon(self) -> bool:
        return any(letter is EPS for (_, letter, _) in self.weights)

    @property
    def kind(self) -> str:
        if not self.has_epsilon and len(self.final_family) == 1:
            return "wBa"
        if len(self.final_family) == 1:
            return "eps-wBa"
        return "eps-wgBa"

    def accepting_family(self) -> tuple:
        """The final family, with the empty family read as ``(Q,)``."""
        return self.final_family if self.final_family else (frozenset(self.states),)

    def replace(self, **changes) -> "WeightedAutomaton":
        data = dict(
            monoid=self.monoid,
            ap=self.ap,
            states=self.states,
            initial=self.initial,
            final_family=self.final_family,
            weights=self.weights,
            labels=self.labels,
        )
        data.update(changes)
        return WeightedAutomaton(**data)


def validate(a: WeightedAutomaton) -> list:
    """Structural problems of ``a``; an empty list means it is well formed."""
    problems = []
    m = a.monoid
    letters = set(all_letters(a.ap))
    for (p, letter, q), w in sorted(a.weights.items(), key=lambda kv: _edge_key(a, kv[0])):
        where = f"({a.label(p)}, {letter_text(letter)}, {a.label(q)})"
        if not m.in_carrier(w):
            problems.append(f"{where}: weight {format_weight(w)} outside the carrier")
        if letter is EPS:
            if w != m.one:
                problems.append(f"{where}: epsilon weight {format_weight(w)} is neither zero nor one")
                continue
            for i, f in enumerate(a.final_family, 1):
                if (p in f) != (q in f):
                    problems.append(f"{where}: epsilon move crosses the boundary of F_{i}")
        elif letter not in letters:
            problems.append(f"{where}: letter is not a subset of the atoms")
    return problems


def _edge_key(a, key):
    p, letter, q = key
    return (a.label(p), letter_text(letter), a.label(q))


def epsilon_closure(a: WeightedAutomaton, q) -> frozenset:
    """States reachable from ``q`` through ``one``-weighted epsilon moves."""
    seen = {q}
    stack = [q]
    while stack:
        p = stack.pop()
        for letter, r, w in a.edges_from(p):
            if letter is EPS and w == a.monoid.one and r not in seen:
                seen.add(r)
                stack.append(r)
    return frozenset(seen)


def _require_valid(a: WeightedAutomaton):
    problems = validate(a)
    if problems:
        raise InvalidInput("; ".join(problems))


def degeneralize(a: WeightedAutomaton) -> WeightedAutomaton:
    """Equivalent automaton with a single final set.

    States become pairs ``(q, i)`` with layers ``i = 1..l``.  A letter move
    leaving a state of ``F_i`` in layer ``i`` advances to the next layer
    (cyclically); epsilon moves stay in their layer.  With no final sets the
    automaton is returned with every state final.
    """
    _require_valid(a)
    family = a.final_family
    if not family:
        return a.replace(final_family=(frozenset(a.states),))
    n = len(family)
    states = [(q, i) for q in a.states for i in range(1, n + 1)]
    weights = {}
    for (p, letter, q), w in a.weights.items():
        for i in range(1, n + 1):
            if letter is EPS:
                j = i
            elif p in family[i - 1]:
                j = i % n + 1
            else:
                j = i
            weights[((p, i), letter, (q, j))] = w
    labels = {(q, i): f"{a.label(q)}#{i}" for (q, i) in states}
    return WeightedAutomaton(
        monoid=a.monoid,
        ap=a.ap,
        states=states,
        initial={(q, 1) for q in a.initial},
        final_family=({(q, 1) for q in family[0]},),
        weights=weights,
        labels=labels,
    )


def _bracketed(a: WeightedAutomaton, select) -> Dict[tuple, object]:
    """Sum of ``wt(p~, b, q~)`` over moves ``p ->* p~ -b-> q~ ->* q``.

    Only letter weights accepted by ``select`` take part.  States with the
    same epsilon closure share their rows, which keeps the cost near the
    number of distinct closures rather than the number of states.
    """
    m = a.monoid
    closure = {q: epsilon_closure(a, q) for q in a.states}
    rows: Dict[frozenset, Dict[tuple, object]] = {}
    for reach_set in set(closure.values()):
        row: Dict[tuple, object] = {}
        for mid in reach_set:
            for letter, r, w in a.edges_from(mid):
                if letter is EPS or not select(w):
                    continue
                key = (letter, closure[r])
                row[key] = m.plus(row[key], w) if key in row else w
        spread: Dict[tuple, object] = {}
        for (letter, targets), w in row.items():
            for q in targets:
                key = (letter, q)
                spread[key] = m.plus(spread[key], w) if key in spread else w
        rows[reach_set] = spread
    out = {}
    for p in a.states:
        for (letter, q), w in rows[closure[p]].items():
            out[(p, letter, q)] = w
    return out


def remove_epsilon(a: WeightedAutomaton, *, literal_decoys: bool = False) -> WeightedAutomaton:
    """Equivalent automaton without effective epsilon moves.

    Over a product monoid each letter weight becomes the sum over all ways of
    wrapping the letter move in epsilon runs.  Over a generalized monoid that
    sum would blend ``one`` with other weights, which the valuation does not
    distribute over.  There, every state ``q`` gets a decoy ``s_q``: wrapped
    moves of weight ``one`` lead into decoys and the sum of the remaining
    wrapped moves leads into original states, from either copy of the source.

    ``literal_decoys`` switches to the variant that allows ``one``-moves only
    between decoys.  It loses paths that alternate unit and non-unit moves and
    is kept only to document that failure.
    """
    _require_valid(a)
    if len(a.final_family) != 1:
        raise WrongKind(f"expected one final set, found {len(a.final_family)}")
    m = a.monoid
    if m.kind == PRODUCT:
        return a.replace(weights=_bracketed(a, lambda w: True))
    if m.kind != GENERALIZED:
        raise WrongKind(f"unknown monoid kind {m.kind!r}")

    unit_moves = _bracketed(a, lambda w: w == m.one)
    heavy = _bracketed(a, lambda w: w != m.one and w != m.zero)

    weights = {}
    for p, letter, q in unit_moves:
        weights[(Decoy(p), letter, Decoy(q))] = m.one
        if not literal_decoys:
            weights[(p, letter, Decoy(q))] = m.one
    for (p, letter, q), w in heavy.items():
        weights[(p, letter, q)] = w
        weights[(Decoy(p), letter, q)] = w
        if literal_decoys:
            weights[(p, letter, Decoy(q))] = w
    final = a.final_family[0]
    labels = dict(a.labels)
    labels.update({Decoy(q): "s_" + a.label(q) for q in a.states})
    return WeightedAutomaton(
        monoid=m,
        ap=a.ap,
        states=list(a.states) + [Decoy(q) for q in a.states],
        initial=set(a.initial) | {Decoy(q) for q in a.initial},
        final_family=(set(final) | {Decoy(q) for q in final},),
        weights=weights,
        labels=labels,
    )


def normalize(a: WeightedAutomaton) -> WeightedAutomaton:
    """Degeneralize, then remove epsilon moves."""
    return remove_epsilon(degeneralize(a))


def trim(a: WeightedAutomaton) -> WeightedAutomaton:
    """Drop states unreachable from the initial set."""
    seen = set(a.initial)
    stack = list(a.initial)
    while stack:
        p = stack.pop()
        for _, q, _ in a.edges_from(p):
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return a.replace(
        states=[q for q in a.states if q in seen],
        final_family=tuple(f & seen for f in a.final_family),
        weights={k: w for k, w in a.weights.items() if k[0] in seen},
    )


# --------------------------------------------------------------------------
# serialisation


def state_ids(a: WeightedAutomaton) -> Dict[Hashable, str]:
    """Stable ids ``q0, q1, ...`` following the order of the state labels."""
    ordered = sorted(a.states, key=lambda q: a.label(q))
    return {q: f"q{i}" for i, q in enumerate(ordered)}


def to_dict(a: WeightedAutomaton) -> dict:
    ids = state_ids(a)
    ordered = sorted(a.states, key=lambda q: int(ids[q][1:]))
    transitions = []
    for (p, letter, q), w in a.weights.items():
        transitions.append(
            {
                "from": ids[p],
                "letter": "eps" if letter is EPS else sorted(letter),
                "to": ids[q],
                "weight": format_weight(w),
            }
        )
    transitions.sort(
        key=lambda t: (int(t["from"][1:]), t["letter"] == "eps", str(t["letter"]), int(t["to"][1:]))
    )
    return {
        "monoid": a.monoid.name,
        "ap": list(a.ap),
        "states": [{"id": ids[q], "label": a.label(q)} for q in ordered],
        "initial": sorted((ids[q] for q in a.initial), key=lambda s: int(s[1:])),
        "finalFamily": [
            sorted((ids[q] for q in f), key=lambda s: int(s[1:])) for f in a.final_family
        ],
        "transitions": transitions,
    }


def to_json(a: WeightedAutomaton, indent: Optional[int] = 2) -> str:
    return json.dumps(to_dict(a), indent=indent, ensure_ascii=False)


def from_dict(data: Mapping) -> WeightedAutomaton:
    monoid = get_monoid(data["monoid"])
    states = [s["id"] for s in data["states"]]
    labels = {s["id"]: s.get("label", s["id"]) for s in data["states"]}
    weights = {}
    for t in data["transitions"]:
        letter = EPS if t["letter"] == "eps" else frozenset(t["letter"])
        w = monoid.weight(t["weight"])
        key = (t["from"], letter, t["to"])
        weights[key] = monoid.plus(weights[key], w) if key in weights else w
    return WeightedAutomaton(
        monoid=monoid,
        ap=data["ap"],
        states=states,
        initial=data["initial"],
        final_family=[set(f) for f in data["finalFamily"]],
        weights=weights,
        labels=labels,
    )


def from_json(text: str) -> WeightedAutomaton:
    return from_dict(json.loads(text))


def to_dot(a: WeightedAutomaton) -> str:
    """Graphviz rendering; a state's periphery count is 1 + its final-set count."""
    ids = state_ids(a)
    lines = ["digraph automaton {", "  rankdir=LR;", '  node [shape=circle];']
    for q in sorted(a.states, key=lambda q: int(ids[q][1:])):
        rings = 1 + sum(q in f for f in a.final_family)
        label = a.label(q).replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  {ids[q]} [label="{label}", peripheries={rings}];')
        if q in a.initial:
            lines.append(f'  init_{ids[q]} [shape=point]; init_{ids[q]} -> {ids[q]};')
    merged = defaultdict(list)
    for (p, letter, q), w in a.weights.items():
        merged[(ids[p], ids[q])].append(f"{letter_text(letter)}:{format_weight(w)}")
    for (p, q) in sorted(merged, key=lambda k: (int(k[0][1:]), int(k[1][1:]))):
        text = "\\n".join(sorted(merged[(p, q)]))
        lines.append(f'  {p} -> {q} [label="{text}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def weight_multiset(a: WeightedAutomaton) -> list:
    """Sorted list of the printed non-zero weights (a renaming-invariant summary)."""
    return sorted(format_weight(w) for w in a.weights.values())


def parse_letter(text: str, ap: Iterable[str]) -> frozenset:
    names = [s.strip() for s in text.strip().strip("{}").split(",") if s.strip()]
    unknown = set(names) - set(ap)
    if unknown:
        raise AutomatonError(f"unknown atoms {sorted(unknown)}")
    return frozenset(names)


__all__ = [
    "EPS",
    "Decoy",
    "WeightedAutomaton",
    "AutomatonError",
    "InvalidInput",
    "WrongKind",
    "all_letters",
    "letter_text",
    "validate",
    "epsilon_closure",
    "degeneralize",
    "remove_epsilon",
    "normalize",
    "trim",
    "state_ids",
    "to_dict",
    "to_json",
    "from_dict",
    "from_json",
    "to_dot",
    "weight_multiset",
    "parse_letter",
]
