"""Evaluation on lasso words.

Three evaluators live here:

* :func:`eval_semantics` computes the value of a formula directly, suffix
  by suffix;
* :func:`eval_behavior` computes the behavior of an epsilon-free Büchi
  automaton with a closed form per monoid over the product graph;
* :func:`eval_behavior_bruteforce` enumerates cycle combinations of the
  product graph of any (generalized, epsilon) automaton; it is slow and
  serves as the reference for the other two.
"""

from __future__ import annotations

import heapq
import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .automata import EPS, WeightedAutomaton, WrongKind, letter_text, normalize
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
    atoms,
    closure,
    in_translatable_fragment,
    reduce,
)
from .monoid import INF, NEG_INF, Monoid, Weight

__all__ = [
    "LassoWord",
    "LassoSyntaxError",
    "UnknownAtom",
    "TooLarge",
    "EquivReport",
    "parse_lasso",
    "eval_semantics",
    "default_horizon",
    "ProductGraph",
    "product_graph",
    "eval_behavior",
    "eval_behavior_bruteforce",
    "pipeline",
    "check_equivalence",
]


class LassoSyntaxError(ValueError):
    pass


class UnknownAtom(ValueError):
    pass


class TooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class LassoWord:
    """The infinite word ``stem . period^omega`` over sets of atoms."""

    stem: tuple
    period: tuple

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(frozenset(x) for x in self.stem))
        object.__setattr__(self, "period", tuple(frozenset(x) for x in self.period))
        if not self.period:
            raise ValueError("period must be non-empty")

    @property
    def size(self) -> int:
        """Number of distinct suffix positions."""
        return len(self.stem) + len(self.period)

    def letter(self, i: int) -> frozenset:
        return self.stem[i] if i < len(self.stem) else self.period[i - len(self.stem)]

    def succ(self, i: int) -> int:
        return i + 1 if i + 1 < self.size else len(self.stem)

    def atoms(self) -> set:
        return set().union(*self.stem, *self.period)

    def unrolled(self) -> "LassoWord":
        """Same word with one period letter moved into the stem."""
        p = self.period
        return LassoWord(self.stem + p[:1], p[1:] + p[:1])

    def __str__(self):
        stem = "".join(letter_text(x) for x in self.stem)
        period = "".join(letter_text(x) for x in self.period)
        return f"{stem}({period})^w"


_LASSO = re.compile(r"^\s*((?:\{[^{}()]*\}\s*)*)\(\s*((?:\{[^{}()]*\}\s*)+)\)\s*\^\s*w\s*$")
_LETTER = re.compile(r"\{([^{}]*)\}")


def parse_lasso(text: str, ap: Optional[Sequence[str]] = None) -> LassoWord:
    """Parse ``{a,b}{a}({b}{})^w``; ``{}`` is the empty letter."""
    m = _LASSO.match(text)
    if not m:
        raise LassoSyntaxError(f"not a lasso word: {text!r}")

    def letters(part):
        out = []
        for body in _LETTER.findall(part):
            names = [s.strip() for s in body.split(",") if s.strip()]
            if ap is not None:
                unknown = set(names) - set(ap)
                if unknown:
                    raise UnknownAtom(f"unknown atoms {sorted(unknown)} in {text!r}")
            out.append(frozenset(names))
        return out

    return LassoWord(letters(m.group(1)), letters(m.group(2)))


# --------------------------------------------------------------------------
# direct semantics


def default_horizon(w: LassoWord) -> int:
    return w.size + 2 * len(w.period)


def _suffix_lasso(values: list, w: LassoWord, i: int):
    """Split the value sequence read from position ``i`` into stem and period."""
    s = len(w.stem)
    if i < s:
        return values[i:s], values[s:]
    return (), values[i:] + values[s:i]


def eval_semantics(
    f: Formula,
    w: LassoWord,
    monoid: Monoid,
    horizon: Optional[int] = None,
    all_positions: bool = False,
    ap: Optional[Sequence[str]] = None,
):
    """Value of ``f`` on ``w``.

    Until is summed over split points ``0..horizon`` (default
    :func:`default_horizon`).  With ``all_positions`` the values at every
    suffix position are returned as a list instead.  When ``ap`` is given,
    atoms of ``f`` or ``w`` outside it raise :class:`UnknownAtom`.
    """
    if ap is not None:
        unknown = (atoms(f) | w.atoms()) - set(ap)
        if unknown:
            raise UnknownAtom(f"unknown atoms {sorted(unknown)}")
    n = w.size
    h = default_horizon(w) if horizon is None else horizon
    m = monoid
    val: Dict[Formula, list] = {}
    for g in closure(f):
        if isinstance(g, Const):
            row = [g.value] * n
        elif isinstance(g, Atom):
            row = [m.one if g.name in w.letter(i) else m.zero for i in range(n)]
        elif isinstance(g, NegAtom):
            row = [m.zero if g.name in w.letter(i) else m.one for i in range(n)]
        elif isinstance(g, And):
            a, b = val[g.left], val[g.right]
            row = [m.times(a[i], b[i]) for i in range(n)]
        elif isinstance(g, Or):
            a, b = val[g.left], val[g.right]
            row = [m.plus(a[i], b[i]) for i in range(n)]
        elif isinstance(g, Next):
            a = val[g.sub]
            row = [a[w.succ(i)] for i in range(n)]
        elif isinstance(g, Always):
            a = val[g.sub]
            row = [m.val_omega(*_suffix_lasso(a, w, i)) for i in range(n)]
        elif isinstance(g, Until):
            a, b = val[g.left], val[g.right]
            row = []
            for i in range(n):
                total = m.zero
                prefix = []
                j = i
                for _ in range(h + 1):
                    total = m.plus(total, m.val_finite(prefix + [b[j]]))
                    prefix.append(a[j])
                    j = w.succ(j)
                row.append(total)
        else:
            raise TypeError(g)
        val[g] = row
    result = val[f]
    return result if all_positions else result[0]


# --------------------------------------------------------------------------
# behavior of a Büchi automaton without epsilon moves


class ProductGraph:
    """Reachable part of the product of an automaton with the positions of a word.

    Nodes are ``(state, position)`` pairs numbered in discovery order.
    ``edges`` holds ``(u, v, weight, eps)`` with integer endpoints.
    """

    def __init__(self, nodes: list, edges: list):
        self.nodes = nodes
        self.index = {v: i for i, v in enumerate(nodes)}
        self.edges = edges
        self.out: List[list] = [[] for _ in nodes]
        for e in edges:
            self.out[e[0]].append(e)

    def __len__(self):
        return len(self.nodes)

    def components(self, edges) -> List[List[int]]:
        """Non-trivial strongly connected components of the subgraph ``edges``."""
        n = len(self.nodes)
        if not edges or not n:
            return []
        rows = np.fromiter((e[0] for e in edges), dtype=np.int64, count=len(edges))
        cols = np.fromiter((e[1] for e in edges), dtype=np.int64, count=len(edges))
        adj = csr_matrix((np.ones(len(edges), dtype=np.int8), (rows, cols)), shape=(n, n))
        _, labels = connected_components(adj, directed=True, connection="strong")
        groups: Dict[int, List[int]] = {}
        for v, c in enumerate(labels):
            groups.setdefault(int(c), []).append(v)
        loops = {e[0] for e in edges if e[0] == e[1]}
        return [c for c in groups.values() if len(c) > 1 or c[0] in loops]


def product_graph(a: WeightedAutomaton, w: LassoWord, *, epsilon: bool = False) -> ProductGraph:
    """Product of ``a`` and ``w``, restricted to nodes reachable from the initial ones.

    With ``epsilon`` the ``one``-weighted epsilon moves become edges flagged
    ``eps``; other epsilon moves are dropped.  Edges of weight ``zero`` never
    appear since the automaton does not store them.
    """
    nodes = [(q, 0) for q in a.initial]
    index = {v: i for i, v in enumerate(nodes)}
    edges = []
    k = 0
    while k < len(nodes):
        q, i = nodes[k]
        letter = w.letter(i)
        nxt = w.succ(i)
        for b, r, weight in a.edges_from(q):
            if b is EPS:
                if not epsilon or weight != a.monoid.one:
                    continue
                target = (r, i)
            elif b == letter:
                target = (r, nxt)
            else:
                continue
            j = index.get(target)
            if j is None:
                j = index[target] = len(nodes)
                nodes.append(target)
            edges.append((k, j, weight, b is EPS))
        k += 1
    return ProductGraph(nodes, edges)


def _check_wba(a: WeightedAutomaton):
    if a.has_epsilon:
        raise WrongKind("automaton has epsilon moves; remove them first")
    if len(a.final_family) > 1:
        raise WrongKind("automaton has several final sets; degeneralize first")


def eval_behavior(a: WeightedAutomaton, w: LassoWord) -> Weight:
    """Behavior of an epsilon-free Büchi automaton on ``w``."""
    _check_wba(a)
    m = a.monoid
    if not a.initial:
        return m.zero
    g = product_graph(a, w)
    final = a.accepting_family()[0]
    accepting = {k for k, v in enumerate(g.nodes) if v[0] in final}
    sources = range(len(a.initial))
    if m.name == "tropical":
        return _tropical_behavior(g, accepting, sources)
    if m.name == "liminf":
        return _liminf_behavior(g, accepting, sources)
    raise WrongKind(f"no closed form for monoid {m.name}")


def _good_nodes(g: ProductGraph, edges, accepting) -> set:
    out = set()
    for comp in g.components(edges):
        if accepting.intersection(comp):
            out.update(comp)
    return out


def _tropical_behavior(g: ProductGraph, accepting, sources) -> Weight:
    targets = _good_nodes(g, [e for e in g.edges if e[2] == 0], accepting)
    if not targets:
        return INF
    dist = {s: 0 for s in sources}
    heap = [(0, s) for s in sources]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u in targets:
            return d
        for _, v, weight, _ in g.out[u]:
            nd = d + weight
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return INF


def _liminf_behavior(g: ProductGraph, accepting, sources) -> Weight:
    best = NEG_INF
    finite = sorted({e[2] for e in g.edges if e[2] != INF}, reverse=True)
    for t in finite:
        kept = [e for e in g.edges if e[2] >= t]
        found = False
        for comp in g.components(kept):
            inside = set(comp)
            if accepting & inside and any(
                e[2] != INF for e in kept if e[0] in inside and e[1] in inside
            ):
                found = True
                break
        if found:
            best = t
            break
    # tails made of unit moves only: the value is the worst finite stem weight
    targets = _good_nodes(g, [e for e in g.edges if e[2] == INF], accepting)
    if targets:
        width = _widest(g, sources)
        stem = max((width[v] for v in targets if v in width), default=NEG_INF)
        if stem > best:
            best = stem
    return best


def _widest(g: ProductGraph, sources) -> dict:
    """Max over paths of the min edge weight, for every reachable node."""
    width = {s: INF for s in sources}
    counter = itertools.count()
    heap = [(-INF, next(counter), s) for s in sources]
    done = set()
    while heap:
        negw, _, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for _, v, weight, _ in g.out[u]:
            cand = min(-negw, weight)
            if v not in width or cand > width[v]:
                width[v] = cand
                heapq.heappush(heap, (-cand, next(counter), v))
    return width


# --------------------------------------------------------------------------
# brute force over cycle combinations


def eval_behavior_bruteforce(
    a: WeightedAutomaton,
    w: LassoWord,
    *,
    max_nodes: int = 40,
) -> Weight:
    """Behavior of any automaton of the family on ``w``, by enumeration.

    Works on the product graph with unit epsilon moves interleaved.  For
    each letter weight ``t`` the edges whose weight is at least ``t`` (in
    the natural order) split into strongly connected pieces; each piece is
    turned into an explicit closed walk over all of its edges and checked
    against every final set.  Each such cycle is entered from every node on
    it, with the best stem into that node, and valued by the monoid's
    generic valuation; the values are summed.

    A stem ``u`` enters only through its finite valuation ``val_finite(u)``,
    which is the product of its weights: both monoids satisfy
    ``val(u . v^w) = val((val_finite(u)) . v^w)`` and have a total natural
    order, so the best stem per node is a path sum computed by relaxation.
    Raises :class:`TooLarge` past ``max_nodes`` product nodes.
    """
    m = a.monoid
    if not a.initial:
        return m.zero
    g = product_graph(a, w, epsilon=True)
    if len(g) > max_nodes:
        raise TooLarge(f"product graph has {len(g)} nodes")
    family = [{k for k, v in enumerate(g.nodes) if v[0] in f} for f in a.accepting_family()]
    best = _stem_values(g, range(len(a.initial)), m)
    thresholds = {e[2] for e in g.edges if not e[3]}

    total = m.zero
    for t in thresholds:
        edges = [e for e in g.edges if e[3] or m.natural_leq(t, e[2])]
        for comp in g.components(edges):
            inside = set(comp)
            inner = [e for e in edges if e[0] in inside and e[1] in inside]
            if all(e[3] for e in inner):
                continue
            if not all(inside & f for f in family):
                continue
            walk = _covering_walk(inner)
            for end in comp:
                if end not in best:
                    continue
                period = [e[2] for e in _rotate(walk, end) if not e[3]]
                total = m.plus(total, m.val_omega([best[end]], period))
    return total


def _stem_values(g: ProductGraph, sources, m: Monoid) -> dict:
    """Sum over all paths from ``sources`` of the product of letter weights."""
    best = {s: m.one for s in sources}
    for _ in range(len(g) * max(1, len(g.edges)) + 1):
        changed = False
        for u, v, weight, eps in g.edges:
            if u not in best:
                continue
            cand = best[u] if eps else m.times(best[u], weight)
            new = m.plus(best[v], cand) if v in best else cand
            if v not in best or new != best[v]:
                best[v] = new
                changed = True
        if not changed:
            return best
    raise RuntimeError("stem relaxation did not settle")


def _shortest_path(adj: dict, source, target) -> list:
    parent = {source: None}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        if u == target:
            break
        for v in adj.get(u, ()):
            if v not in parent:
                parent[v] = u
                queue.append(v)
    path = [target]
    while path[-1] != source:
        path.append(parent[path[-1]])
    return path[::-1]


def _covering_walk(edges) -> list:
    """A closed walk using every given edge, inside their strongly connected graph."""
    adj: Dict[int, list] = {}
    by_pair = {}
    for e in edges:
        adj.setdefault(e[0], []).append(e[1])
        by_pair[(e[0], e[1])] = e
    start = edges[0][0]
    here = start
    walk = []

    def go(target):
        nonlocal here
        path = _shortest_path(adj, here, target)
        walk.extend(by_pair[(u, v)] for u, v in zip(path, path[1:]))
        here = target

    for e in edges:
        go(e[0])
        walk.append(e)
        here = e[1]
    go(start)
    return walk


def _rotate(walk, node) -> list:
    for k, edge in enumerate(walk):
        if edge[0] == node:
            return walk[k:] + walk[:k]
    raise ValueError("node not on walk")


# --------------------------------------------------------------------------
# equivalence driver


@dataclass
class EquivReport:
    formula: Formula
    samples: int = 0
    mismatches: List[tuple] = field(default_factory=list)
    oracle_checks: int = 0
    oracle_mismatches: List[tuple] = field(default_factory=list)
    horizon_mismatches: List[tuple] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.mismatches or self.oracle_mismatches or self.horizon_mismatches)


def pipeline(f: Formula, monoid: Monoid, ap=None, cap: int = 10_000) -> WeightedAutomaton:
    """Translate, degeneralize and remove epsilon moves."""
    from .translate import translate

    return normalize(translate(f, monoid, ap=ap, cap=cap).automaton)


def check_equivalence(
    f: Formula,
    monoid: Monoid,
    words: Sequence[LassoWord],
    ap=None,
    cap: int = 10_000,
    oracle_nodes: int = 40,
    check_horizon: bool = True,
) -> EquivReport:
    """Compare the semantics of ``f`` with the behavior of its automaton."""
    g = reduce(f, monoid)
    if not in_translatable_fragment(g, monoid):
        from .translate import FragmentMismatch

        raise FragmentMismatch(f"formula is outside the translatable fragment: {g}")
    a = pipeline(g, monoid, ap=ap, cap=cap)
    report = EquivReport(formula=g)
    for word in words:
        report.samples += 1
        sem = eval_semantics(g, word, monoid)
        beh = eval_behavior(a, word)
        if sem != beh:
            report.mismatches.append((g, word, sem, beh))
        if check_horizon:
            far = eval_semantics(g, word, monoid, horizon=4 * default_horizon(word))
            if far != sem:
                report.horizon_mismatches.append((g, word, sem, far))
        try:
            brute = eval_behavior_bruteforce(a, word, max_nodes=oracle_nodes)
        except TooLarge:
            continue
        report.oracle_checks += 1
        if brute != beh:
            report.oracle_mismatches.append((g, word, brute, beh))
    return report
