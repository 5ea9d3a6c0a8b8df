"""Consistent sets of formulas, next formulas with their weights, reachability."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional

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
    closure,
    is_reduced,
    reduce,
    to_text,
)
from .monoid import Monoid, Weight


MAX_HEIGHT = 100


class CapExceeded(RuntimeError):
    """Reachability did not settle within the given bounds."""

    def __init__(self, cap: int, reason: Optional[str] = None):
        super().__init__(reason or f"more than {cap} consistent sets generated")
        self.cap = cap


@dataclass(frozen=True)
class ConsistentSet:
    """A set of formulas closed under the consistency rules, tagged by its anchor.

    The anchor of a non-empty set is its unique largest member, so two sets
    are equal exactly when their members are.  The empty set has no anchor.
    """

    anchor: Optional[Formula] = field(compare=False)
    members: frozenset

    def __bool__(self):
        return bool(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, f):
        return f in self.members

    def sorted_members(self) -> list:
        return sorted(self.members, key=lambda g: (g.size, g.text), reverse=True)

    def label(self, monoid: Optional[Monoid] = None) -> str:
        return "{" + ", ".join(to_text(g, monoid) for g in self.sorted_members()) + "}"

    @property
    def positive_atoms(self) -> frozenset:
        return frozenset(g.name for g in self.members if isinstance(g, Atom))

    @property
    def negative_atoms(self) -> frozenset:
        return frozenset(g.name for g in self.members if isinstance(g, NegAtom))

    def admits(self, letter) -> bool:
        """Whether a letter (set of atoms) agrees with the literals in the set."""
        return self.positive_atoms <= letter and not (self.negative_atoms & letter)

    def __repr__(self):
        return f"ConsistentSet{self.label()}"


EMPTY = ConsistentSet(None, frozenset())


def violations(members, anchor: Formula) -> list:
    """Reasons why ``members`` is not ``anchor``-consistent (empty list if it is)."""
    members = frozenset(members)
    if not members:
        return []
    out = []
    cl = set(closure(anchor))
    if anchor not in members:
        out.append(f"anchor {anchor} missing")
    for g in members:
        if g not in cl:
            out.append(f"{g} not in the closure")
        if isinstance(g, Atom) and NegAtom(g.name) in members:
            out.append(f"both {g.name} and !{g.name}")
        if isinstance(g, And) and not (g.left in members and g.right in members):
            out.append(f"conjunction {g} without both sides")
        if isinstance(g, (Or, Until)) and not (g.left in members or g.right in members):
            out.append(f"{g} without either side")
        if isinstance(g, Always) and g.sub not in members:
            out.append(f"{g} without its body")
    return out


def is_consistent(members, anchor: Formula) -> bool:
    return not violations(members, anchor)


_CACHE: Dict[Formula, tuple] = {}
_CACHE_LIMIT = 8192


def iter_consistent_sets(f: Formula) -> Iterator[ConsistentSet]:
    """The non-empty ``f``-consistent sets, lazily.

    A run that is consumed to the end is cached, so repeated enumeration of
    the same formula is cheap while an abandoned one costs only what was read.
    """
    hit = _CACHE.get(f)
    if hit is not None:
        yield from hit
        return
    found = []
    for b in _enumerate(f):
        found.append(b)
        yield b
    if len(_CACHE) >= _CACHE_LIMIT:
        _CACHE.clear()
    _CACHE[f] = tuple(found)


def _enumerate(f: Formula) -> Iterator[ConsistentSet]:
    """Backtracking enumeration of the non-empty ``f``-consistent sets.

    Formulas are decided parent-first, so the obligations of chosen members
    are known by the time their subformulas are reached.
    """
    order = list(reversed(closure(f)))
    index = {g: i for i, g in enumerate(order)}
    chosen: List[Formula] = []
    inside = set()

    def forced(g):
        # g is required by a chosen conjunction or always-node
        return g in required

    required: Dict[Formula, int] = {}

    def require(g):
        required[g] = required.get(g, 0) + 1

    def release(g):
        required[g] -= 1
        if not required[g]:
            del required[g]

    def disjunctive_ok(upto):
        # every chosen or/until node whose sides are both decided has a side inside
        for g in chosen:
            if isinstance(g, (Or, Until)):
                if index[g.left] <= upto and index[g.right] <= upto:
                    if g.left not in inside and g.right not in inside:
                        return False
        return True

    def obligations(g):
        if isinstance(g, And):
            return (g.left, g.right)
        if isinstance(g, Always):
            return (g.sub,)
        return ()

    def clashes(g):
        if isinstance(g, Atom):
            return NegAtom(g.name) in inside
        if isinstance(g, NegAtom):
            return Atom(g.name) in inside
        return False

    def go(i):
        if i == len(order):
            yield ConsistentSet(f, frozenset(inside))
            return
        g = order[i]
        options = (True,) if (i == 0 or forced(g)) else (True, False)
        for take in options:
            if take:
                if clashes(g):
                    continue
                inside.add(g)
                chosen.append(g)
                for h in obligations(g):
                    require(h)
            if disjunctive_ok(i):
                yield from go(i + 1)
            if take:
                for h in obligations(g):
                    release(h)
                chosen.pop()
                inside.discard(g)

    yield from go(0)


def consistent_sets(f: Formula) -> list:
    """All ``f``-consistent sets, the empty one first, then by size and text."""
    found = sorted(iter_consistent_sets(f), key=lambda b: (len(b), b.label()))
    return [EMPTY] + found


def consistent_sets_bruteforce(f: Formula) -> list:
    """Powerset filter; exponential, used as a test oracle."""
    from itertools import combinations

    cl = closure(f)
    out = [EMPTY]
    rest = [g for g in cl if g != f]
    for r in range(len(rest) + 1):
        for combo in combinations(rest, r):
            members = frozenset(combo) | {f}
            if is_consistent(members, f):
                out.append(ConsistentSet(f, members))
    return sorted(out, key=lambda b: (len(b), b.label()))


def maximal_consistent_subset(b: ConsistentSet, g: Formula) -> ConsistentSet:
    """The greatest ``g``-consistent subset of ``b`` (empty if ``g`` is not in ``b``)."""
    if g not in b.members:
        return EMPTY
    if g == b.anchor:
        return b
    keep = set(b.members) & set(closure(g))
    changed = True
    while changed:
        changed = False
        for h in list(keep):
            if violations_local(h, keep):
                keep.discard(h)
                changed = True
    if g not in keep:
        return EMPTY
    return ConsistentSet(g, frozenset(keep))


def violations_local(h: Formula, keep) -> bool:
    if isinstance(h, And):
        return not (h.left in keep and h.right in keep)
    if isinstance(h, (Or, Until)):
        return not (h.left in keep or h.right in keep)
    if isinstance(h, Always):
        return h.sub not in keep
    return False


def _merge(table: dict, key: Formula, value: Weight, monoid: Monoid):
    table[key] = monoid.plus(table[key], value) if key in table else value


def next_table(b: ConsistentSet, monoid: Monoid) -> Dict[Formula, Weight]:
    """Next formulas of ``b`` mapped to their weights.

    Entries produced twice for the same formula are combined with ``plus``.
    """
    if not b:
        return {Const(monoid.zero): monoid.zero}
    return dict(_next(b, b.anchor, monoid))


def _next(b: ConsistentSet, g: Formula, monoid: Monoid) -> Dict[Formula, Weight]:
    one = Const(monoid.one)
    if isinstance(g, Const):
        return {one: g.value}
    if isinstance(g, (Atom, NegAtom)):
        return {one: monoid.one}
    if isinstance(g, Next):
        return {g.sub: monoid.one}

    def sub(h):
        return next_table(maximal_consistent_subset(b, h), monoid)

    out: Dict[Formula, Weight] = {}
    if isinstance(g, And):
        left, right = sub(g.left), sub(g.right)
        for p, vp in left.items():
            for q, vq in right.items():
                _merge(out, And(p, q), monoid.times(vp, vq), monoid)
    elif isinstance(g, Or):
        for table in (sub(g.left), sub(g.right)):
            for p, vp in table.items():
                _merge(out, p, vp, monoid)
    elif isinstance(g, Until):
        for p, vp in sub(g.right).items():
            _merge(out, p, vp, monoid)
        for p, vp in sub(g.left).items():
            _merge(out, And(g, p), vp, monoid)
    elif isinstance(g, Always):
        for p, vp in sub(g.sub).items():
            _merge(out, And(g, p), vp, monoid)
    else:
        raise TypeError(g)
    return out


def successors(b: ConsistentSet, monoid: Monoid) -> Iterator[ConsistentSet]:
    """One step of the reachability relation (duplicates possible)."""
    if b and not is_reduced(b.anchor, monoid):
        yield EMPTY
        yield from iter_consistent_sets(reduce(b.anchor, monoid))
        return
    for xi in next_table(b, monoid):
        yield EMPTY
        yield from iter_consistent_sets(xi)


def reach(start, monoid: Monoid, cap: int = 10_000, max_height: Optional[int] = MAX_HEIGHT) -> list:
    """Breadth-first closure of ``start`` (a set or an iterable of sets).

    The result lists the start sets first, then everything reachable, in
    discovery order.  Raises :class:`CapExceeded` when more than ``cap``
    distinct sets turn up, or when an anchor grows taller than
    ``max_height``: diverging formulas gain one level of nesting per step,
    and past that point every step costs more than the last.  ``None``
    turns the height check off.
    """
    if isinstance(start, ConsistentSet):
        start = [start]
    seen: Dict[ConsistentSet, None] = {}
    queue = deque()
    for b in start:
        if b not in seen:
            seen[b] = None
            queue.append(b)
    if len(seen) > cap:
        raise CapExceeded(cap)
    while queue:
        b = queue.popleft()
        for c in successors(b, monoid):
            if c not in seen:
                seen[c] = None
                if len(seen) > cap:
                    raise CapExceeded(cap)
                if max_height is not None and c and c.anchor.height > max_height:
                    raise CapExceeded(cap, f"anchor nesting exceeds height {max_height}")
                queue.append(c)
    return list(seen)
