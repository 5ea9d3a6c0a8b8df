"""Weighted LTL syntax: AST, parser, printer, closure, fragments, reduction.

Grammar of the concrete syntax (``U`` binds tighter than ``&``, which binds
tighter than ``|``; ``&`` and ``|`` associate to the left)::

    formula  := or
    or       := and ('|' and)*
    and      := unary ('&' unary)*
    unary    := 'X' unary | 'G' unary | primary ['U' unary]
    primary  := ident | '!' ident | 'true' | weight | '(' formula ')'

Constants whose value is the monoid's ``one`` play the role of ``true``.
Most predicates here need the monoid because ``0`` and ``1`` of the weight
structure are what make a constant boolean.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional

from .monoid import Monoid, Weight, WeightError, as_weight, format_weight


class FormulaError(ValueError):
    pass


class ParseError(FormulaError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownAtomError(FormulaError):
    pass


class FormViolation(FormulaError):
    pass


class Formula:
    """Base class of the AST.  Equality and hashing go through the printed form."""

    __slots__ = ()

    def children(self) -> tuple:
        return ()

    @cached_property
    def text(self) -> str:
        return self._render()

    def _render(self) -> str:
        raise NotImplementedError

    @cached_property
    def _hash(self) -> int:
        return hash((type(self).__name__, self.text))

    @cached_property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.children())

    @cached_property
    def _closure(self) -> tuple:
        seen = {}
        for c in self.children():
            for g in c._closure:
                seen.setdefault(g, None)
        seen.setdefault(self, None)
        return tuple(seen)

    @cached_property
    def height(self) -> int:
        return 1 + max((c.height for c in self.children()), default=-1)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Formula):
            return NotImplemented
        return type(self) is type(other) and self.text == other.text

    def __hash__(self):
        return self._hash

    def __str__(self):
        return self.text

    def __repr__(self):
        return f"{type(self).__name__}[{self.text}]"

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)


@dataclass(frozen=True, eq=False, repr=False)
class Const(Formula):
    value: Weight

    def __post_init__(self):
        object.__setattr__(self, "value", as_weight(self.value))

    def _render(self):
        return format_weight(self.value)


@dataclass(frozen=True, eq=False, repr=False)
class Atom(Formula):
    name: str

    def _render(self):
        return self.name


@dataclass(frozen=True, eq=False, repr=False)
class NegAtom(Formula):
    name: str

    def _render(self):
        return "!" + self.name


@dataclass(frozen=True, eq=False, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def _render(self):
        return f"({self.left.text} & {self.right.text})"


@dataclass(frozen=True, eq=False, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def _render(self):
        return f"({self.left.text} | {self.right.text})"


@dataclass(frozen=True, eq=False, repr=False)
class Next(Formula):
    sub: Formula

    def children(self):
        return (self.sub,)

    def _render(self):
        return f"(X {self.sub.text})"


@dataclass(frozen=True, eq=False, repr=False)
class Until(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def _render(self):
        return f"({self.left.text} U {self.right.text})"


@dataclass(frozen=True, eq=False, repr=False)
class Always(Formula):
    sub: Formula

    def children(self):
        return (self.sub,)

    def _render(self):
        return f"(G {self.sub.text})"


def true(monoid: Monoid) -> Const:
    return Const(monoid.one)


def false(monoid: Monoid) -> Const:
    return Const(monoid.zero)


def is_true(f: Formula, monoid: Monoid) -> bool:
    return isinstance(f, Const) and f.value == monoid.one


def to_text(f: Formula, monoid: Optional[Monoid] = None) -> str:
    """Fully parenthesised text; with a monoid, its ``one`` prints as ``true``."""
    if monoid is None:
        return f.text
    if isinstance(f, Const):
        return "true" if f.value == monoid.one else f.text
    if isinstance(f, (Atom, NegAtom)):
        return f.text
    if isinstance(f, And):
        return f"({to_text(f.left, monoid)} & {to_text(f.right, monoid)})"
    if isinstance(f, Or):
        return f"({to_text(f.left, monoid)} | {to_text(f.right, monoid)})"
    if isinstance(f, Until):
        return f"({to_text(f.left, monoid)} U {to_text(f.right, monoid)})"
    if isinstance(f, Next):
        return f"(X {to_text(f.sub, monoid)})"
    if isinstance(f, Always):
        return f"(G {to_text(f.sub, monoid)})"
    raise TypeError(f)


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<weight>-?inf\b|-?\d+(?:/\d+|\.\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[()&|!])"
    r")"
)
_RESERVED = {"X", "G", "U", "true", "inf"}


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, ap, monoid):
        self.tokens = _tokenize(text)
        self.i = 0
        self.ap = ap
        self.monoid = monoid

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def parse(self):
        f = self.or_expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return f

    def or_expr(self):
        f = self.and_expr()
        while self.peek()[1] == "|":
            self.take()
            f = Or(f, self.and_expr())
        return f

    def and_expr(self):
        f = self.unary()
        while self.peek()[1] == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        kind, val, pos = self.peek()
        if kind == "ident" and val == "X":
            self.take()
            return Next(self.unary())
        if kind == "ident" and val == "G":
            self.take()
            return Always(self.unary())
        left = self.primary()
        if self.peek()[1] == "U" and self.peek()[0] == "ident":
            self.take()
            return Until(left, self.unary())
        return left

    def atom_name(self, val, pos):
        if val in _RESERVED:
            raise ParseError(f"reserved word {val!r} used as an atom", pos)
        if self.ap is not None and val not in self.ap:
            raise UnknownAtomError(f"unknown atom {val!r} at position {pos}")
        return val

    def primary(self):
        kind, val, pos = self.take()
        if kind == "op" and val == "(":
            f = self.or_expr()
            self.expect(")")
            return f
        if kind == "op" and val == "!":
            kind2, val2, pos2 = self.take()
            if kind2 != "ident":
                raise ParseError("expected an atom after '!'", pos2)
            return NegAtom(self.atom_name(val2, pos2))
        if kind == "ident" and val == "true":
            return Const(self.monoid.one)
        if kind == "ident":
            return Atom(self.atom_name(val, pos))
        if kind == "weight":
            try:
                return Const(self.monoid.weight(val))
            except WeightError as exc:
                raise FormulaError(f"{exc} (at position {pos})") from None
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)


def parse(text: str, ap, monoid: Monoid) -> Formula:
    """Parse ``text`` into a formula over the atoms ``ap`` (``None`` = any)."""
    return _Parser(text, set(ap) if ap is not None else None, monoid).parse()


# --------------------------------------------------------------------------
# structure


def subformulas(f: Formula) -> Iterator[Formula]:
    """Post-order traversal, repeats included."""
    for c in f.children():
        yield from subformulas(c)
    yield f


def closure(f: Formula) -> tuple:
    """``f`` and all of its subformulas, in post-order of first occurrence."""
    return f._closure


def atoms(f: Formula) -> set:
    return {g.name for g in closure(f) if isinstance(g, (Atom, NegAtom))}


def untils(f: Formula) -> tuple:
    return tuple(g for g in closure(f) if isinstance(g, Until))


def conjuncts(f: Formula) -> list:
    """Leaves of the maximal conjunction tree rooted at ``f``, left to right."""
    if isinstance(f, And):
        return conjuncts(f.left) + conjuncts(f.right)
    return [f]


# --------------------------------------------------------------------------
# fragments


def is_boolean(f: Formula, monoid: Monoid) -> bool:
    if isinstance(f, Const):
        return f.value == monoid.zero or f.value == monoid.one
    if isinstance(f, (Atom, NegAtom)):
        return True
    return all(is_boolean(c, monoid) for c in f.children())


def _step_disjunct(d: Formula, monoid: Monoid, restricted: bool) -> bool:
    def weight_ok(c):
        return isinstance(c, Const) and not (restricted and monoid.is_unit_like(c.value))

    if weight_ok(d):
        return True
    if isinstance(d, And):
        if weight_ok(d.left) and is_boolean(d.right, monoid):
            return True
        if weight_ok(d.right) and is_boolean(d.left, monoid):
            return True
    return not restricted and is_boolean(d, monoid)


def _disjuncts(f: Formula) -> list:
    if isinstance(f, Or):
        return _disjuncts(f.left) + _disjuncts(f.right)
    return [f]


def is_step(f: Formula, monoid: Monoid) -> bool:
    """Disjunction of ``k & phi`` / ``phi & k`` / ``k`` / boolean disjuncts."""
    return all(_step_disjunct(d, monoid, False) for d in _disjuncts(f))


def is_restricted_step(f: Formula, monoid: Monoid) -> bool:
    """Like :func:`is_step` but every weight avoids ``zero`` and ``one``."""
    return all(_step_disjunct(d, monoid, True) for d in _disjuncts(f))


def is_rultl(f: Formula, monoid: Monoid) -> bool:
    if isinstance(f, Const) or is_boolean(f, monoid):
        return True
    if isinstance(f, Next):
        return is_rultl(f.sub, monoid)
    if isinstance(f, Or):
        return is_rultl(f.left, monoid) and is_rultl(f.right, monoid)
    if isinstance(f, And):
        return (is_boolean(f.left, monoid) and is_rultl(f.right, monoid)) or (
            is_boolean(f.right, monoid) and is_rultl(f.left, monoid)
        )
    if isinstance(f, Until):
        return is_step(f.left, monoid) and is_step(f.right, monoid)
    if isinstance(f, Always):
        return is_step(f.sub, monoid)
    return False


def _trultl_conjunct_partner(g: Formula, monoid: Monoid) -> bool:
    if is_boolean(g, monoid) or is_restricted_step(g, monoid):
        return True
    if isinstance(g, Until):
        return is_restricted_step(g.left, monoid) and is_restricted_step(g.right, monoid)
    if isinstance(g, Always):
        return is_restricted_step(g.sub, monoid)
    return False


def is_trultl(f: Formula, monoid: Monoid) -> bool:
    if isinstance(f, Const) or is_boolean(f, monoid):
        return True
    if isinstance(f, Next):
        return is_trultl(f.sub, monoid)
    if isinstance(f, Or):
        return is_trultl(f.left, monoid) and is_trultl(f.right, monoid)
    if isinstance(f, And):
        return (is_boolean(f.left, monoid) and _trultl_conjunct_partner(f.right, monoid)) or (
            is_boolean(f.right, monoid) and _trultl_conjunct_partner(f.left, monoid)
        )
    if isinstance(f, Until):
        return is_restricted_step(f.left, monoid) and is_restricted_step(f.right, monoid)
    if isinstance(f, Always):
        return is_restricted_step(f.sub, monoid)
    return False


def _until_under_next(f: Formula, under: bool = False) -> bool:
    if isinstance(f, Until) and under:
        return True
    under = under or isinstance(f, Next)
    return any(_until_under_next(c, under) for c in f.children())


def _chains_reduced(f: Formula, monoid: Monoid) -> bool:
    if isinstance(f, And):
        leaves = conjuncts(f)
        seen = set()
        for leaf in leaves:
            if is_true(leaf, monoid):
                return False
            if is_boolean(leaf, monoid):
                if leaf in seen:
                    return False
                seen.add(leaf)
        return all(_chains_reduced(leaf, monoid) for leaf in leaves)
    return all(_chains_reduced(c, monoid) for c in f.children())


def is_reduced(f: Formula, monoid: Monoid) -> bool:
    return _chains_reduced(f, monoid) and not _until_under_next(f)


@dataclass(frozen=True)
class FragmentReport:
    is_boolean: bool
    is_step: bool
    is_restricted_step: bool
    is_rultl: bool
    is_trultl: bool
    is_reduced: bool

    def lines(self) -> list:
        return [f"{name}: {'yes' if value else 'no'}" for name, value in (
            ("bLTL", self.is_boolean),
            ("stLTL", self.is_step),
            ("r-stLTL", self.is_restricted_step),
            ("RULTL", self.is_rultl),
            ("t-RULTL", self.is_trultl),
            ("reduced", self.is_reduced),
        )]


def classify_fragment(f: Formula, monoid: Monoid) -> FragmentReport:
    return FragmentReport(
        is_boolean=is_boolean(f, monoid),
        is_step=is_step(f, monoid),
        is_restricted_step=is_restricted_step(f, monoid),
        is_rultl=is_rultl(f, monoid),
        is_trultl=is_trultl(f, monoid),
        is_reduced=is_reduced(f, monoid),
    )


def in_translatable_fragment(f: Formula, monoid: Monoid) -> bool:
    """RULTL for product monoids, t-RULTL for generalized ones."""
    from .monoid import PRODUCT

    return is_rultl(f, monoid) if monoid.kind == PRODUCT else is_trultl(f, monoid)


# --------------------------------------------------------------------------
# reduction


def _push_next(f: Formula) -> Formula:
    """Apply X to an already next-normalised formula."""
    if isinstance(f, Const):
        return f
    if isinstance(f, (Atom, NegAtom, Next)):
        return Next(f)
    if isinstance(f, And):
        return And(_push_next(f.left), _push_next(f.right))
    if isinstance(f, Or):
        return Or(_push_next(f.left), _push_next(f.right))
    if isinstance(f, Until):
        return Until(_push_next(f.left), _push_next(f.right))
    if isinstance(f, Always):
        return Always(_push_next(f.sub))
    raise TypeError(f)


def _normalize_next(f: Formula) -> Formula:
    if isinstance(f, Next):
        return _push_next(_normalize_next(f.sub))
    if isinstance(f, (And, Or, Until)):
        return type(f)(_normalize_next(f.left), _normalize_next(f.right))
    if isinstance(f, Always):
        return Always(_normalize_next(f.sub))
    return f


def _prune_chain(f: Formula, monoid: Monoid, seen: list) -> Optional[Formula]:
    # keeps the tree shape; dropped leaves collapse their parent node
    if isinstance(f, And):
        left = _prune_chain(f.left, monoid, seen)
        right = _prune_chain(f.right, monoid, seen)
        if left is None:
            return right
        if right is None:
            return left
        if left is f.left and right is f.right:
            return f
        return And(left, right)
    leaf = _reduce_chains(f, monoid)
    if is_true(leaf, monoid):
        return None
    if is_boolean(leaf, monoid):
        if leaf in seen:
            return None
        seen.append(leaf)
    return leaf


def _reduce_chains(f: Formula, monoid: Monoid) -> Formula:
    if isinstance(f, And):
        pruned = _prune_chain(f, monoid, [])
        return true(monoid) if pruned is None else pruned
    if isinstance(f, (Or, Until)):
        return type(f)(_reduce_chains(f.left, monoid), _reduce_chains(f.right, monoid))
    if isinstance(f, (Next, Always)):
        return type(f)(_reduce_chains(f.sub, monoid))
    return f


def reduce(f: Formula, monoid: Monoid) -> Formula:
    """Equivalent reduced formula.

    Next is pushed down to atoms (``X k`` becomes ``k``), ``true`` conjuncts
    are deleted, and a boolean conjunct equal to an earlier one in the same
    conjunction chain is deleted.  Remaining conjuncts keep their order.
    """
    while True:
        g = _reduce_chains(_normalize_next(f), monoid)
        if g == f:
            return g
        f = g


def form_a(f: Formula, monoid: Monoid) -> list:
    """The conjuncts of ``f``; at most one of them may be non-boolean."""
    parts = conjuncts(f)
    heavy = [p for p in parts if not is_boolean(p, monoid)]
    if len(heavy) > 1:
        raise FormViolation(
            f"{len(heavy)} non-boolean conjuncts in {to_text(f, monoid)}: "
            + ", ".join(to_text(h, monoid) for h in heavy)
        )
    return parts
