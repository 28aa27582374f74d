"""The operator algebra: seven total operators over value sets.

Six set operators (union, intersection, symmetric difference and their
complements) plus a linear progression ``y = a * x`` over 1-based line
position.  Complements are taken relative to the *active universe*: the
values of a trait observed anywhere in the eight given cells, not the
full registered domain.

Object existence is projected through the reserved ``presence`` trait,
whose "values" are cross-cell identity keys, so the same set operators
express pixelwise rules unchanged.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import FrozenSet, Hashable

from .errors import OperatorKindError, TraitMismatchError, ValidationError
from .model import Category, Cell, Grid, ObjectSpec
from .vocab import PRESENCE, Vocabulary


class OpKind(enum.Enum):
    UNION = "union"
    INTERSECTION = "intersection"
    SYMDIFF = "symdiff"
    NOT_UNION = "not_union"
    NOT_INTERSECTION = "not_intersection"
    NOT_SYMDIFF = "not_symdiff"
    PROGRESSION = "progression"


SET_OP_KINDS = (
    OpKind.UNION,
    OpKind.INTERSECTION,
    OpKind.SYMDIFF,
    OpKind.NOT_UNION,
    OpKind.NOT_INTERSECTION,
    OpKind.NOT_SYMDIFF,
)


class Scope(enum.Enum):
    ROW = "row"
    COLUMN = "column"


@dataclass(frozen=True)
class Operator:
    """One of the seven operator kinds; progression carries its factor."""

    kind: OpKind
    param: int | None = None

    def __post_init__(self):
        if self.kind is OpKind.PROGRESSION:
            if self.param is None or self.param < 1:
                raise ValidationError("progression needs an integer factor >= 1")
        elif self.param is not None:
            raise ValidationError(f"{self.kind.value} takes no parameter")

    def describe(self) -> str:
        if self.kind is OpKind.PROGRESSION:
            return f"progression(a={self.param})"
        return self.kind.value


@dataclass(frozen=True)
class ValueSet:
    """A set of value codes (or identity keys) of one trait."""

    trait: str
    members: FrozenSet[Hashable]


@dataclass(frozen=True)
class Rule:
    """A (category, trait) pair bound to one operator along one scope."""

    category: str
    trait: str
    operator: Operator
    scope: Scope

    def describe(self) -> str:
        return f"{self.category} / {self.trait} : {self.operator.describe()} over {self.scope.value}s"


def apply_set_op(kind: OpKind, s1: frozenset, s2: frozenset, universe: frozenset) -> frozenset:
    """Raw frozenset form of the six set operators."""
    if kind is OpKind.UNION:
        return s1 | s2
    if kind is OpKind.INTERSECTION:
        return s1 & s2
    if kind is OpKind.SYMDIFF:
        return s1 ^ s2
    if kind is OpKind.NOT_UNION:
        return universe - (s1 | s2)
    if kind is OpKind.NOT_INTERSECTION:
        return universe - (s1 & s2)
    if kind is OpKind.NOT_SYMDIFF:
        return universe - (s1 ^ s2)
    raise OperatorKindError(f"{kind.value} is not a set operator")


def apply_operator(m: Operator, s1: ValueSet, s2: ValueSet, universe: ValueSet) -> ValueSet:
    """Apply a set operator; a total, deterministic function of its inputs."""
    if m.kind is OpKind.PROGRESSION:
        raise OperatorKindError("progression is positional; use progression_value")
    if not (s1.trait == s2.trait == universe.trait):
        raise TraitMismatchError(
            f"operands mix traits: {s1.trait!r}, {s2.trait!r}, {universe.trait!r}"
        )
    return ValueSet(s1.trait, apply_set_op(m.kind, s1.members, s2.members, universe.members))


def progression_value(a: int, position: int, size: int, cyclic: bool) -> int | None:
    """Code demanded by ``y = a * x`` at 1-based line position ``position``.

    Cyclic traits wrap modulo their domain size; for non-cyclic traits a
    product outside the code space makes the rule inapplicable, signalled
    by ``None`` rather than an exception.
    """
    if a < 1:
        raise ValidationError(f"progression factor must be >= 1, got {a}")
    if position < 1:
        raise ValidationError(f"line position is 1-based, got {position}")
    y = a * position
    if cyclic:
        return y % size
    return y if y < size else None


def identity_key(obj: ObjectSpec, vocab: Vocabulary, include_slot: bool = False) -> tuple:
    """Cross-cell identity of an object for the presence pseudo-trait.

    Defaults to (layer, shape); the shape component drops out when the
    vocabulary in effect does not carry a shape trait.
    """
    key: tuple = (obj.layer,)
    if "shape" in vocab:
        key += (obj.value("shape"),)
    if include_slot:
        key += (obj.slot,)
    return key


def category_members(c: Category, cell: Cell, vocab: Vocabulary) -> tuple[ObjectSpec, ...]:
    """The objects of ``cell`` selected by the category's predicate."""
    return c.members(cell, vocab)


def project_argument(
    cell: Cell,
    c: Category,
    trait: str,
    vocab: Vocabulary,
    include_slot: bool = False,
) -> ValueSet:
    """Value set of ``trait`` over the category's members of ``cell``.

    For the presence pseudo-trait the members are identity keys of the
    objects present rather than value codes.
    """
    members = c.members(cell, vocab)
    if trait == PRESENCE:
        keys = frozenset(identity_key(o, vocab, include_slot) for o in members)
        return ValueSet(PRESENCE, keys)
    return ValueSet(trait, frozenset(o.value(trait) for o in members))


def active_universe(
    grid: Grid,
    trait: str,
    vocab: Vocabulary,
    include_slot: bool = False,
) -> ValueSet:
    """All values of ``trait`` (or identity keys) in the eight given cells."""
    members: set = set()
    for cell in grid.cells:
        if trait == PRESENCE:
            members.update(identity_key(o, vocab, include_slot) for o in cell)
        else:
            members.update(o.value(trait) for o in cell)
    return ValueSet(trait, frozenset(members))
