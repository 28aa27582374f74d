"""Immutable domain objects: objects, cells, grids, problems, categories.

All types freeze at construction; every downstream operation is a pure
function over them, so problems can be solved from any number of workers
without shared state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .errors import ValidationError, VocabularyError
from .vocab import Vocabulary

MAX_OBJECTS_PER_CELL = 6

#: 1-based cell positions of the three rows and three columns; position 9
#: is the hole.
ROW_LINES = ((1, 2, 3), (4, 5, 6), (7, 8, 9))
COLUMN_LINES = ((1, 4, 7), (2, 5, 8), (3, 6, 9))
HOLE_POSITION = 9


@dataclass(frozen=True)
class ObjectSpec:
    """One object: an identity plus a total trait assignment.

    ``states`` maps trait name to value code and is stored as a sorted
    tuple of pairs so instances hash and compare deterministically.
    """

    layer: str
    slot: int
    states: tuple[tuple[str, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(sorted(self.states)))
        if not self.layer or not self.layer.isalnum():
            raise ValidationError(f"layer tag must be alphanumeric, got {self.layer!r}")
        if not 0 <= self.slot < MAX_OBJECTS_PER_CELL:
            raise ValidationError(f"slot must be in 0..{MAX_OBJECTS_PER_CELL - 1}, got {self.slot}")
        seen = [t for t, _ in self.states]
        if len(set(seen)) != len(seen):
            raise ValidationError(f"object {self.identity} assigns a trait twice")

    @classmethod
    def make(cls, layer: str, slot: int, states: Mapping[str, int]) -> "ObjectSpec":
        return cls(layer, slot, tuple(states.items()))

    @property
    def identity(self) -> tuple[str, int]:
        return (self.layer, self.slot)

    def value(self, trait: str) -> int:
        for t, c in self.states:
            if t == trait:
                return c
        raise KeyError(trait)

    def with_value(self, trait: str, code: int) -> "ObjectSpec":
        return ObjectSpec(
            self.layer, self.slot, tuple((t, code if t == trait else c) for t, c in self.states)
        )


@dataclass(frozen=True)
class Cell:
    """A set of at most six objects; objects are kept in identity order."""

    objects: tuple[ObjectSpec, ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "objects", tuple(sorted(self.objects, key=lambda o: o.identity))
        )
        if len(self.objects) > MAX_OBJECTS_PER_CELL:
            raise ValidationError(
                f"cell holds {len(self.objects)} objects; at most {MAX_OBJECTS_PER_CELL} allowed"
            )
        ids = [o.identity for o in self.objects]
        if len(set(ids)) != len(ids):
            raise ValidationError("cell holds two objects with the same identity")

    def __len__(self) -> int:
        return len(self.objects)

    def __iter__(self) -> Iterator[ObjectSpec]:
        return iter(self.objects)


EMPTY_CELL = Cell(())


@dataclass(frozen=True)
class Grid:
    """The eight given cells, row-major positions 1..8; 9 is the hole."""

    cells: tuple[Cell, ...]

    def __post_init__(self):
        if len(self.cells) != 8:
            raise ValidationError(f"grid needs exactly 8 given cells, got {len(self.cells)}")

    def cell(self, position: int) -> Cell:
        """Cell at 1-based position 1..8."""
        if not 1 <= position <= 8:
            raise ValidationError(f"no given cell at position {position}")
        return self.cells[position - 1]


@dataclass(frozen=True)
class Provenance:
    """How a generated problem came to be; replaying (seed, spec) at the
    same index reproduces the problem bit for bit."""

    seed: int
    index: int
    spec_hash: str
    planted: tuple = ()
    rejections: int = 0


@dataclass(frozen=True)
class Problem:
    """A grid, its candidate answers and (when known) the true index.

    Provenance is descriptive metadata and takes no part in equality;
    problems decoded from atoms compare equal to their source.
    """

    vocabulary: Vocabulary
    grid: Grid
    candidates: tuple[Cell, ...]
    truth: int | None = None
    provenance: Provenance | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.candidates:
            raise ValidationError("problem needs at least one candidate")
        if self.truth is not None and not 0 <= self.truth < len(self.candidates):
            raise ValidationError(
                f"truth index {self.truth} outside 0..{len(self.candidates) - 1}"
            )

    @property
    def truth_cell(self) -> Cell:
        if self.truth is None:
            raise ValidationError("problem carries no ground-truth index")
        return self.candidates[self.truth]

    def all_cells(self) -> tuple[Cell, ...]:
        return self.grid.cells + self.candidates


@dataclass(frozen=True)
class Category:
    """A declarative subset of a cell's objects, named by a stable id.

    Supported ids:
      ``all``                every object
      ``layer:<tag>``        objects on one layer
      ``<trait>:<label>``    objects whose trait takes the given value
      ``slot:<k>``           objects at one slot position
    """

    id: str

    def __post_init__(self):
        parse_category_id(self.id)  # reject malformed ids early

    def members(self, cell: Cell, vocab: Vocabulary) -> tuple[ObjectSpec, ...]:
        kind, arg = parse_category_id(self.id)
        if kind == "all":
            return cell.objects
        if kind == "layer":
            return tuple(o for o in cell if o.layer == arg)
        if kind == "slot":
            return tuple(o for o in cell if o.slot == int(arg))
        # trait-valued category
        code = vocab[kind].code(arg)
        return tuple(o for o in cell if o.value(kind) == code)


def parse_category_id(cat_id: str) -> tuple[str, str | None]:
    """Split a category id into (kind, argument); raises on bad syntax."""
    if cat_id == "all":
        return ("all", None)
    if ":" not in cat_id:
        raise ValidationError(f"malformed category id {cat_id!r}")
    kind, arg = cat_id.split(":", 1)
    if not arg:
        raise ValidationError(f"malformed category id {cat_id!r}")
    if kind == "layer":
        return (kind, arg)
    if kind == "slot":
        if not arg.isdigit() or not 0 <= int(arg) < MAX_OBJECTS_PER_CELL:
            raise ValidationError(f"category {cat_id!r} names an invalid slot")
        return (kind, arg)
    # anything else must be a trait name; the label is checked lazily
    # against the vocabulary in members()
    return (kind, arg)


ALL_CATEGORY = Category("all")


def validate_cell(cell: Cell, vocab: Vocabulary) -> None:
    """Check every object carries exactly one state per vocabulary trait."""
    want = set(vocab.names)
    for obj in cell:
        have = {t for t, _ in obj.states}
        if have != want:
            missing = sorted(want - have)
            extra = sorted(have - want)
            parts = []
            if missing:
                parts.append(f"missing traits {missing}")
            if extra:
                parts.append(f"unregistered traits {extra}")
            raise ValidationError(f"object {obj.identity}: " + ", ".join(parts))
        for trait, code in obj.states:
            d = vocab[trait]
            if not 0 <= code < d.size:
                raise ValidationError(
                    f"object {obj.identity}: code {code} outside {trait} domain"
                )


def validate_problem(problem: Problem) -> None:
    """Full structural validation of a problem against its vocabulary."""
    try:
        for cell in problem.all_cells():
            validate_cell(cell, problem.vocabulary)
    except VocabularyError as exc:
        raise ValidationError(str(exc)) from exc
