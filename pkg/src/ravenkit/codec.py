"""The ``gridatoms`` text format: problems as logic atoms, one per line.

Grammar (version 1; every fact one line, lowercase identifiers)::

    gridatoms 1
    trait <name> <label> <label> ...
    cell c1
    object c1:fg:0
    argument c1:fg:0 shape circle
    ...
    cell c8
    cell a0
    ...
    truth 3

Given cells are ``c1``..``c8`` in row-major order, candidates ``a0``
onward, each section introduced by a ``cell`` fact.  Object ids embed
their cell, layer tag and slot index.  ``belongs`` facts are accepted
and validated on input but never emitted: memberships are derivable
from the object states, and leaving them out keeps encodings canonical.
The optional ``truth`` fact must come last.

Encoding is canonical: fixed section order, objects sorted by identity,
arguments in vocabulary order, single spaces, trailing newline.  Decode
of an encode reproduces the Problem exactly, and encode of a decode of
canonical text is byte-identical.
"""

from __future__ import annotations

from .errors import AtomsParseError, ValidationError, VocabularyError
from .model import (
    MAX_OBJECTS_PER_CELL,
    Category,
    Cell,
    Grid,
    ObjectSpec,
    Problem,
    parse_category_id,
)
from .vocab import STANDARD_TRAITS, TraitDef, Vocabulary

MAGIC = "gridatoms"
FORMAT_VERSION = "1"


def given_cell_id(position: int) -> str:
    """Id of the given cell at 1-based position 1..8."""
    return f"c{position}"

def candidate_cell_id(index: int) -> str:
    """Id of the candidate cell at 0-based index."""
    return f"a{index}"

def object_id(cell_id: str, obj: ObjectSpec) -> str:
    return f"{cell_id}:{obj.layer}:{obj.slot}"


def _encode_cell(lines: list[str], cell_id: str, cell: Cell, vocab: Vocabulary) -> None:
    lines.append(f"cell {cell_id}")
    for obj in cell:
        oid = object_id(cell_id, obj)
        lines.append(f"object {oid}")
        for trait in vocab.names:
            label = vocab[trait].label(obj.value(trait))
            lines.append(f"argument {oid} {trait} {label}")


def encode_atoms(problem: Problem, include_truth: bool = True) -> str:
    """Canonical text for a problem.

    The truth fact is written only when requested and known; encoding a
    truth-free problem with ``include_truth=True`` simply omits it.
    """
    vocab = problem.vocabulary
    lines = [f"{MAGIC} {FORMAT_VERSION}"]
    for d in vocab:
        lines.append(f"trait {d.name} {' '.join(d.labels)}")
    for position in range(1, 9):
        _encode_cell(lines, given_cell_id(position), problem.grid.cell(position), vocab)
    for index, cand in enumerate(problem.candidates):
        _encode_cell(lines, candidate_cell_id(index), cand, vocab)
    if include_truth and problem.truth is not None:
        lines.append(f"truth {problem.truth}")
    return "\n".join(lines) + "\n"


class _Tok:
    __slots__ = ("text", "col")

    def __init__(self, text: str, col: int):
        self.text = text
        self.col = col


def _tokenize(line: str) -> list[_Tok]:
    out = []
    col = 0
    for raw in line.split(" "):
        if raw:
            out.append(_Tok(raw, col + 1))
        col += len(raw) + 1
    return out


class _Section:
    """One cell under construction during decoding."""

    def __init__(self, cell_id: str, line: int):
        self.cell_id = cell_id
        self.line = line
        self.objects: dict[str, tuple[str, int, dict[str, int], int]] = {}
        self.belongs: list[tuple[int, int, str, str]] = []


class _Decoder:
    def __init__(self, text: str):
        self.lines = text.split("\n")
        self.traits: list[TraitDef] = []
        self.vocab: Vocabulary | None = None
        self.given: list[Cell] = []
        self.candidates: list[Cell] = []
        self.section: _Section | None = None
        self.truth: tuple[int, int, int] | None = None  # (line, col, value)

    def fail(self, line: int, col: int, message: str) -> AtomsParseError:
        return AtomsParseError(line, col, message)

    def run(self) -> Problem:
        meaningful = []
        for n, raw in enumerate(self.lines, start=1):
            stripped = raw.strip()
            if not stripped or stripped.startswith("#"):
                continue
            meaningful.append((n, _tokenize(raw)))
        if not meaningful:
            raise self.fail(1, 1, "empty document")
        self._header(*meaningful[0])
        for n, toks in meaningful[1:]:
            self._fact(n, toks)
        self._close_section()
        return self._finish()

    def _header(self, n: int, toks: list[_Tok]) -> None:
        if len(toks) != 2 or toks[0].text != MAGIC:
            raise self.fail(n, toks[0].col if toks else 1, f"expected '{MAGIC} {FORMAT_VERSION}' header")
        if toks[1].text != FORMAT_VERSION:
            raise self.fail(n, toks[1].col, f"unsupported format version {toks[1].text!r}")

    def _fact(self, n: int, toks: list[_Tok]) -> None:
        kind = toks[0].text
        if self.truth is not None:
            raise self.fail(n, toks[0].col, "truth must be the last fact")
        if kind == "trait":
            self._trait(n, toks)
        elif kind == "cell":
            self._cell(n, toks)
        elif kind == "object":
            self._object(n, toks)
        elif kind == "argument":
            self._argument(n, toks)
        elif kind == "belongs":
            self._belongs(n, toks)
        elif kind == "truth":
            self._truth(n, toks)
        else:
            raise self.fail(n, toks[0].col, f"unknown fact kind {kind!r}")

    def _trait(self, n: int, toks: list[_Tok]) -> None:
        if self.section is not None:
            raise self.fail(n, toks[0].col, "trait declarations must precede all cells")
        if len(toks) < 3:
            raise self.fail(n, toks[0].col, "malformed trait fact: expected name and labels")
        name = toks[1].text
        registered = STANDARD_TRAITS.get(name)
        if registered is None:
            raise self.fail(n, toks[1].col, f"unknown trait {name!r}")
        if any(d.name == name for d in self.traits):
            raise self.fail(n, toks[1].col, f"trait {name!r} declared twice")
        labels = tuple(t.text for t in toks[2:])
        if labels != registered.labels:
            raise self.fail(
                n, toks[2].col, f"trait {name!r} domain differs from the registered domain"
            )
        self.traits.append(registered)

    def _expected_cell_id(self) -> str:
        if self.given_count() < 8:
            return given_cell_id(self.given_count() + 1)
        return candidate_cell_id(len(self.candidates))

    def given_count(self) -> int:
        return len(self.given)

    def _cell(self, n: int, toks: list[_Tok]) -> None:
        if len(toks) != 2:
            raise self.fail(n, toks[0].col, "malformed cell fact: expected one id")
        if self.vocab is None:
            self.vocab = Vocabulary(tuple(self.traits))
        self._close_section()
        want = self._expected_cell_id()
        if toks[1].text != want:
            raise self.fail(n, toks[1].col, f"expected cell {want}, found {toks[1].text!r}")
        self.section = _Section(toks[1].text, n)

    def _object(self, n: int, toks: list[_Tok]) -> None:
        if self.section is None:
            raise self.fail(n, toks[0].col, "object fact outside any cell")
        if len(toks) != 2:
            raise self.fail(n, toks[0].col, "malformed object fact: expected one id")
        oid = toks[1].text
        parts = oid.split(":")
        if len(parts) != 3:
            raise self.fail(n, toks[1].col, f"object id {oid!r} is not <cell>:<layer>:<slot>")
        cell_ref, layer, slot_text = parts
        if cell_ref != self.section.cell_id:
            raise self.fail(
                n, toks[1].col, f"object {oid!r} declared inside cell {self.section.cell_id}"
            )
        if not layer.isalnum():
            raise self.fail(n, toks[1].col, f"layer tag {layer!r} is not alphanumeric")
        if not slot_text.isdigit() or not 0 <= int(slot_text) < MAX_OBJECTS_PER_CELL:
            raise self.fail(
                n, toks[1].col, f"slot in {oid!r} must be in 0..{MAX_OBJECTS_PER_CELL - 1}"
            )
        if oid in self.section.objects:
            raise self.fail(n, toks[1].col, f"duplicate object id {oid!r}")
        if len(self.section.objects) >= MAX_OBJECTS_PER_CELL:
            raise self.fail(
                n,
                toks[1].col,
                f"cell {self.section.cell_id} holds more than {MAX_OBJECTS_PER_CELL} objects",
            )
        self.section.objects[oid] = (layer, int(slot_text), {}, n)

    def _argument(self, n: int, toks: list[_Tok]) -> None:
        if self.section is None:
            raise self.fail(n, toks[0].col, "argument fact outside any cell")
        if len(toks) != 4:
            raise self.fail(n, toks[0].col, "malformed argument fact: expected id, trait, value")
        oid, trait, label = toks[1].text, toks[2].text, toks[3].text
        entry = self.section.objects.get(oid)
        if entry is None:
            raise self.fail(n, toks[1].col, f"argument references undeclared object {oid!r}")
        d = next((t for t in self.traits if t.name == trait), None)
        if d is None:
            raise self.fail(n, toks[2].col, f"unknown trait {trait!r}")
        if label not in d.labels:
            raise self.fail(n, toks[3].col, f"trait {trait!r} has no value {label!r}")
        states = entry[2]
        if trait in states:
            raise self.fail(n, toks[2].col, f"object {oid!r} assigns {trait!r} twice")
        states[trait] = d.labels.index(label)

    def _belongs(self, n: int, toks: list[_Tok]) -> None:
        if self.section is None:
            raise self.fail(n, toks[0].col, "belongs fact outside any cell")
        if len(toks) != 3:
            raise self.fail(n, toks[0].col, "malformed belongs fact: expected id and category")
        oid, cat = toks[1].text, toks[2].text
        if oid not in self.section.objects:
            raise self.fail(n, toks[1].col, f"belongs references undeclared object {oid!r}")
        try:
            parse_category_id(cat)
        except ValidationError as exc:
            raise self.fail(n, toks[2].col, str(exc)) from None
        self.section.belongs.append((n, toks[2].col, oid, cat))

    def _truth(self, n: int, toks: list[_Tok]) -> None:
        if len(toks) != 2 or not toks[1].text.isdigit():
            raise self.fail(n, toks[0].col, "malformed truth fact: expected one index")
        self.truth = (n, toks[1].col, int(toks[1].text))

    def _close_section(self) -> None:
        sec = self.section
        if sec is None:
            return
        self.section = None
        assert self.vocab is not None
        objects = []
        by_id = {}
        for oid, (layer, slot, states, line) in sec.objects.items():
            for trait in self.vocab.names:
                if trait not in states:
                    raise self.fail(line, 1, f"object {oid!r} missing argument for trait {trait!r}")
            try:
                obj = ObjectSpec.make(layer, slot, states)
            except ValidationError as exc:
                raise self.fail(line, 1, str(exc)) from None
            objects.append(obj)
            by_id[oid] = obj
        try:
            cell = Cell(tuple(objects))
        except ValidationError as exc:
            raise self.fail(sec.line, 1, str(exc)) from None
        for line, col, oid, cat in sec.belongs:
            try:
                members = Category(cat).members(cell, self.vocab)
            except (ValidationError, VocabularyError) as exc:
                raise self.fail(line, col, str(exc)) from None
            if by_id[oid] not in members:
                raise self.fail(line, col, f"object {oid!r} does not belong to category {cat!r}")
        if sec.cell_id.startswith("c"):
            self.given.append(cell)
        else:
            self.candidates.append(cell)

    def _finish(self) -> Problem:
        eof = len(self.lines)
        if len(self.given) < 8:
            raise self.fail(eof, 1, f"incomplete document: found {len(self.given)} of 8 given cells")
        if not self.candidates:
            raise self.fail(eof, 1, "incomplete document: no candidate cells")
        truth_index = None
        if self.truth is not None:
            line, col, value = self.truth
            if value >= len(self.candidates):
                raise self.fail(
                    line, col, f"truth index {value} outside 0..{len(self.candidates) - 1}"
                )
            truth_index = value
        assert self.vocab is not None
        return Problem(
            vocabulary=self.vocab,
            grid=Grid(tuple(self.given)),
            candidates=tuple(self.candidates),
            truth=truth_index,
        )


def decode_atoms(text: str) -> Problem:
    """Parse a gridatoms document into a validated Problem.

    Every rejection raises :class:`AtomsParseError` carrying the line,
    column and a category-specific message; nothing malformed is
    silently accepted.
    """
    return _Decoder(text).run()
