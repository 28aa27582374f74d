"""Four frozen, hand-authored problems, one per classic rule family.

These are golden data: stable cells, stable candidate order, stable
truth index.  Tests snapshot their induced rule sets, so any change
here is a deliberate, visible event.

  latin_square  one object per cell; shape, rotation and color each a
                Latin square (third value = complement of symmetric
                difference), fill constant
  union         three per-key-constant objects; an object exists in the
                third cell of a row iff it exists in the first or second
  symdiff       same objects; exists in the third cell iff it exists in
                exactly one of the first two
  multi_rule    a gray background object with constant color/fill and
                Latin shape/rotation, plus two foreground objects under
                presence-union; the gray category stays the same while
                everything else varies
"""

from __future__ import annotations

from .model import Cell, Grid, ObjectSpec, Problem
from .vocab import standard_vocabulary

FIXTURE_NAMES = ("latin_square", "union", "symdiff", "multi_rule")

_VOCAB = standard_vocabulary()  # shape, color, fill, rotation

# Value codes used below, kept symbolic for readability.
_CIRCLE, _SQUARE, _TRIANGLE, _STAR, _CROSS = 0, 1, 2, 4, 5
_BLACK, _GRAY, _RED, _GREEN, _BLUE, _YELLOW = 0, 1, 2, 3, 4, 5
_SOLID, _HOLLOW, _HATCHED = 0, 1, 2
_DEG0, _DEG90, _DEG180 = 0, 2, 4


def _mono(shape: int, color: int, fill: int, rotation: int) -> Cell:
    return Cell(
        (
            ObjectSpec.make(
                "fg", 0, {"shape": shape, "color": color, "fill": fill, "rotation": rotation}
            ),
        )
    )


def _latin_square_problem() -> Problem:
    shapes = (_CIRCLE, _SQUARE, _TRIANGLE)
    rotations = (_DEG0, _DEG90, _DEG180)
    colors = (_BLACK, _RED, _BLUE)

    def cell(r: int, c: int) -> Cell:
        return _mono(
            shapes[(r + c) % 3],
            colors[(2 * r + c) % 3],
            _SOLID,
            rotations[(r + 2 * c) % 3],
        )

    given = tuple(cell(pos // 3, pos % 3) for pos in range(8))
    truth = cell(2, 2)  # square, black, solid, deg0
    distractors = (
        _mono(_TRIANGLE, _BLACK, _SOLID, _DEG0),  # duplicates a row shape
        _mono(_SQUARE, _RED, _SOLID, _DEG0),  # duplicates a row color
        _mono(_SQUARE, _BLACK, _SOLID, _DEG90),  # duplicates a row rotation
        _mono(_SQUARE, _BLACK, _HOLLOW, _DEG0),  # breaks the constant fill
        _mono(_CIRCLE, _BLUE, _SOLID, _DEG180),  # everything off by one
        Cell(()),  # empty hole
        Cell(
            truth.objects
            + (
                ObjectSpec.make(
                    "fg",
                    1,
                    {"shape": _STAR, "color": _YELLOW, "fill": _SOLID, "rotation": _DEG0},
                ),
            )
        ),  # extra object
    )
    candidates = distractors[:2] + (truth,) + distractors[2:]
    return Problem(_VOCAB, Grid(given), candidates, truth=2)


def _pixel_key(slot: int, shape: int, color: int) -> ObjectSpec:
    return ObjectSpec.make(
        "fg", slot, {"shape": shape, "color": color, "fill": _SOLID, "rotation": _DEG0}
    )


def _pixel_cells(keys: tuple[ObjectSpec, ...], patterns: tuple[tuple[int, ...], ...]) -> list[Cell]:
    return [
        Cell(tuple(k for k, pat in zip(keys, patterns) if pat[pos])) for pos in range(9)
    ]


_PIXEL_KEYS = (
    _pixel_key(0, _CIRCLE, _RED),
    _pixel_key(1, _SQUARE, _GREEN),
    _pixel_key(2, _TRIANGLE, _BLUE),
)


def _union_problem() -> Problem:
    patterns = (
        (1, 0, 1, 0, 1, 1, 1, 1, 1),
        (0, 1, 1, 1, 0, 1, 1, 0, 1),
        (1, 1, 1, 0, 0, 0, 0, 1, 1),
    )
    cells = _pixel_cells(_PIXEL_KEYS, patterns)
    truth = cells[8]  # all three keys present
    k0, k1, k2 = _PIXEL_KEYS
    distractors = (
        Cell((k0, k1)),  # third key missing
        Cell((k1, k2)),  # first key missing
        Cell((k0,)),  # only one key
        Cell(()),  # empty hole
        Cell((k0, k1, k2, _pixel_key(3, _CROSS, _YELLOW))),  # alien object
        Cell((k0, _pixel_key(1, _STAR, _GREEN), k2)),  # second key reshaped
        Cell((_pixel_key(0, _CIRCLE, _YELLOW), k1, k2)),  # first key recolored
    )
    candidates = distractors[:5] + (truth,) + distractors[5:]
    return Problem(_VOCAB, Grid(tuple(cells[:8])), candidates, truth=5)


def _symdiff_problem() -> Problem:
    patterns = (
        (1, 0, 1, 1, 1, 0, 0, 1, 1),
        (0, 1, 1, 1, 0, 1, 1, 1, 0),
        (1, 1, 0, 0, 1, 1, 1, 0, 1),
    )
    cells = _pixel_cells(_PIXEL_KEYS, patterns)
    truth = cells[8]  # first and third keys
    k0, k1, k2 = _PIXEL_KEYS
    distractors = (
        Cell((k0, k1, k2)),  # union instead of either-only
        Cell((k0,)),
        Cell((k2,)),
        Cell((k1, k2)),
        Cell(()),
        Cell((k0, k2, _pixel_key(3, _CROSS, _YELLOW))),
        Cell((k0, _pixel_key(2, _TRIANGLE, _YELLOW))),  # third key recolored
    )
    candidates = distractors[:1] + (truth,) + distractors[1:]
    return Problem(_VOCAB, Grid(tuple(cells[:8])), candidates, truth=1)


def _multi_rule_problem() -> Problem:
    shapes = (_CIRCLE, _SQUARE, _TRIANGLE)
    rotations = (_DEG0, _DEG90, _DEG180)

    def bg(r: int, c: int) -> ObjectSpec:
        return ObjectSpec.make(
            "bg",
            0,
            {
                "shape": shapes[(r + c) % 3],
                "color": _GRAY,
                "fill": _SOLID,
                "rotation": rotations[(r + 2 * c) % 3],
            },
        )

    # Foreground shapes and rotations reuse the background pools so the
    # active universes stay at three values each.
    fg_keys = (
        _pixel_key(0, _CIRCLE, _BLACK),
        _pixel_key(1, _SQUARE, _RED),
    )
    patterns = (
        (1, 0, 1, 0, 1, 1, 1, 0, 1),
        (0, 1, 1, 1, 1, 1, 0, 1, 1),
    )

    def cell(pos: int) -> Cell:
        r, c = pos // 3, pos % 3
        objs = [bg(r, c)]
        objs.extend(k for k, pat in zip(fg_keys, patterns) if pat[pos])
        return Cell(tuple(objs))

    cells = [cell(pos) for pos in range(9)]
    truth = cells[8]
    k0, k1 = fg_keys
    truth_bg = bg(2, 2)  # square, gray, solid, deg0
    distractors = (
        Cell((bg(2, 0), k0, k1)),  # background shape/rotation duplicated
        Cell((truth_bg.with_value("color", _BLACK), k0, k1)),  # gray vanishes
        Cell((truth_bg, k1)),  # first foreground key missing
        Cell((truth_bg, k0, _pixel_key(1, _TRIANGLE, _RED))),  # key reshaped
        Cell((truth_bg.with_value("rotation", _DEG90), k0, k1)),
        Cell((truth_bg.with_value("fill", _HATCHED), k0, k1)),
        Cell((truth_bg, k0, k1, _pixel_key(2, _CIRCLE, _YELLOW))),  # extra object
    )
    candidates = distractors[:4] + (truth,) + distractors[4:]
    return Problem(_VOCAB, Grid(tuple(cells[:8])), candidates, truth=4)


_BUILDERS = {
    "latin_square": _latin_square_problem,
    "union": _union_problem,
    "symdiff": _symdiff_problem,
    "multi_rule": _multi_rule_problem,
}


def fixture(name: str) -> Problem:
    """One of the four golden problems by name."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise ValueError(f"unknown fixture {name!r}; choose from {FIXTURE_NAMES}") from None
    return builder()
