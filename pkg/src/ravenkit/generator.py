"""Seeded construction of verified problems.

Each problem is built from a template that plants rules, then completed
with mutation-based distractors and verified end to end: the strict
solver must answer exactly the planted ground truth, otherwise the
sample is rejected and redrawn.  Verification runs against everything
the solver induces, not only the planted rules, so accidental surviving
operators can never leave a second fully-satisfying candidate.

Determinism: a problem is a pure function of (spec, index).  Every draw
comes from a stream seeded with (seed, index, attempt), so corpus
generation parallelizes across indices without coordination.

Templates
  latin        one object per cell; 1..3 traits arranged as Latin
               squares (complement-of-symmetric-difference rules)
  progression  one numeric trait follows y = a*x along rows or columns
  constant     all nine cells identical
  pixel        several per-key-constant objects whose presence follows
               one set operator along rows
  multi        a gray background object with constant color/fill and
               Latin shape/rotation, plus pixel-style foreground objects

The ``loose_trait_prob`` knob leaves a trait entirely unconstrained now
and then (random values, no surviving operator).  Validated corpora are
unaffected, but distractors drawn without validation can then land on
an unconstrained trait and slip through, which is what gives the
candidate-count scaling experiment a nonzero base error rate.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .algebra import OpKind, Operator, Rule, Scope
from .errors import GenerationError, ValidationError
from .model import Cell, Grid, ObjectSpec, Problem, Provenance
from .reasoner import (
    DEFAULT_CONFIG,
    RuleSet,
    SolveMode,
    VerdictKind,
    _check,
    _Context,
    solve,
)
from .vocab import PRESENCE, RENDER_TRAIT_NAMES, Vocabulary, standard_vocabulary

TEMPLATES = ("latin", "pixel", "progression", "constant", "multi")

_TEMPLATE_WEIGHTS = {
    "latin": 0.30,
    "pixel": 0.20,
    "progression": 0.15,
    "constant": 0.05,
    "multi": 0.30,
}

#: Third seed word for the unchecked-distractor stream; outside the
#: attempt range so it can never collide with sampling streams.
_UNCHECKED_STREAM = 1_000_003

_DISTRACTOR_TRIES = 400


@dataclass(frozen=True)
class GeneratorSpec:
    """Everything that determines a generated corpus, and nothing else."""

    seed: int = 0
    traits_in_play: tuple[str, ...] = RENDER_TRAIT_NAMES
    templates: tuple[str, ...] = TEMPLATES
    candidate_count: int = 8
    rules_min: int = 2
    rules_max: int = 4
    objects_min: int = 1
    objects_max: int = 6
    mutations_min: int = 1
    mutations_max: int = 3
    loose_trait_prob: float = 0.08
    max_attempts: int = 64

    def __post_init__(self):
        if self.seed < 0:
            raise ValidationError("seed must be non-negative")
        if self.candidate_count < 2:
            raise ValidationError("candidate_count must be at least 2")
        if not self.traits_in_play:
            raise ValidationError("traits_in_play is empty")
        for name in self.templates:
            if name not in TEMPLATES:
                raise ValidationError(f"unknown template {name!r}")
        for lo, hi, what in (
            (self.rules_min, self.rules_max, "rules"),
            (self.objects_min, self.objects_max, "objects"),
            (self.mutations_min, self.mutations_max, "mutations"),
        ):
            if not 1 <= lo <= hi:
                raise ValidationError(f"{what} range [{lo}, {hi}] is empty or invalid")
        if self.objects_max > 6:
            raise ValidationError("objects_max cannot exceed 6")
        if not 0.0 <= self.loose_trait_prob < 1.0:
            raise ValidationError("loose_trait_prob must be in [0, 1)")
        if self.max_attempts < 1:
            raise ValidationError("max_attempts must be positive")

    def vocabulary(self) -> Vocabulary:
        return standard_vocabulary(self.traits_in_play)


def spec_hash(spec: GeneratorSpec) -> str:
    """Short stable digest identifying a spec in provenance records."""
    return hashlib.sha256(repr(spec).encode()).hexdigest()[:12]


def _rng_for(spec: GeneratorSpec, index: int, stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([spec.seed, index, stream]))


def _latin_square(rng: np.random.Generator, values: list[int]) -> list[list[int]]:
    s = rng.permutation(3)
    p = rng.permutation(3)
    return [[values[(int(s[r]) + int(p[c])) % 3] for c in range(3)] for r in range(3)]


def _pick_distinct(rng: np.random.Generator, size: int, count: int) -> list[int]:
    return [int(v) for v in rng.choice(size, size=count, replace=False)]


def _mono_cells(vocab: Vocabulary, assign: dict[str, list[int]]) -> list[Cell]:
    cells = []
    for pos in range(9):
        states = {name: assign[name][pos] for name in vocab.names}
        cells.append(Cell((ObjectSpec.make("fg", 0, states),)))
    return cells


def _fill_background_traits(
    spec: GeneratorSpec,
    vocab: Vocabulary,
    rng: np.random.Generator,
    assign: dict[str, list[int]],
    planted: list[Rule],
) -> None:
    """Constant or (rarely) loose values for every unassigned trait.

    At most one trait per problem is left loose so that distractors
    which survive checking do so through a single degree of freedom.
    """
    loose_used = False
    for d in vocab:
        if d.name in assign:
            continue
        if not loose_used and rng.random() < spec.loose_trait_prob:
            loose_used = True
            assign[d.name] = [int(v) for v in rng.integers(0, d.size, size=9)]
        else:
            v = int(rng.integers(d.size))
            assign[d.name] = [v] * 9
            planted.append(Rule("all", d.name, Operator(OpKind.UNION), Scope.ROW))


def _template_latin(spec, vocab, rng):
    eligible = [d.name for d in vocab if d.size >= 3]
    want = int(rng.integers(spec.rules_min, spec.rules_max + 1))
    n = max(1, min(3, len(eligible), want))
    chosen = [eligible[i] for i in _pick_distinct(rng, len(eligible), n)]
    assign: dict[str, list[int]] = {}
    planted: list[Rule] = []
    for name in chosen:
        square = _latin_square(rng, _pick_distinct(rng, vocab[name].size, 3))
        assign[name] = [square[pos // 3][pos % 3] for pos in range(9)]
        planted.append(Rule("all", name, Operator(OpKind.NOT_SYMDIFF), Scope.ROW))
        planted.append(Rule("all", name, Operator(OpKind.NOT_SYMDIFF), Scope.COLUMN))
    _fill_background_traits(spec, vocab, rng, assign, planted)
    return _mono_cells(vocab, assign), planted


def _progression_traits(vocab: Vocabulary) -> list[str]:
    out = []
    for d in vocab:
        if not d.numeric:
            continue
        if d.cyclic and d.size >= 3:
            out.append(d.name)
        elif not d.cyclic and d.size > 3:  # needs some a with a*3 < size
            out.append(d.name)
    return out


def _template_progression(spec, vocab, rng):
    names = _progression_traits(vocab)
    name = names[int(rng.integers(len(names)))]
    d = vocab[name]
    if d.cyclic:
        a = int(rng.integers(1, d.size))
    else:
        a = int(rng.integers(1, (d.size - 1) // 3 + 1))
    scope = Scope.ROW if rng.random() < 0.5 else Scope.COLUMN
    assign: dict[str, list[int]] = {name: []}
    for pos in range(9):
        x = pos % 3 + 1 if scope is Scope.ROW else pos // 3 + 1
        y = a * x
        assign[name].append(y % d.size if d.cyclic else y)
    planted = [Rule("all", name, Operator(OpKind.PROGRESSION, a), scope)]
    _fill_background_traits(spec, vocab, rng, assign, planted)
    return _mono_cells(vocab, assign), planted


def _template_constant(spec, vocab, rng):
    assign = {d.name: [int(rng.integers(d.size))] * 9 for d in vocab}
    planted = [Rule("all", d.name, Operator(OpKind.UNION), Scope.ROW) for d in vocab]
    planted.append(Rule("all", PRESENCE, Operator(OpKind.UNION), Scope.ROW))
    return _mono_cells(vocab, assign), planted


def _presence_bit(kind: OpKind, b1: bool, b2: bool) -> bool:
    if kind is OpKind.UNION:
        return b1 or b2
    if kind is OpKind.INTERSECTION:
        return b1 and b2
    if kind is OpKind.SYMDIFF:
        return b1 != b2
    if kind is OpKind.NOT_UNION:
        return not (b1 or b2)
    if kind is OpKind.NOT_INTERSECTION:
        return not (b1 and b2)
    return b1 == b2  # NOT_SYMDIFF


_PIXEL_OPS = (
    OpKind.UNION,
    OpKind.INTERSECTION,
    OpKind.SYMDIFF,
    OpKind.NOT_UNION,
    OpKind.NOT_INTERSECTION,
    OpKind.NOT_SYMDIFF,
)


def _presence_pattern(rng: np.random.Generator, kind: OpKind) -> list[bool]:
    """Per-key presence over the nine positions, consistent with the
    operator on every row and visible in at least one given cell."""
    for _ in range(32):
        bits = [False] * 9
        for pos in (0, 1, 3, 4, 6, 7):
            bits[pos] = bool(rng.integers(2))
        for r in range(3):
            bits[3 * r + 2] = _presence_bit(kind, bits[3 * r], bits[3 * r + 1])
        if any(bits[:8]):
            return bits
    bits = [False] * 9
    bits[0] = bits[1] = True
    for r in range(3):
        bits[3 * r + 2] = _presence_bit(kind, bits[3 * r], bits[3 * r + 1])
    return bits


def _pixel_keys(
    vocab: Vocabulary,
    rng: np.random.Generator,
    count: int,
    shape_pool: list[int],
    color_pool: list[int] | None = None,
    rotation_pool: list[int] | None = None,
) -> list[ObjectSpec]:
    """Per-key-constant foreground objects with distinct shapes."""
    shapes = sorted(shape_pool[i] for i in _pick_distinct(rng, len(shape_pool), count))
    keys = []
    for slot, shape_code in enumerate(shapes):
        states = {}
        for d in vocab:
            if d.name == "shape":
                states[d.name] = shape_code
            elif d.name == "color" and color_pool is not None:
                states[d.name] = color_pool[int(rng.integers(len(color_pool)))]
            elif d.name == "rotation" and rotation_pool is not None:
                states[d.name] = rotation_pool[int(rng.integers(len(rotation_pool)))]
            else:
                states[d.name] = int(rng.integers(d.size))
        keys.append(ObjectSpec.make("fg", slot, states))
    return keys


def _template_pixel(spec, vocab, rng):
    shape_d = vocab["shape"]
    hi = min(5, spec.objects_max, shape_d.size)
    lo = min(max(2, spec.objects_min), hi)
    n_keys = int(rng.integers(lo, hi + 1))
    keys = _pixel_keys(vocab, rng, n_keys, list(range(shape_d.size)))
    kind = _PIXEL_OPS[int(rng.integers(len(_PIXEL_OPS)))]
    patterns = [_presence_pattern(rng, kind) for _ in keys]
    cells = [
        Cell(tuple(k for k, pat in zip(keys, patterns) if pat[pos])) for pos in range(9)
    ]
    planted = [Rule("all", PRESENCE, Operator(kind), Scope.ROW)]
    return cells, planted


def _template_multi(spec, vocab, rng):
    shape_d, color_d = vocab["shape"], vocab["color"]
    gray = color_d.code("gray")
    shapes3 = sorted(_pick_distinct(rng, shape_d.size, 3))
    shape_sq = _latin_square(rng, shapes3)
    planted = [
        Rule("color:gray", "color", Operator(OpKind.UNION), Scope.ROW),
        Rule("color:gray", "color", Operator(OpKind.INTERSECTION), Scope.ROW),
        Rule("color:gray", "shape", Operator(OpKind.NOT_SYMDIFF), Scope.ROW),
        Rule("color:gray", "shape", Operator(OpKind.NOT_SYMDIFF), Scope.COLUMN),
    ]
    rots3 = None
    rot_sq = None
    if "rotation" in vocab:
        rots3 = sorted(_pick_distinct(rng, vocab["rotation"].size, 3))
        rot_sq = _latin_square(rng, rots3)
        planted.append(Rule("color:gray", "rotation", Operator(OpKind.NOT_SYMDIFF), Scope.ROW))
        planted.append(Rule("color:gray", "rotation", Operator(OpKind.NOT_SYMDIFF), Scope.COLUMN))
    bg_extra = {}
    for d in vocab:
        if d.name in ("shape", "color", "rotation"):
            continue
        bg_extra[d.name] = int(rng.integers(d.size))
        planted.append(Rule("color:gray", d.name, Operator(OpKind.UNION), Scope.ROW))
        planted.append(Rule("color:gray", d.name, Operator(OpKind.INTERSECTION), Scope.ROW))

    non_gray = [c for c in range(color_d.size) if c != gray]
    n_keys = int(rng.integers(1, 4))
    # Foreground shapes/rotations reuse the background pools so the
    # active universes stay at three values and NotSymDiff survives.
    keys = _pixel_keys(vocab, rng, n_keys, shapes3, color_pool=non_gray, rotation_pool=rots3)
    kind = (OpKind.UNION, OpKind.INTERSECTION, OpKind.SYMDIFF)[int(rng.integers(3))]
    patterns = [_presence_pattern(rng, kind) for _ in keys]
    planted.append(Rule("layer:fg", PRESENCE, Operator(kind), Scope.ROW))

    cells = []
    for pos in range(9):
        r, c = pos // 3, pos % 3
        states = {"shape": shape_sq[r][c], "color": gray}
        if rot_sq is not None:
            states["rotation"] = rot_sq[r][c]
        states.update(bg_extra)
        objs = [ObjectSpec.make("bg", 0, states)]
        objs.extend(k for k, pat in zip(keys, patterns) if pat[pos])
        cells.append(Cell(tuple(objs)))
    return cells, planted


_TEMPLATE_FUNCS = {
    "latin": _template_latin,
    "pixel": _template_pixel,
    "progression": _template_progression,
    "constant": _template_constant,
    "multi": _template_multi,
}


def _applicable_templates(spec: GeneratorSpec, vocab: Vocabulary) -> list[str]:
    out = []
    for name in spec.templates:
        if name == "latin":
            ok = any(d.size >= 3 for d in vocab)
        elif name == "progression":
            ok = bool(_progression_traits(vocab))
        elif name == "constant":
            ok = True
        elif name == "pixel":
            ok = "shape" in vocab and vocab["shape"].size >= 2
        else:  # multi
            ok = (
                "shape" in vocab
                and vocab["shape"].size >= 3
                and "color" in vocab
                and "gray" in vocab["color"].labels
                and vocab["color"].size >= 2
            )
        if ok:
            out.append(name)
    if not out:
        raise GenerationError(
            f"no template applies to traits {spec.traits_in_play} (spec {spec_hash(spec)})"
        )
    return out


def _choose_template(spec: GeneratorSpec, vocab: Vocabulary, rng: np.random.Generator) -> str:
    names = _applicable_templates(spec, vocab)
    weights = np.array([_TEMPLATE_WEIGHTS[n] for n in names])
    return names[int(rng.choice(len(names), p=weights / weights.sum()))]


def _mutate(cell: Cell, vocab: Vocabulary, rng: np.random.Generator, mutations: int) -> Cell:
    """Apply flip/add/remove mutations; may land back on the input."""
    objs = list(cell)
    layers = sorted({o.layer for o in objs}) or ["fg"]
    for _ in range(mutations):
        moves = []
        if objs and vocab.names:
            moves.append("flip")
        if objs:
            moves.append("remove")
        taken = {o.identity for o in objs}
        free = [
            (layer, slot) for layer in layers for slot in range(6) if (layer, slot) not in taken
        ]
        if free and len(objs) < 6:
            moves.append("add")
        if not moves:
            break
        weights = {"flip": 0.6, "add": 0.2, "remove": 0.2}
        w = np.array([weights[m] for m in moves])
        move = moves[int(rng.choice(len(moves), p=w / w.sum()))]
        if move == "flip":
            i = int(rng.integers(len(objs)))
            d = vocab.traits[int(rng.integers(len(vocab.traits)))]
            old = objs[i].value(d.name)
            new = int(rng.integers(d.size - 1))
            if new >= old:
                new += 1
            objs[i] = objs[i].with_value(d.name, new)
        elif move == "remove":
            objs.pop(int(rng.integers(len(objs))))
        else:
            layer, slot = free[int(rng.integers(len(free)))]
            states = {d.name: int(rng.integers(d.size)) for d in vocab}
            objs.append(ObjectSpec.make(layer, slot, states))
    return Cell(tuple(objs))


def make_distractors(
    correct: Cell,
    grid: Grid,
    vocab: Vocabulary,
    planted: RuleSet,
    k: int,
    rng: np.random.Generator,
    mutations: tuple[int, int] = (1, 3),
    validated: bool = True,
) -> tuple[Cell, ...]:
    """k distinct mutated cells, none equal to the correct answer.

    With ``validated=True`` every distractor must violate at least one
    planted rule; without it mutations are taken as they come, which is
    the deliberately unscreened policy of the scaling experiment.
    """
    ctx = _Context(grid, vocab, DEFAULT_CONFIG)
    out: list[Cell] = []
    for _ in range(k):
        for _ in range(_DISTRACTOR_TRIES):
            m = int(rng.integers(mutations[0], mutations[1] + 1))
            cand = _mutate(correct, vocab, rng, m)
            if cand == correct or cand in out:
                continue
            if validated and _check(ctx, planted, cand, 0).violated == 0:
                continue
            out.append(cand)
            break
        else:
            raise GenerationError(
                f"could not find {k} distractors within {_DISTRACTOR_TRIES} tries each"
            )
    return tuple(out)


def sample_problem(spec: GeneratorSpec, index: int) -> Problem:
    """The problem at one corpus index: planted, completed and verified.

    Rejection sampling: if the strict solver's verdict on the assembled
    problem is anything but Unique(truth), the whole sample (grid and
    distractors) is redrawn from the next attempt stream.
    """
    vocab = spec.vocabulary()
    last_error: GenerationError | None = None
    for attempt in range(spec.max_attempts):
        rng = _rng_for(spec, index, attempt)
        template = _choose_template(spec, vocab, rng)
        cells, planted = _TEMPLATE_FUNCS[template](spec, vocab, rng)
        grid = Grid(tuple(cells[:8]))
        truth_cell = cells[8]
        try:
            distractors = make_distractors(
                truth_cell,
                grid,
                vocab,
                RuleSet(tuple(planted), ()),
                spec.candidate_count - 1,
                rng,
                (spec.mutations_min, spec.mutations_max),
            )
        except GenerationError as exc:
            last_error = exc
            continue
        truth = int(rng.integers(spec.candidate_count))
        candidates = distractors[:truth] + (truth_cell,) + distractors[truth:]
        problem = Problem(
            vocabulary=vocab,
            grid=grid,
            candidates=candidates,
            truth=truth,
            provenance=Provenance(
                seed=spec.seed,
                index=index,
                spec_hash=spec_hash(spec),
                planted=tuple(planted),
                rejections=attempt,
            ),
        )
        verdict = solve(problem, SolveMode.STRICT)
        if verdict.kind is VerdictKind.UNIQUE and verdict.chosen == truth:
            return problem
    detail = f"; last distractor failure: {last_error}" if last_error else ""
    raise GenerationError(
        f"index {index}: no verified sample within {spec.max_attempts} attempts "
        f"(spec {spec_hash(spec)}){detail}"
    )


def unchecked_distractors(
    spec: GeneratorSpec, index: int, truth_cell: Cell, count: int
) -> tuple[Cell, ...]:
    """Distinct mutated candidates with no rule screening, drawn from a
    stream independent of the one that sampled the problem."""
    vocab = spec.vocabulary()
    rng = _rng_for(spec, index, _UNCHECKED_STREAM)
    out: list[Cell] = []
    tries = 0
    while len(out) < count:
        if tries > _DISTRACTOR_TRIES * count:
            raise GenerationError(f"could not find {count} distinct mutations of the truth cell")
        tries += 1
        m = int(rng.integers(spec.mutations_min, spec.mutations_max + 1))
        cand = _mutate(truth_cell, vocab, rng, m)
        if cand != truth_cell and cand not in out:
            out.append(cand)
    return tuple(out)
