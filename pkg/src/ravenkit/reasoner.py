"""Rule induction and candidate filtering for the 3x3 grid.

The solver assumes nothing about any particular puzzle: for every
(category, trait) pair it keeps exactly those operators whose constraint
holds on both complete rows, and separately on both complete columns.
A candidate answer is a solution when placing it in the hole violates
none of the surviving rules; unsatisfiable candidates are excluded.

Pairs where no operator survives carry no constraint.  They are recorded
as dropped rather than treated as errors so that noisy observed grids
still produce a verdict.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .algebra import (
    OpKind,
    Operator,
    Rule,
    SET_OP_KINDS,
    Scope,
    ValueSet,
    active_universe,
    apply_set_op,
    progression_value,
    project_argument,
)
from .errors import ValidationError
from .model import (
    ALL_CATEGORY,
    COLUMN_LINES,
    ROW_LINES,
    Category,
    Cell,
    Grid,
    Problem,
)
from .vocab import PRESENCE, Vocabulary


class SolveMode(enum.Enum):
    STRICT = "strict"
    RANKED = "ranked"


class VerdictKind(enum.Enum):
    UNIQUE = "unique"
    AMBIGUOUS = "ambiguous"
    UNSAT = "unsat"


class ErrorClass(enum.Enum):
    """Outcome of a verdict against the known answer.

    A wrong candidate accepted as satisfying is a false positive; the
    true candidate rejected is a false negative; both at once is BOTH.
    """

    ACCURATE = "accurate"
    FALSE_POSITIVE = "false_positive"
    FALSE_NEGATIVE = "false_negative"
    BOTH = "both"


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for induction: scopes, identity policy, category derivation.

    ``drop_traits`` suppresses every argument of the named traits, the
    knockout used by the ablation harness; objects themselves (and so the
    presence pseudo-trait) remain visible.
    """

    rows: bool = True
    columns: bool = True
    include_slot: bool = False
    value_category_traits: tuple[str, ...] = ("color",)
    drop_traits: tuple[str, ...] = ()

    def __post_init__(self):
        if not (self.rows or self.columns):
            raise ValidationError("at least one of row/column scope must be enabled")


DEFAULT_CONFIG = SolverConfig()


@dataclass(frozen=True)
class RuleSet:
    """Surviving rules plus the (category, trait) pairs with none."""

    rules: tuple[Rule, ...]
    dropped_pairs: tuple[tuple[str, str], ...]

    def __len__(self) -> int:
        return len(self.rules)

    def trace(self) -> tuple[str, ...]:
        return tuple(r.describe() for r in self.rules)


@dataclass(frozen=True)
class SatisfactionReport:
    candidate_index: int
    satisfied: int
    violated: int

    @property
    def fully_satisfying(self) -> bool:
        return self.violated == 0


@dataclass(frozen=True)
class Verdict:
    """Solver outcome over one problem's candidates.

    ``chosen`` is set only for UNIQUE.  ``ranking`` lists the
    fully-satisfying candidates (strict) or all candidates ordered by
    descending satisfied count (ranked ambiguity); equal counts keep
    index order and stay ambiguous rather than being tie-broken.
    """

    kind: VerdictKind
    chosen: int | None
    ranking: tuple[int, ...]
    reports: tuple[SatisfactionReport, ...]

    @property
    def fully_satisfying(self) -> tuple[int, ...]:
        return tuple(r.candidate_index for r in self.reports if r.fully_satisfying)


def _effective_vocab(vocab: Vocabulary, config: SolverConfig) -> Vocabulary:
    if not config.drop_traits:
        return vocab
    drop = set(config.drop_traits)
    return Vocabulary(tuple(t for t in vocab.traits if t.name not in drop))


def default_categories(
    grid: Grid, vocab: Vocabulary, config: SolverConfig = DEFAULT_CONFIG
) -> tuple[Category, ...]:
    """The universal category, one per layer present in the given cells,
    and one per value of each configured value-category trait.

    A value category is derived only when the value selects at least one
    object in every given cell.  Categories describe persistent object
    populations (the gray objects, say); a value that comes and goes
    would select nothing in some cells and then any operator producing a
    non-empty third set is spuriously violated wherever the value
    reappears in the hole.
    """
    eff = _effective_vocab(vocab, config)
    cats = [ALL_CATEGORY]
    layers = sorted({o.layer for cell in grid.cells for o in cell})
    cats.extend(Category(f"layer:{tag}") for tag in layers)
    for trait in config.value_category_traits:
        if trait not in eff:
            continue
        d = eff[trait]
        per_cell = [{o.value(trait) for o in cell} for cell in grid.cells]
        everywhere = set.intersection(*per_cell)
        cats.extend(Category(f"{trait}:{d.label(c)}") for c in sorted(everywhere))
    return tuple(cats)


class _Context:
    """Per-grid working state: effective vocabulary, universes and a
    projection memo shared between induction and candidate checks."""

    def __init__(self, grid: Grid, vocab: Vocabulary, config: SolverConfig):
        self.grid = grid
        self.config = config
        self.vocab = _effective_vocab(vocab, config)
        self.traits = (*self.vocab.names, PRESENCE)
        self.universes = {
            t: active_universe(grid, t, self.vocab, config.include_slot) for t in self.traits
        }
        self._memo: dict[tuple[Cell, str, str], ValueSet] = {}

    def project(self, cell: Cell, category: Category, trait: str) -> ValueSet:
        key = (cell, category.id, trait)
        got = self._memo.get(key)
        if got is None:
            got = project_argument(cell, category, trait, self.vocab, self.config.include_slot)
            self._memo[key] = got
        return got

    def holds(self, op: Operator, category: Category, trait: str, cells: tuple[Cell, ...]) -> bool:
        """Whether the operator's constraint holds on one full line."""
        if op.kind is OpKind.PROGRESSION:
            d = self.vocab[trait]
            for x, cell in enumerate(cells, start=1):
                vs = self.project(cell, category, trait)
                if len(vs.members) != 1:
                    return False
                want = progression_value(op.param, x, d.size, d.cyclic)
                if want is None or next(iter(vs.members)) != want:
                    return False
            return True
        s1, s2, s3 = (self.project(c, category, trait) for c in cells)
        return (
            apply_set_op(op.kind, s1.members, s2.members, self.universes[trait].members)
            == s3.members
        )

    def operators_for(self, trait: str) -> tuple[Operator, ...]:
        ops = [Operator(k) for k in SET_OP_KINDS]
        if trait != PRESENCE and self.vocab[trait].numeric:
            ops.extend(Operator(OpKind.PROGRESSION, a) for a in range(1, self.vocab[trait].size + 1))
        return tuple(ops)

    def scopes(self) -> tuple[Scope, ...]:
        out = []
        if self.config.rows:
            out.append(Scope.ROW)
        if self.config.columns:
            out.append(Scope.COLUMN)
        return tuple(out)


_COMPLETE_LINES = {
    Scope.ROW: ROW_LINES[:2],
    Scope.COLUMN: COLUMN_LINES[:2],
}
_THIRD_LINE = {
    Scope.ROW: ROW_LINES[2],
    Scope.COLUMN: COLUMN_LINES[2],
}


def _induce(ctx: _Context, categories: tuple[Category, ...]) -> RuleSet:
    rules: list[Rule] = []
    dropped: list[tuple[str, str]] = []
    for cat in categories:
        for trait in ctx.traits:
            found = False
            for scope in ctx.scopes():
                lines = _COMPLETE_LINES[scope]
                for op in ctx.operators_for(trait):
                    if all(
                        ctx.holds(op, cat, trait, tuple(ctx.grid.cell(p) for p in line))
                        for line in lines
                    ):
                        rules.append(Rule(cat.id, trait, op, scope))
                        found = True
            if not found:
                dropped.append((cat.id, trait))
    return RuleSet(tuple(rules), tuple(dropped))


def _check(ctx: _Context, rules: RuleSet, candidate: Cell, index: int) -> SatisfactionReport:
    satisfied = violated = 0
    for rule in rules.rules:
        positions = _THIRD_LINE[rule.scope]
        cells = (ctx.grid.cell(positions[0]), ctx.grid.cell(positions[1]), candidate)
        if ctx.holds(rule.operator, Category(rule.category), rule.trait, cells):
            satisfied += 1
        else:
            violated += 1
    return SatisfactionReport(index, satisfied, violated)


def induce_rules(
    grid: Grid,
    vocab: Vocabulary,
    categories: tuple[Category, ...] | None = None,
    config: SolverConfig = DEFAULT_CONFIG,
) -> RuleSet:
    """Every operator that holds on all complete lines of its scope, for
    every (category, trait) pair."""
    ctx = _Context(grid, vocab, config)
    if categories is None:
        categories = default_categories(grid, vocab, config)
    return _induce(ctx, categories)


def check_answer(
    grid: Grid,
    vocab: Vocabulary,
    rules: RuleSet,
    candidate: Cell,
    index: int,
    config: SolverConfig = DEFAULT_CONFIG,
) -> SatisfactionReport:
    """Place the candidate in the hole and evaluate each rule on the
    third line of its scope."""
    ctx = _Context(grid, vocab, config)
    return _check(ctx, rules, candidate, index)


def _verdict(reports: tuple[SatisfactionReport, ...], mode: SolveMode) -> Verdict:
    full = tuple(r.candidate_index for r in reports if r.fully_satisfying)
    if len(full) == 1:
        return Verdict(VerdictKind.UNIQUE, full[0], full, reports)
    if mode is SolveMode.RANKED:
        order = tuple(sorted(range(len(reports)), key=lambda i: (-reports[i].satisfied, i)))
        return Verdict(VerdictKind.AMBIGUOUS, None, order, reports)
    if not full:
        return Verdict(VerdictKind.UNSAT, None, (), reports)
    return Verdict(VerdictKind.AMBIGUOUS, None, full, reports)


def solve(
    problem: Problem,
    mode: SolveMode = SolveMode.STRICT,
    config: SolverConfig = DEFAULT_CONFIG,
    categories: tuple[Category, ...] | None = None,
) -> Verdict:
    """Induce rules from the given grid, then filter every candidate."""
    ctx = _Context(problem.grid, problem.vocabulary, config)
    if categories is None:
        categories = default_categories(problem.grid, problem.vocabulary, config)
    rules = _induce(ctx, categories)
    reports = tuple(_check(ctx, rules, c, i) for i, c in enumerate(problem.candidates))
    return _verdict(reports, mode)


def classify(verdict: Verdict, ground_truth: int) -> ErrorClass:
    """Error taxonomy of a verdict given the known answer.

    Any multi-answer outcome is inaccurate; which error it carries
    depends on whether the truth and/or some wrong candidate satisfied.
    """
    if not 0 <= ground_truth < len(verdict.reports):
        raise ValidationError(
            f"ground truth {ground_truth} outside 0..{len(verdict.reports) - 1}"
        )
    truth_ok = verdict.reports[ground_truth].fully_satisfying
    wrong_ok = any(
        r.fully_satisfying for r in verdict.reports if r.candidate_index != ground_truth
    )
    if truth_ok and not wrong_ok:
        return ErrorClass.ACCURATE
    if truth_ok:
        return ErrorClass.FALSE_POSITIVE
    if wrong_ok:
        return ErrorClass.BOTH
    return ErrorClass.FALSE_NEGATIVE


class MatrixSolver:
    """Estimator-flavored wrapper: fit on a problem's grid, predict its
    candidates, inspect the induced rules.

    Parameters are plain values so ``get_params``/``set_params`` support
    grid-search-style sweeps; nothing here depends on scikit-learn.
    """

    _PARAM_NAMES = (
        "mode",
        "rows",
        "columns",
        "include_slot",
        "value_category_traits",
        "drop_traits",
    )

    def __init__(
        self,
        mode: str = "strict",
        rows: bool = True,
        columns: bool = True,
        include_slot: bool = False,
        value_category_traits: tuple[str, ...] = ("color",),
        drop_traits: tuple[str, ...] = (),
    ):
        self.mode = mode
        self.rows = rows
        self.columns = columns
        self.include_slot = include_slot
        self.value_category_traits = value_category_traits
        self.drop_traits = drop_traits

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._PARAM_NAMES}

    def set_params(self, **params) -> "MatrixSolver":
        for name, value in params.items():
            if name not in self._PARAM_NAMES:
                raise ValidationError(f"unknown parameter {name!r}")
            setattr(self, name, value)
        return self

    def _config(self) -> SolverConfig:
        return SolverConfig(
            rows=self.rows,
            columns=self.columns,
            include_slot=self.include_slot,
            value_category_traits=tuple(self.value_category_traits),
            drop_traits=tuple(self.drop_traits),
        )

    def fit(self, problem: Problem, categories: tuple[Category, ...] | None = None) -> "MatrixSolver":
        config = self._config()
        mode = SolveMode(self.mode)  # validate eagerly, before any work
        ctx = _Context(problem.grid, problem.vocabulary, config)
        if categories is None:
            categories = default_categories(problem.grid, problem.vocabulary, config)
        self.categories_ = categories
        self.rules_ = _induce(ctx, categories)
        self._ctx = ctx
        self._mode = mode
        self._problem = problem
        return self

    def predict(self, problem: Problem | None = None) -> Verdict:
        if not hasattr(self, "rules_"):
            raise ValidationError("solver is not fitted; call fit() first")
        if problem is None:
            problem = self._problem
        elif problem.grid != self._problem.grid:
            raise ValidationError("problem has a different grid; refit the solver")
        reports = tuple(
            _check(self._ctx, self.rules_, c, i) for i, c in enumerate(problem.candidates)
        )
        return _verdict(reports, self._mode)

    def rule_trace(self) -> tuple[str, ...]:
        if not hasattr(self, "rules_"):
            raise ValidationError("solver is not fitted; call fit() first")
        return self.rules_.trace()
