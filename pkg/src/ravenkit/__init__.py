"""ravenkit: generate, encode, solve and score matrix-completion puzzles.

The package is organized around pure functions over frozen data:

- :mod:`ravenkit.vocab` / :mod:`ravenkit.model` — traits, objects, cells,
  grids, problems, categories
- :mod:`ravenkit.algebra` — the seven-operator value-set algebra
- :mod:`ravenkit.reasoner` — rule induction, candidate filtering,
  verdicts and the error taxonomy
- :mod:`ravenkit.generator` / :mod:`ravenkit.corpus` — seeded, verified
  problem construction and the on-disk corpus layout
- :mod:`ravenkit.codec` / :mod:`ravenkit.asp` — the gridatoms text
  format and one-way ASP fact export
- :mod:`ravenkit.fixtures` — four frozen golden problems
- :mod:`ravenkit.render` — deterministic rasterization and training data
- :mod:`ravenkit.harness` — accuracy, scaling and ablation measurements
"""

from .algebra import (
    OpKind,
    Operator,
    Rule,
    SET_OP_KINDS,
    Scope,
    ValueSet,
    active_universe,
    apply_operator,
    category_members,
    identity_key,
    progression_value,
    project_argument,
)
from .asp import export_asp
from .codec import decode_atoms, encode_atoms
from .corpus import (
    iter_corpus,
    load_problem,
    read_corpus,
    read_manifest,
    read_spec,
    write_corpus,
)
from .errors import (
    AtomsParseError,
    GenerationError,
    OperatorKindError,
    RavenkitError,
    RenderError,
    TraitMismatchError,
    ValidationError,
    VocabularyError,
)
from .fixtures import FIXTURE_NAMES, fixture
from .generator import (
    GeneratorSpec,
    TEMPLATES,
    make_distractors,
    sample_problem,
    spec_hash,
    unchecked_distractors,
)
from .model import (
    ALL_CATEGORY,
    COLUMN_LINES,
    EMPTY_CELL,
    MAX_OBJECTS_PER_CELL,
    ROW_LINES,
    Category,
    Cell,
    Grid,
    ObjectSpec,
    Problem,
    Provenance,
    validate_cell,
    validate_problem,
)
from .reasoner import (
    DEFAULT_CONFIG,
    ErrorClass,
    MatrixSolver,
    RuleSet,
    SatisfactionReport,
    SolveMode,
    SolverConfig,
    Verdict,
    VerdictKind,
    check_answer,
    classify,
    default_categories,
    induce_rules,
    solve,
)
from .vocab import (
    FULL_TRAIT_NAMES,
    PRESENCE,
    RENDER_TRAIT_NAMES,
    STANDARD_TRAITS,
    TraitDef,
    Value,
    Vocabulary,
    standard_vocabulary,
)

__version__ = "0.1.0"
