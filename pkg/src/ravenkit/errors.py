"""Exception hierarchy shared across the package."""


class RavenkitError(Exception):
    """Base class for all errors raised by ravenkit."""


class VocabularyError(RavenkitError):
    """A trait definition or vocabulary is malformed."""


class ValidationError(RavenkitError):
    """A cell, grid or problem violates a structural invariant."""


class TraitMismatchError(RavenkitError):
    """Set operands over different traits were combined."""


class OperatorKindError(RavenkitError):
    """An operator was used where its kind is not allowed."""


class AtomsParseError(RavenkitError):
    """An atoms document failed to parse or validate.

    Carries the 1-based line number and, where it points at a specific
    token, the 1-based column of that token.
    """

    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, col {column}: {message}")


class GenerationError(RavenkitError):
    """Problem generation exhausted its retry budget."""


class RenderError(RavenkitError):
    """A cell or corpus cannot be rendered under the given style."""
