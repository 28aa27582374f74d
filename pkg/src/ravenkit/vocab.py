"""Trait registry and per-problem vocabularies.

A trait is a categorical attribute with a finite, ordered value domain;
the position of a label in the domain is its integer code.  Traits with a
numeric interpretation additionally support the linear progression
operator; cyclic numeric traits (rotation) wrap around their domain.

``PRESENCE`` is a reserved pseudo-trait name: it is never part of a
vocabulary, but the reasoner projects object existence through it so that
set operators can express pixelwise rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import VocabularyError

PRESENCE = "presence"


@dataclass(frozen=True)
class TraitDef:
    """A registered trait; ``labels`` order defines codes 0..len-1."""

    name: str
    labels: tuple[str, ...]
    numeric: bool = False
    cyclic: bool = False

    def __post_init__(self):
        if self.name == PRESENCE:
            raise VocabularyError(f"{PRESENCE!r} is reserved and cannot be registered")
        if len(self.labels) < 2:
            raise VocabularyError(f"trait {self.name!r} needs a domain of size >= 2")
        if len(set(self.labels)) != len(self.labels):
            raise VocabularyError(f"trait {self.name!r} has duplicate value labels")
        if self.cyclic and not self.numeric:
            raise VocabularyError(f"trait {self.name!r} cannot be cyclic without being numeric")

    @property
    def size(self) -> int:
        return len(self.labels)

    def code(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise VocabularyError(f"trait {self.name!r} has no value {label!r}") from None

    def label(self, code: int) -> str:
        if not 0 <= code < len(self.labels):
            raise VocabularyError(f"trait {self.name!r} has no code {code}")
        return self.labels[code]


#: The standard trait definitions.  Shape/color/fill/rotation are the
#: renderable four; size and count exist for atoms-only corpora.
STANDARD_TRAITS: dict[str, TraitDef] = {
    t.name: t
    for t in (
        TraitDef("shape", ("circle", "square", "triangle", "diamond", "star", "cross")),
        TraitDef("color", ("black", "gray", "red", "green", "blue", "yellow")),
        TraitDef("fill", ("solid", "hollow", "hatched")),
        TraitDef(
            "rotation",
            ("deg0", "deg45", "deg90", "deg135", "deg180", "deg225", "deg270", "deg315"),
            numeric=True,
            cyclic=True,
        ),
        TraitDef("size", ("small", "medium", "large"), numeric=True),
        TraitDef("count", ("zero", "one", "two", "three", "four", "five", "six"), numeric=True),
    )
}

RENDER_TRAIT_NAMES = ("shape", "color", "fill", "rotation")
FULL_TRAIT_NAMES = ("shape", "color", "fill", "rotation", "size", "count")


@dataclass(frozen=True)
class Value:
    """One value of one trait, carrying its code and readable label."""

    trait: str
    code: int
    label: str


@dataclass(frozen=True)
class Vocabulary:
    """The ordered set of traits in play for a problem."""

    traits: tuple[TraitDef, ...]

    def __post_init__(self):
        names = [t.name for t in self.traits]
        if len(set(names)) != len(names):
            raise VocabularyError("vocabulary lists a trait twice")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.traits)

    def __contains__(self, name: str) -> bool:
        return any(t.name == name for t in self.traits)

    def __iter__(self) -> Iterator[TraitDef]:
        return iter(self.traits)

    def __getitem__(self, name: str) -> TraitDef:
        for t in self.traits:
            if t.name == name:
                return t
        raise VocabularyError(f"trait {name!r} is not in this vocabulary")

    def value(self, trait: str, code: int) -> Value:
        d = self[trait]
        return Value(trait, code, d.label(code))


def standard_vocabulary(names: Iterable[str] = RENDER_TRAIT_NAMES) -> Vocabulary:
    """Build a vocabulary from standard trait names, in the given order."""
    defs = []
    for name in names:
        if name not in STANDARD_TRAITS:
            raise VocabularyError(f"unknown trait {name!r}")
        defs.append(STANDARD_TRAITS[name])
    return Vocabulary(tuple(defs))
