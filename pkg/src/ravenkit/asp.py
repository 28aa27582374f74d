"""One-way export of a problem as answer-set-programming facts.

This is the dynamic half of an ASP program: the problem instance as
ground facts, ready to be paired with a user-supplied static program
that encodes the operator rules.  It is never parsed back; the
``gridatoms`` format in :mod:`ravenkit.codec` is the round-trip format.

Identifiers are lowercased and colon-free (``c1_fg_0``) so every
constant is a plain ASP symbol.  Output is deterministic: same problem,
same text.
"""

from __future__ import annotations

from .codec import candidate_cell_id, given_cell_id
from .model import Cell, Problem
from .vocab import Vocabulary


def _asp_object_id(cell_id: str, layer: str, slot: int) -> str:
    return f"{cell_id}_{layer}_{slot}"


def _cell_facts(lines: list[str], cell_id: str, cell: Cell, vocab: Vocabulary) -> None:
    for obj in cell:
        oid = _asp_object_id(cell_id, obj.layer, obj.slot)
        lines.append(f"object({oid},{cell_id}).")
        lines.append(f"belongs({oid},all).")
        lines.append(f"belongs({oid},layer_{obj.layer}).")
        for trait in vocab.names:
            label = vocab[trait].label(obj.value(trait))
            lines.append(f"argument({oid},{trait},{label}).")


def export_asp(problem: Problem, include_truth: bool = False) -> str:
    """ASP facts for one problem, one fact per line.

    Memberships are exported for the universal and per-layer categories;
    value categories are derivable from the argument facts themselves.
    """
    vocab = problem.vocabulary
    lines = ["% gridatoms ASP facts, format 1"]
    for d in vocab:
        lines.append(f"trait({d.name}).")
        if d.numeric:
            lines.append(f"numeric_trait({d.name}).")
        if d.cyclic:
            lines.append(f"cyclic_trait({d.name}).")
        for code, label in enumerate(d.labels):
            lines.append(f"trait_value({d.name},{label},{code}).")
    for position in range(1, 9):
        lines.append(f"query_cell({given_cell_id(position)}).")
    for index in range(len(problem.candidates)):
        lines.append(f"answer_cell({candidate_cell_id(index)}).")
    for position in range(1, 9):
        _cell_facts(lines, given_cell_id(position), problem.grid.cell(position), vocab)
    for index, cand in enumerate(problem.candidates):
        _cell_facts(lines, candidate_cell_id(index), cand, vocab)
    if include_truth and problem.truth is not None:
        lines.append(f"truth({candidate_cell_id(problem.truth)}).")
    return "\n".join(lines) + "\n"
