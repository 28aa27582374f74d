"""On-disk corpus layout: a manifest plus one atoms file per problem.

    <corpus>/
      spec.json        the generator spec the corpus was drawn from
      corpus.jsonl     one row per problem: index, file, truth, rejections
      problems/
        p00000.atoms
        ...

Rows are JSON with sorted keys and the files are written in index
order, so a corpus is byte-reproducible from (spec, size).
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path
from typing import Callable, Iterator

from .codec import decode_atoms, encode_atoms
from .errors import ValidationError
from .generator import GeneratorSpec, sample_problem, spec_hash
from .model import Problem

MANIFEST_NAME = "corpus.jsonl"
SPEC_NAME = "spec.json"
PROBLEM_DIR = "problems"


def problem_filename(index: int) -> str:
    return f"p{index:05d}.atoms"


def write_corpus(
    spec: GeneratorSpec,
    size: int,
    out_dir: str | Path,
    include_truth: bool = True,
    progress: Callable[[int, int], None] | None = None,
) -> list[dict]:
    """Generate and write ``size`` problems; returns the manifest rows."""
    if size < 1:
        raise ValidationError("corpus size must be positive")
    root = Path(out_dir)
    (root / PROBLEM_DIR).mkdir(parents=True, exist_ok=True)
    digest = spec_hash(spec)
    rows = []
    for index in range(size):
        problem = sample_problem(spec, index)
        rel = f"{PROBLEM_DIR}/{problem_filename(index)}"
        (root / rel).write_text(encode_atoms(problem, include_truth), encoding="utf-8")
        assert problem.provenance is not None
        rows.append(
            {
                "index": index,
                "file": rel,
                "truth": problem.truth,
                "rejections": problem.provenance.rejections,
                "seed": spec.seed,
                "spec_hash": digest,
            }
        )
        if progress is not None:
            progress(index + 1, size)
    with open(root / MANIFEST_NAME, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")
    with open(root / SPEC_NAME, "w", encoding="utf-8") as fh:
        json.dump(dataclasses.asdict(spec), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return rows


def read_manifest(corpus_dir: str | Path) -> list[dict]:
    path = Path(corpus_dir) / MANIFEST_NAME
    if not path.is_file():
        raise ValidationError(f"{path} is missing; not a corpus directory")
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append(json.loads(line))
    return rows


def read_spec(corpus_dir: str | Path) -> GeneratorSpec:
    path = Path(corpus_dir) / SPEC_NAME
    if not path.is_file():
        raise ValidationError(f"{path} is missing; not a corpus directory")
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    for key in ("traits_in_play", "templates"):
        if key in raw:
            raw[key] = tuple(raw[key])
    return GeneratorSpec(**raw)


def load_problem(corpus_dir: str | Path, row: dict) -> Problem:
    text = (Path(corpus_dir) / row["file"]).read_text(encoding="utf-8")
    return decode_atoms(text)


def iter_corpus(corpus_dir: str | Path) -> Iterator[tuple[dict, Problem]]:
    """Manifest rows with their decoded problems, in manifest order."""
    for row in read_manifest(corpus_dir):
        yield row, load_problem(corpus_dir, row)


def read_corpus(corpus_dir: str | Path) -> list[Problem]:
    return [problem for _, problem in iter_corpus(corpus_dir)]
