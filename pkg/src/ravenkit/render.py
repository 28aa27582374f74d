"""Deterministic software rasterizer for cells, sheets, and training sets.

Everything renders through integer coverage blending: each glyph is
sampled on a fixed subpixel lattice, the per-pixel hit count becomes an
alpha in 1/16ths, and compositing uses integer arithmetic only.  Two
renders of the same cell with the same style are therefore byte-identical
on any platform.  (No text, no fonts, no trig calls; rotation uses an
exact eight-entry table built from sqrt(0.5).)
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

import numpy as np
from PIL import Image

from .codec import candidate_cell_id, given_cell_id
from .errors import RenderError
from .model import Cell, ObjectSpec, Problem
from .vocab import Vocabulary

CANVAS = 250
_SUPER = 4
_UNIT = _SUPER * _SUPER

_SQ2 = math.sqrt(0.5)
#: cos/sin of k*45 degrees for k in 0..7, exact up to IEEE sqrt.
_COS = (1.0, _SQ2, 0.0, -_SQ2, -1.0, -_SQ2, 0.0, _SQ2)
_SIN = (0.0, _SQ2, 1.0, _SQ2, 0.0, -_SQ2, -1.0, -_SQ2)

MANIFEST_NAME = "manifest.jsonl"
IMAGE_DIR = "images"
OBJECT_HEADS = 6
HEAD_TRAITS = ("shape", "color", "fill", "rotation")


@dataclass(frozen=True)
class StyleConfig:
    """All knobs that influence pixels.

    ``palette`` maps color labels to RGB; any label missing from it
    renders as ``default_color``.  ``noise_sigma`` > 0 turns on the
    seed-deterministic color jitter used by the robustness trials.
    """

    background: tuple[int, int, int] = (247, 247, 247)
    default_color: tuple[int, int, int] = (20, 20, 20)
    palette: tuple[tuple[str, tuple[int, int, int]], ...] = (
        ("black", (20, 20, 20)),
        ("gray", (128, 128, 128)),
        ("red", (204, 41, 41)),
        ("green", (36, 152, 64)),
        ("blue", (45, 84, 196)),
        ("yellow", (233, 196, 30)),
    )
    base_radius: float = 30.0
    size_factors: tuple[tuple[str, float], ...] = (
        ("small", 0.65),
        ("medium", 1.0),
        ("large", 1.2),
    )
    slot_anchors_x: tuple[int, int, int] = (50, 125, 200)
    slot_anchors_y: tuple[int, int] = (65, 185)
    background_layer: str = "bg"
    background_center: tuple[int, int] = (125, 125)
    background_scale: float = 2.4
    hole_marker_color: tuple[int, int, int] = (170, 170, 170)
    noise_sigma: float = 0.0
    noise_seed: int = 0

    def color_of(self, label: str | None) -> tuple[int, int, int]:
        for name, rgb in self.palette:
            if name == label:
                return rgb
        return self.default_color

    def size_factor(self, label: str | None) -> float:
        for name, f in self.size_factors:
            if name == label:
                return f
        return 1.0


DEFAULT_STYLE = StyleConfig()


def _interior(shape: str, lx: np.ndarray, ly: np.ndarray, r: float) -> np.ndarray:
    """Point-in-glyph test in local coordinates (y up, unrotated)."""
    if shape == "circle":
        return lx * lx + ly * ly <= r * r
    if shape == "square":
        s = 0.9 * r
        return (np.abs(lx) <= s) & (np.abs(ly) <= s)
    if shape == "triangle":
        # Equilateral, apex north: y from -r/2 to r, half-width tapering.
        inside = ly >= -0.5 * r
        return inside & (np.abs(lx) * math.sqrt(3.0) <= r - ly)
    if shape == "diamond":
        # Tall rhombus, deliberately not a rotated square.
        return np.abs(lx) / (0.75 * r) + np.abs(ly) / (1.15 * r) <= 1.0
    if shape == "star":
        return _star_interior(lx, ly, r)
    if shape == "cross":
        a = 0.35 * r
        return ((np.abs(lx) <= a) & (np.abs(ly) <= r)) | (
            (np.abs(ly) <= a) & (np.abs(lx) <= r)
        )
    raise RenderError(f"no glyph registered for shape {shape!r}")


def _star_vertices(r: float) -> list[tuple[float, float]]:
    """Ten vertices alternating outer/inner radius, apex north."""
    pts = []
    inner = 0.45 * r
    for k in range(10):
        radius = r if k % 2 == 0 else inner
        angle = math.pi / 2.0 - k * math.pi / 5.0
        pts.append((radius * math.cos(angle), radius * math.sin(angle)))
    return pts


def _star_interior(lx: np.ndarray, ly: np.ndarray, r: float) -> np.ndarray:
    """Even-odd crossing test against the ten-edge star polygon."""
    pts = _star_vertices(r)
    inside = np.zeros(lx.shape, dtype=bool)
    for i in range(10):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % 10]
        crosses = (y1 > ly) != (y2 > ly)
        with np.errstate(divide="ignore", invalid="ignore"):
            xcross = x1 + (ly - y1) * (x2 - x1) / (y2 - y1)
        inside ^= crosses & (lx < xcross)
    return inside


def _glyph_mask(
    shape: str, fill: str | None, rotation: int, cx: float, cy: float, r: float,
    x0: int, y0: int, x1: int, y1: int,
) -> np.ndarray:
    """Subpixel boolean mask for one object over canvas window [x0,x1)×[y0,y1)."""
    xs = (np.arange(x0 * _SUPER, x1 * _SUPER, dtype=np.float64) + 0.5) / _SUPER
    ys = (np.arange(y0 * _SUPER, y1 * _SUPER, dtype=np.float64) + 0.5) / _SUPER
    dx = xs[None, :] - cx
    dy = cy - ys[:, None]  # canvas y grows downward; local y points up
    c, s = _COS[rotation % 8], _SIN[rotation % 8]
    lx = c * dx + s * dy
    ly = -s * dx + c * dy

    body = _interior(shape, lx, ly, r)
    if fill == "hollow":
        body &= ~_interior(shape, lx, ly, 0.65 * r)
    elif fill == "hatched":
        stripes = np.floor((lx + ly) / (0.28 * r)).astype(np.int64) % 2 == 0
        rim = ~_interior(shape, lx, ly, 0.88 * r)
        body &= stripes | rim

    # Orientation tick: a bar reaching north of the glyph, rotated with it,
    # so every shape (circles included) exposes its rotation to pixels.
    tick = (np.abs(lx) <= 0.12 * r) & (ly >= 0.9 * r) & (ly <= 1.35 * r)
    return body | tick


def _blend(canvas: np.ndarray, mask: np.ndarray, rgb: tuple[int, int, int],
           x0: int, y0: int) -> None:
    """Integer alpha blend of a subpixel mask into the uint8 canvas."""
    h = mask.shape[0] // _SUPER
    w = mask.shape[1] // _SUPER
    counts = (
        mask.reshape(h, _SUPER, w, _SUPER).sum(axis=(1, 3)).astype(np.uint16)
    )
    region = canvas[y0:y0 + h, x0:x0 + w].astype(np.uint16)
    color = np.array(rgb, dtype=np.uint16)
    c = counts[:, :, None]
    canvas[y0:y0 + h, x0:x0 + w] = (
        (region * (_UNIT - c) + color * c + _UNIT // 2) // _UNIT
    ).astype(np.uint8)


def _object_geometry(
    obj: ObjectSpec, style: StyleConfig, vocab: Vocabulary
) -> tuple[float, float, float]:
    """Anchor center and radius for one object."""

    def label(trait: str) -> str | None:
        if trait not in vocab:
            return None
        try:
            return vocab[trait].label(obj.value(trait))
        except KeyError:
            return None

    r = style.base_radius * style.size_factor(label("size"))
    if obj.layer == style.background_layer:
        cx, cy = style.background_center
        return float(cx), float(cy), r * style.background_scale
    cx = style.slot_anchors_x[obj.slot % 3]
    cy = style.slot_anchors_y[(obj.slot // 3) % 2]
    return float(cx), float(cy), r


def _cell_jitter(cell: Cell, vocab: Vocabulary, style: StyleConfig) -> dict[str, tuple[int, int, int]]:
    """Seed-deterministic palette shift for one cell (noise trials)."""
    if style.noise_sigma <= 0:
        return {}
    digest = hashlib.sha256(repr((style.noise_seed, cell)).encode()).digest()
    rng = np.random.default_rng(np.frombuffer(digest[:16], dtype=np.uint64))
    shifted = {}
    for name, rgb in style.palette:
        delta = rng.normal(0.0, style.noise_sigma, size=3)
        shifted[name] = tuple(
            int(min(255, max(0, round(channel + d))))
            for channel, d in zip(rgb, delta)
        )
    return shifted


def render_cell(cell: Cell, vocab: Vocabulary, style: StyleConfig = DEFAULT_STYLE) -> np.ndarray:
    """Rasterize one cell to a 250×250×3 uint8 array.

    Objects draw in identity order, so background-layer objects go down
    first and later foreground slots may overlap earlier ones.
    """
    canvas = np.empty((CANVAS, CANVAS, 3), dtype=np.uint8)
    canvas[:, :] = np.array(style.background, dtype=np.uint8)
    jitter = _cell_jitter(cell, vocab, style)
    for obj in cell:
        if "shape" not in vocab:
            raise RenderError("vocabulary has no shape trait; nothing to draw")
        shape = vocab["shape"].label(obj.value("shape"))
        color_label = None
        if "color" in vocab:
            try:
                color_label = vocab["color"].label(obj.value("color"))
            except KeyError:
                color_label = None
        fill = None
        if "fill" in vocab:
            try:
                fill = vocab["fill"].label(obj.value("fill"))
            except KeyError:
                fill = None
        rotation = 0
        if "rotation" in vocab:
            try:
                rotation = obj.value("rotation")
            except KeyError:
                rotation = 0
        cx, cy, r = _object_geometry(obj, style, vocab)
        reach = int(math.ceil(1.4 * r)) + 1
        x0 = max(0, int(cx) - reach)
        x1 = min(CANVAS, int(cx) + reach)
        y0 = max(0, int(cy) - reach)
        y1 = min(CANVAS, int(cy) + reach)
        if x0 >= x1 or y0 >= y1:
            raise RenderError(f"object {obj.identity} falls outside the canvas")
        mask = _glyph_mask(shape, fill, rotation, cx, cy, r, x0, y0, x1, y1)
        rgb = jitter.get(color_label, style.color_of(color_label))
        _blend(canvas, mask, rgb, x0, y0)
    return canvas


def _hole_marker(style: StyleConfig) -> np.ndarray:
    """The ninth query cell: background plus a rotated-cross placeholder."""
    canvas = np.empty((CANVAS, CANVAS, 3), dtype=np.uint8)
    canvas[:, :] = np.array(style.background, dtype=np.uint8)
    mask = _glyph_mask("cross", "solid", 1, 125.0, 125.0, 55.0, 50, 50, 200, 200)
    _blend(canvas, mask, style.hole_marker_color, 50, 50)
    return canvas


def render_problem_sheet(
    problem: Problem, style: StyleConfig = DEFAULT_STYLE
) -> np.ndarray:
    """Composite 3×3 query grid (hole marked) above the 8-candidate strip."""
    gap = 10
    grid_w = 3 * CANVAS + 4 * gap
    strip_w = 4 * CANVAS + 5 * gap
    width = max(grid_w, strip_w)
    height = 5 * CANVAS + 7 * gap
    sheet = np.empty((height, width, 3), dtype=np.uint8)
    sheet[:, :] = np.array(style.background, dtype=np.uint8)

    def paste(img: np.ndarray, x: int, y: int) -> None:
        sheet[y:y + CANVAS, x:x + CANVAS] = img

    grid_x0 = (width - grid_w) // 2 + gap
    for pos in range(1, 10):
        row, col = divmod(pos - 1, 3)
        x = grid_x0 + col * (CANVAS + gap)
        y = gap + row * (CANVAS + gap)
        if pos == 9:
            paste(_hole_marker(style), x, y)
        else:
            paste(render_cell(problem.grid.cell(pos), problem.vocabulary, style), x, y)
    strip_x0 = (width - strip_w) // 2 + gap
    for i, cand in enumerate(problem.candidates):
        x = strip_x0 + (i % 4) * (CANVAS + gap)
        y = 3 * (CANVAS + gap) + 2 * gap + (i // 4) * (CANVAS + gap)
        paste(render_cell(cand, problem.vocabulary, style), x, y)
    return sheet


def write_png(image: np.ndarray, path: str | Path) -> None:
    """PNG with pinned encoder settings so bytes never drift."""
    Image.fromarray(image, mode="RGB").save(
        str(path), format="PNG", optimize=False, compress_level=6
    )


def cell_image_name(problem_index: int, cell_id: str) -> str:
    return f"p{problem_index:05d}_{cell_id}.png"


def _head_labels(cell: Cell, vocab: Vocabulary) -> list[dict]:
    """Six per-object label heads; head k describes slot k.

    The training contract requires single-layer cells: the observer's
    heads are positional, and only the slot→anchor mapping makes a head's
    receptive field well defined.
    """
    heads: list[dict] = [
        {"presence": 0, **{t: None for t in HEAD_TRAITS}} for _ in range(OBJECT_HEADS)
    ]
    for obj in cell:
        if obj.layer != "fg":
            raise RenderError(
                "training manifests need single-layer cells; "
                f"found layer {obj.layer!r}"
            )
        entry = heads[obj.slot]
        entry["presence"] = 1
        for trait in HEAD_TRAITS:
            if trait in vocab:
                entry[trait] = vocab[trait].label(obj.value(trait))
    return heads


def write_training_manifest(
    problems: Iterable[tuple[int, Problem]],
    out_dir: str | Path,
    style: StyleConfig = DEFAULT_STYLE,
    progress: Callable[[int], None] | None = None,
) -> int:
    """Render every cell of every problem and write the label manifest.

    Produces ``images/p<index>_<cell>.png`` for the 8 query cells and the
    8 candidates (16 images per problem) plus one manifest row per image
    with the six per-object label heads.  Returns the image count.
    """
    out = Path(out_dir)
    (out / IMAGE_DIR).mkdir(parents=True, exist_ok=True)
    written = 0
    with open(out / MANIFEST_NAME, "w", encoding="utf-8") as fh:
        for index, problem in problems:
            vocab = problem.vocabulary
            cells = [
                (given_cell_id(pos), problem.grid.cell(pos)) for pos in range(1, 9)
            ] + [
                (candidate_cell_id(i), cand)
                for i, cand in enumerate(problem.candidates)
            ]
            for cell_id, cell in cells:
                name = cell_image_name(index, cell_id)
                try:
                    write_png(render_cell(cell, vocab, style), out / IMAGE_DIR / name)
                except OSError as exc:
                    raise RenderError(
                        f"cannot write image {out / IMAGE_DIR / name}: {exc}"
                    ) from exc
                row = {
                    "image": f"{IMAGE_DIR}/{name}",
                    "problem": index,
                    "cell": cell_id,
                    "objects": _head_labels(cell, vocab),
                }
                fh.write(json.dumps(row, sort_keys=True) + "\n")
                written += 1
            if progress is not None:
                progress(index)
    return written
