"""Deterministic raster and vector emission of fractal-square approximations.

PNG output for attractor rasters and main-tree overlays, SVG for digit
diagrams.  Identical inputs produce identical bytes: no timestamps, no
randomness, a fixed palette (overridable per call).
"""

from __future__ import annotations

import io

import numpy as np
from PIL import Image

from .core import DEFAULT_CELL_BUDGET, DigitSet, face_digits, refine
from .maintree import main_tree_cells

PALETTE = {
    "background": (255, 255, 255),
    "cell": (43, 74, 111),
    "tree": (226, 118, 45),
    "grid": (153, 153, 153),
    "highlight": (194, 59, 34),
}


def parse_color(text: str) -> tuple:
    """'#rrggbb' or 'r,g,b' to an RGB tuple."""
    text = text.strip()
    if text.startswith("#") and len(text) == 7:
        return tuple(int(text[i : i + 2], 16) for i in (1, 3, 5))
    parts = text.split(",")
    if len(parts) == 3:
        return tuple(min(255, max(0, int(p))) for p in parts)
    raise ValueError(f"bad color {text!r}, expected #rrggbb or r,g,b")


def cell_grid(D: DigitSet, k: int, budget: int = DEFAULT_CELL_BUDGET) -> np.ndarray:
    """Boolean occupancy grid of the level-k cells, row 0 at the bottom."""
    size = D.n**k
    grid = np.zeros((size, size), dtype=bool)
    cells = refine(D, k, budget)
    if cells:
        arr = np.array(sorted(cells), dtype=np.int64)
        grid[arr[:, 1], arr[:, 0]] = True
    return grid


def _rasterize(grid: np.ndarray, px: int, fill, background) -> np.ndarray:
    size = grid.shape[0]
    xs = (np.arange(px, dtype=np.int64) * size) // px
    ys = ((np.arange(px, dtype=np.int64)[::-1]) * size) // px  # y axis upward
    mask = grid[np.ix_(ys, xs)]
    img = np.empty((px, px, 3), dtype=np.uint8)
    img[:] = background
    img[mask] = fill
    return img


def _png_bytes(img: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(img, mode="RGB").save(buf, format="PNG", optimize=False)
    return buf.getvalue()


def render_attractor(
    D: DigitSet,
    k: int,
    px: int = 729,
    fill=None,
    background=None,
    budget: int = DEFAULT_CELL_BUDGET,
) -> bytes:
    """PNG raster of the level-k approximation on a px-by-px canvas."""
    fill = fill or PALETTE["cell"]
    background = background or PALETTE["background"]
    return _png_bytes(_rasterize(cell_grid(D, k, budget), px, fill, background))


def render_tree_overlay(
    D: DigitSet,
    k: int,
    px: int = 729,
    fill=None,
    background=None,
    tree_color=None,
    budget: int = DEFAULT_CELL_BUDGET,
) -> bytes:
    """Attractor raster with the level-k main-tree cells overpainted."""
    fill = fill or PALETTE["cell"]
    background = background or PALETTE["background"]
    tree_color = tree_color or PALETTE["tree"]
    grid = cell_grid(D, k, budget)
    img = _rasterize(grid, px, fill, background)
    overlay = np.zeros_like(grid)
    cells = main_tree_cells(D, k)
    if cells:
        arr = np.array(sorted(cells), dtype=np.int64)
        overlay[arr[:, 1], arr[:, 0]] = True
    size = grid.shape[0]
    xs = (np.arange(px, dtype=np.int64) * size) // px
    ys = ((np.arange(px, dtype=np.int64)[::-1]) * size) // px
    img[overlay[np.ix_(ys, xs)]] = tree_color
    return _png_bytes(img)


def _rgb(color) -> str:
    return f"rgb({color[0]},{color[1]},{color[2]})"


def render_diagram(
    D: DigitSet,
    highlight_face=None,
    cell_color=None,
    highlight_color=None,
    grid_color=None,
) -> str:
    """SVG diagram of the n-by-n digit grid, optionally marking one face's digits."""
    cell_color = cell_color or PALETTE["cell"]
    highlight_color = highlight_color or PALETTE["highlight"]
    grid_color = grid_color or PALETTE["grid"]
    n = D.n
    unit = 40
    size = n * unit
    marked = face_digits(D, highlight_face) if highlight_face else frozenset()
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
    ]
    for x, y in D.digits:
        color = highlight_color if (x, y) in marked else cell_color
        lines.append(
            f'<rect x="{x * unit}" y="{(n - 1 - y) * unit}" '
            f'width="{unit}" height="{unit}" fill="{_rgb(color)}"/>'
        )
    for i in range(n + 1):
        lines.append(
            f'<line x1="{i * unit}" y1="0" x2="{i * unit}" y2="{size}" '
            f'stroke="{_rgb(grid_color)}" stroke-width="1"/>'
        )
        lines.append(
            f'<line x1="0" y1="{i * unit}" x2="{size}" y2="{i * unit}" '
            f'stroke="{_rgb(grid_color)}" stroke-width="1"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
