"""Heightmap terrain: slope-dependent costs, line-of-sight visibility, oval obstacles.

Heightmap text format::

    rows cols
    h00 h01 ... (row-major, whitespace separated, any line breaks)

Values are min-max scaled to ``[0, 10]`` on load.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path as FsPath
from typing import Sequence

import numpy as np

from ..graph import EdgeKey, Graph, VisibilityMap, grid_edges, shortest_path

COST_FLOOR = 1e-3
HEIGHT_RANGE = 10.0

DIRECTIONS_8 = ((-1, 0), (1, 0), (0, -1), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1))


class HeightmapError(ValueError):
    pass


@dataclass
class Heightmap:
    h: np.ndarray

    def __post_init__(self):
        self.h = np.asarray(self.h, dtype=float)
        if self.h.ndim != 2 or self.h.size == 0:
            raise HeightmapError("heightmap must be a non-empty 2-D array")

    @property
    def rows(self) -> int:
        return self.h.shape[0]

    @property
    def cols(self) -> int:
        return self.h.shape[1]

    def node(self, r: int, c: int) -> int:
        return r * self.cols + c

    def cell(self, v: int) -> tuple[int, int]:
        return divmod(v, self.cols)


def normalize_heights(raw: np.ndarray, top: float = HEIGHT_RANGE) -> np.ndarray:
    raw = np.asarray(raw, dtype=float)
    lo, hi = raw.min(), raw.max()
    if hi == lo:
        return np.zeros_like(raw)
    return (raw - lo) / (hi - lo) * top


def parse_heightmap(text: str, normalize: bool = True) -> Heightmap:
    tokens: list[tuple[str, int, int]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        for m in re.finditer(r"\S+", line):
            tokens.append((m.group(), lineno, m.start() + 1))
    if len(tokens) < 2:
        raise HeightmapError("line 1: expected header 'rows cols'")
    try:
        rows, cols = int(tokens[0][0]), int(tokens[1][0])
    except ValueError:
        raise HeightmapError(f"line {tokens[0][1]}: malformed header") from None
    if tokens[0][1] != tokens[1][1] or rows <= 0 or cols <= 0:
        raise HeightmapError(f"line {tokens[0][1]}: malformed header")
    body = tokens[2:]
    if len(body) != rows * cols:
        raise HeightmapError(f"expected {rows * cols} heights, found {len(body)}")
    vals = np.empty(rows * cols)
    for i, (tok, lineno, col) in enumerate(body):
        try:
            vals[i] = float(tok)
        except ValueError:
            raise HeightmapError(f"line {lineno}, column {col}: non-numeric value {tok!r}") from None
        if not math.isfinite(vals[i]):
            raise HeightmapError(f"line {lineno}, column {col}: non-finite value {tok!r}")
    vals = vals.reshape(rows, cols)
    return Heightmap(normalize_heights(vals) if normalize else vals)


def load_heightmap(path: str | FsPath, normalize: bool = True) -> Heightmap:
    return parse_heightmap(FsPath(path).read_text(), normalize=normalize)


def format_heightmap(h: np.ndarray) -> str:
    h = np.asarray(h, dtype=float)
    lines = [f"{h.shape[0]} {h.shape[1]}"]
    lines += [" ".join(repr(float(x)) for x in row) for row in h]
    return "\n".join(lines) + "\n"


def terrain_cost(h_from: float, h_to: float) -> float:
    """Directed cost ``1 + 2d(d - 0.5)`` with ``d = h_to - h_from``, floored at ``COST_FLOOR``."""
    d = h_to - h_from
    return max(1.0 + 2.0 * d * (d - 0.5), COST_FLOOR)


def build_terrain_graph(hm: Heightmap) -> Graph:
    h = hm.h.ravel()
    cols = hm.cols
    edges = [(u, v, terrain_cost(h[u], h[v]), terrain_cost(h[v], h[u])) for u, v in grid_edges(hm.rows, cols)]
    coords = [(r, c, float(hm.h[r, c])) for r in range(hm.rows) for c in range(cols)]
    return Graph(hm.rows * cols, edges, coords)


def visible_cells(hm: Heightmap, r0: int, c0: int, mode: str = "sightline") -> list[tuple[int, int]]:
    """Cells visible from ``(r0, c0)`` along the 8 compass rays, including the origin.

    ``sightline``: a ray cell is hidden when an intermediate cell rises above the
    straight line joining the two cells' heights. ``threshold``: a ray cell is
    hidden once any intermediate cell is higher than the observer.
    """
    if mode not in ("sightline", "threshold"):
        raise ValueError(f"unknown line-of-sight mode {mode!r}")
    h = hm.h
    h0 = h[r0, c0]
    out = [(r0, c0)]
    for dr, dc in DIRECTIONS_8:
        r, c, k = r0 + dr, c0 + dc, 1
        # Running maximum of the blocking statistic over intermediate cells.
        worst = -math.inf
        while 0 <= r < hm.rows and 0 <= c < hm.cols:
            if mode == "sightline":
                # (h_j - h0)/j <= (h_k - h0)/k for all j < k
                slope = (h[r, c] - h0) / k
                if slope >= worst:
                    out.append((r, c))
                worst = max(worst, slope)
            else:
                if worst <= h0:
                    out.append((r, c))
                else:
                    break
                worst = max(worst, h[r, c])
            r, c, k = r + dr, c + dc, k + 1
    return out


def line_of_sight_visibility(hm: Heightmap, g: Graph | None = None, mode: str = "sightline") -> VisibilityMap:
    """An edge is visible from ``v`` when both of its endpoints are."""
    g = build_terrain_graph(hm) if g is None else g
    vis: dict[int, set[EdgeKey]] = {}
    for r in range(hm.rows):
        for c in range(hm.cols):
            seen = {hm.node(rr, cc) for rr, cc in visible_cells(hm, r, c, mode)}
            keys = set()
            for w in seen:
                for x, _, k in g.adjacency(w):
                    if x in seen:
                        keys.add(k)
            vis[hm.node(r, c)] = keys
    return VisibilityMap(g, vis)


Oval = tuple[tuple[float, float], tuple[float, float]]


def _in_oval(r: float, c: float, oval: Oval) -> bool:
    (cr, cc), (ar, ac) = oval
    total = 0.0
    for off, a in ((r - cr, ar), (c - cc, ac)):
        if a <= 0:
            if off != 0:
                return False
        else:
            total += (off / a) ** 2
    return total <= 1.0


def oval_edge_groups(g: Graph, hm: Heightmap, ovals: Sequence[Oval]) -> list[frozenset[EdgeKey]]:
    """Per-oval sets of edges with both endpoints inside the oval."""
    groups = []
    for oval in ovals:
        inside = {hm.node(r, c) for r in range(hm.rows) for c in range(hm.cols) if _in_oval(r, c, oval)}
        groups.append(frozenset((u, v) for u, v in g.edge_keys() if u in inside and v in inside))
    return groups


def place_oval_obstacles(g: Graph, hm: Heightmap, ovals: Sequence[Oval]) -> frozenset[EdgeKey]:
    """Union of edges covered by the ovals; these are the blockable edges."""
    out: set[EdgeKey] = set()
    for grp in oval_edge_groups(g, hm, ovals):
        out |= grp
    return frozenset(out)


def ovals_along_path(path: Sequence[int], hm: Heightmap, count: int = 3, axes: tuple[float, float] = (2.5, 2.5)) -> list[Oval]:
    """Ovals centered at evenly spaced interior points of ``path``."""
    ovals = []
    for i in range(1, count + 1):
        v = path[round(i * (len(path) - 1) / (count + 1))]
        r, c = hm.cell(v)
        ovals.append(((float(r), float(c)), (float(axes[0]), float(axes[1]))))
    return ovals


@dataclass
class TerrainMap:
    hm: Heightmap
    graph: Graph
    vis: VisibilityMap
    ovals: list[Oval]
    groups: list[frozenset[EdgeKey]]
    src: int
    dst: int
    meta: dict = field(default_factory=dict)


def build_terrain_world(
    hm: Heightmap,
    ovals: Sequence[Oval] | None = None,
    los_mode: str = "sightline",
    oval_axes: tuple[float, float] = (2.5, 2.5),
) -> TerrainMap:
    """Source top-right, target bottom-left; default ovals sit on the static shortest path."""
    g = build_terrain_graph(hm)
    vis = line_of_sight_visibility(hm, g, los_mode)
    src, dst = hm.node(0, hm.cols - 1), hm.node(hm.rows - 1, 0)
    if ovals is None:
        found = shortest_path(g, src, dst)
        assert found is not None
        ovals = ovals_along_path(found[0], hm, 3, oval_axes)
    ovals = [((float(a), float(b)), (float(x), float(y))) for (a, b), (x, y) in ovals]
    groups = oval_edge_groups(g, hm, ovals)
    return TerrainMap(hm, g, vis, list(ovals), groups, src, dst, {"los_mode": los_mode})
