"""Plateau grid worlds: high-visibility regions reachable only through costly entry edges."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..graph import EdgeKey, Graph, VisibilityMap, edge_key, grid_node, shortest_path

Cell = tuple[int, int]

STEPS = ((-1, 0), (1, 0), (0, -1), (0, 1))


@dataclass
class PlateauMap:
    graph: Graph
    vis: VisibilityMap
    chokepoints: frozenset[EdgeKey]
    src: int
    dst: int
    rows: int
    cols: int
    plateaus: list[frozenset[Cell]]
    entries: list[list[tuple[Cell, Cell]]]
    meta: dict = field(default_factory=dict)

    def cell(self, v: int) -> Cell:
        return divmod(v, self.cols)

    def node(self, cell: Cell) -> int:
        return grid_node(cell[0], cell[1], self.cols)


def grid_neighbors(cell: Cell, rows: int, cols: int) -> Iterable[Cell]:
    r, c = cell
    for dr, dc in STEPS:
        nr, nc = r + dr, c + dc
        if 0 <= nr < rows and 0 <= nc < cols:
            yield (nr, nc)


def build_plateau_graph(
    rows: int,
    cols: int,
    plateaus: Sequence[Iterable[Cell]],
    entries: Sequence[Iterable[tuple[Cell, Cell]]],
    entry_cost: float = 3.0,
    base_cost: float = 1.0,
) -> tuple[Graph, VisibilityMap]:
    """4-connected grid where plateaus touch the ground only through ``entries``.

    A plateau node sees every edge touching the plateau or the ring of ground
    cells around it; ground nodes see their incident edges only.
    """
    owner: dict[Cell, int] = {}
    for i, region in enumerate(plateaus):
        for cell in region:
            if cell in owner:
                raise ValueError(f"cell {cell} belongs to two plateaus")
            owner[cell] = i
    entry_set = set()
    for i, pairs in enumerate(entries):
        for a, b in pairs:
            if (owner.get(a) == i) == (owner.get(b) == i) or b not in set(grid_neighbors(a, rows, cols)):
                raise ValueError(f"entry {a}-{b} does not cross the boundary of plateau {i}")
            entry_set.add(frozenset((a, b)))

    edges = []
    for r in range(rows):
        for c in range(cols):
            a = (r, c)
            for b in ((r, c + 1), (r + 1, c)):
                if b[0] >= rows or b[1] >= cols:
                    continue
                oa, ob = owner.get(a), owner.get(b)
                u, v = grid_node(*a, cols), grid_node(*b, cols)
                if oa == ob:
                    edges.append((u, v, base_cost, base_cost))
                elif frozenset((a, b)) in entry_set:
                    edges.append((u, v, entry_cost, entry_cost))

    coords = [(r, c, 1.0 if (r, c) in owner else 0.0) for r in range(rows) for c in range(cols)]
    g = Graph(rows * cols, edges, coords)

    vis: dict[int, set[EdgeKey]] = {}
    for region in plateaus:
        region = set(region)
        zone = set(region)
        for cell in region:
            zone.update(grid_neighbors(cell, rows, cols))
        seen = set()
        for cell in zone:
            seen |= g.incident(grid_node(*cell, cols))
        for cell in region:
            vis[grid_node(*cell, cols)] = seen
    return g, VisibilityMap(g, vis)


def rect(r0: int, r1: int, c0: int, c1: int) -> frozenset[Cell]:
    """Cells with ``r0 <= row <= r1`` and ``c0 <= col <= c1``."""
    return frozenset((r, c) for r in range(r0, r1 + 1) for c in range(c0, c1 + 1))


# --- fixed reconstruction ---------------------------------------------------
#
# 12 x 12 grid, source bottom-left, target top-right. Row 0 is the top row.
# Version string is stored in the bundle manifest so results can name the
# exact layout they were produced on.
#
#   . . x x x . . . x x x T      A-D  plateaus
#   . A A A A x B B B B B e      e    ground end of an entry edge
#   x A A A A x B B B B B x      x    endpoint of a chokepoint edge
#   x A A A A x B B B B B x
#   x A A A A . B B B B B x      Crossing A, B or D bypasses the corridor
#   . e x x e . e x x x . .      chokepoints next to it; with every
#   . C C C C . D D D D D e      chokepoint blocked the best route costs 26
#   . C C C C . D D D D D x      (static shortest path: 22).
#   . C C C C . D D D D D x
#   e C C C C . D D D D D .
#   e C C C C . D D D D D .
#   S . . . . . e x x x . .

PLATEAU_MAP_VERSION = "plateau-v1"

_ROWS = _COLS = 12

_PLATEAUS = [
    rect(1, 4, 1, 4),
    rect(1, 4, 6, 10),
    rect(6, 10, 1, 4),
    rect(6, 10, 6, 10),
]

# (plateau cell, ground cell) pairs; each costs 3 in both directions.
_ENTRIES = [
    [((4, 1), (5, 1)), ((4, 4), (5, 4))],
    [((4, 6), (5, 6)), ((1, 10), (1, 11))],
    [((10, 1), (10, 0)), ((9, 1), (9, 0))],
    [((10, 6), (11, 6)), ((6, 10), (6, 11))],
]


def _h(r: int, c0: int, c1: int) -> list[tuple[Cell, Cell]]:
    return [((r, c), (r, c + 1)) for c in range(c0, c1)]


def _v(c: int, r0: int, r1: int) -> list[tuple[Cell, Cell]]:
    return [((r, c), (r + 1, c)) for r in range(r0, r1)]


_CHOKEPOINTS = (
    _h(0, 8, 10) + _v(11, 2, 4) + _h(0, 2, 4) + _v(5, 1, 3) + _h(5, 7, 9)
    + _v(11, 6, 8) + _h(5, 2, 4) + _v(0, 2, 4) + _h(11, 7, 9)
)


def build_plateau_map() -> PlateauMap:
    """The fixed plateau benchmark map."""
    g, vis = build_plateau_graph(_ROWS, _COLS, _PLATEAUS, _ENTRIES)
    chokes = frozenset(
        edge_key(grid_node(*a, _COLS), grid_node(*b, _COLS)) for a, b in _CHOKEPOINTS
    )
    for k in chokes:
        if not g.has_edge(*k):
            raise AssertionError(f"chokepoint {k} is not an edge")
    src = grid_node(_ROWS - 1, 0, _COLS)
    dst = grid_node(0, _COLS - 1, _COLS)
    return PlateauMap(
        graph=g,
        vis=vis,
        chokepoints=chokes,
        src=src,
        dst=dst,
        rows=_ROWS,
        cols=_COLS,
        plateaus=list(_PLATEAUS),
        entries=[list(e) for e in _ENTRIES],
        meta={"version": PLATEAU_MAP_VERSION},
    )


def static_cost(pm: PlateauMap) -> float:
    found = shortest_path(pm.graph, pm.src, pm.dst)
    assert found is not None
    return found[1]
