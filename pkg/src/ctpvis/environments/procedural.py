"""Procedurally generated plateau maps.

Plateaus grow from spread-out seed cells until the ground between them is
reduced to narrow corridors. Layouts are rejection-sampled against the
coverage and chokepoint-count bands of the chosen preset.
"""

from __future__ import annotations

import heapq
from dataclasses import asdict, dataclass, replace

import numpy as np

from ..graph import EdgeKey, edge_key, grid_node, shortest_path
from .plateau import Cell, PlateauMap, build_plateau_graph, grid_neighbors

NEIGHBORS_8 = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


class GeneratorError(RuntimeError):
    """Raised when no layout satisfies the constraints within the attempt budget."""


@dataclass(frozen=True)
class ProceduralParams:
    grid: int = 12
    plateaus: tuple[int, int] = (4, 5)
    coverage: tuple[float, float] = (0.40, 0.45)
    chokepoints: tuple[int, int] = (18, 21)
    per_corridor: tuple[int, int] = (2, 3)
    entries: tuple[int, int] = (2, 3)
    p: float = 0.5
    max_attempts: int = 2000

    def validate(self) -> None:
        if self.grid < 8:
            raise GeneratorError(f"grid {self.grid} is too small")
        if self.plateaus[0] < 1 or self.plateaus[0] > self.plateaus[1]:
            raise GeneratorError(f"bad plateau range {self.plateaus}")
        if self.plateaus[1] >= 6 and self.grid < 16:
            raise GeneratorError(f"grid {self.grid} is too small to support {self.plateaus[1]} plateaus (needs 16)")
        if not (0 < self.coverage[0] <= self.coverage[1] < 1):
            raise GeneratorError(f"bad coverage band {self.coverage}")
        if self.chokepoints[0] > self.chokepoints[1] or self.per_corridor[0] < 1:
            raise GeneratorError("bad chokepoint bands")


PRESETS = {
    "standard": ProceduralParams(),
    "dense": ProceduralParams(chokepoints=(21, 24)),
    "lowblock": ProceduralParams(p=0.4),
    "six": ProceduralParams(grid=16, plateaus=(6, 6)),
}

PRESET_GRIDS = {"standard": (12, 14, 16), "dense": (12, 14, 16), "lowblock": (12, 14, 16), "six": (16,)}


def preset(name: str, grid: int | None = None) -> ProceduralParams:
    try:
        params = PRESETS[name]
    except KeyError:
        raise GeneratorError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    if grid is not None:
        params = replace(params, grid=grid)
    params.validate()
    return params


def _sample_centers(n: int, k: int, rng: np.random.Generator) -> list[Cell] | None:
    min_sep = max(3, int(0.3 * n))
    centers: list[Cell] = []
    for _ in range(k):
        for _ in range(200):
            cand = (int(rng.integers(2, n - 2)), int(rng.integers(2, n - 2)))
            if all(abs(cand[0] - a) + abs(cand[1] - b) >= min_sep for a, b in centers):
                centers.append(cand)
                break
        else:
            return None
    return centers


def _grow(n: int, centers: list[Cell], target: int, rng: np.random.Generator) -> list[set[Cell]]:
    """Round-robin growth keeping every pair of plateaus at least one cell apart."""
    owner: dict[Cell, int] = {}
    blobs: list[set[Cell]] = []
    queues: list[list] = []
    for i, c in enumerate(centers):
        owner[c] = i
        blobs.append({c})
        queues.append([])

    def push(i: int, cell: Cell) -> None:
        for nb in grid_neighbors(cell, n, n):
            if nb not in owner and 1 <= nb[0] < n - 1 and 1 <= nb[1] < n - 1:
                d = abs(nb[0] - centers[i][0]) + abs(nb[1] - centers[i][1])
                heapq.heappush(queues[i], (d, float(rng.random()), nb))

    for i, c in enumerate(centers):
        push(i, c)

    def clashes(i: int, cell: Cell) -> bool:
        r, c = cell
        return any(owner.get((r + dr, c + dc), i) != i for dr, dc in NEIGHBORS_8)

    total = len(centers)
    active = list(range(len(centers)))
    while total < target and active:
        still = []
        for i in active:
            while queues[i]:
                _, _, cell = heapq.heappop(queues[i])
                if cell in owner or clashes(i, cell):
                    continue
                owner[cell] = i
                blobs[i].add(cell)
                total += 1
                push(i, cell)
                still.append(i)
                break
            if total >= target:
                break
        active = still
    return blobs


def _pick_entries(boundary: list[tuple[Cell, Cell]], k: int, rng: np.random.Generator) -> list[tuple[Cell, Cell]]:
    """Farthest-point selection of ``k`` boundary crossings, from a random start."""
    if len(boundary) <= k:
        return list(boundary)
    chosen = [boundary[int(rng.integers(len(boundary)))]]
    rest = [b for b in boundary if b != chosen[0]]
    while len(chosen) < k:
        def spread(b):
            return min(abs(b[1][0] - c[1][0]) + abs(b[1][1] - c[1][1]) for c in chosen)

        best = max(rest, key=spread)
        chosen.append(best)
        rest.remove(best)
    return chosen


def find_corridors(ground: set[Cell], n: int, terminals: set[Cell] = frozenset()) -> list[list[Cell]]:
    """Maximal chains of ground cells having exactly two ground neighbors.

    Each corridor is returned as a cell sequence that includes the junction
    cell at each end, so consecutive pairs are the corridor's edges.
    """
    def gnb(cell):
        return [nb for nb in grid_neighbors(cell, n, n) if nb in ground]

    inner = {c for c in ground if len(gnb(c)) == 2 and c not in terminals}
    seen: set[Cell] = set()
    corridors = []
    for start in sorted(inner):
        if start in seen:
            continue
        # walk to one end of the chain, then collect it in order
        chain = [start]
        seen.add(start)
        for direction in range(2):
            prev, cur = start, gnb(start)[direction]
            ext = []
            while cur in inner and cur not in seen:
                seen.add(cur)
                ext.append(cur)
                nxt = [x for x in gnb(cur) if x != prev]
                prev, cur = cur, nxt[0]
            if cur not in inner:
                ext.append(cur)
            chain = chain + ext if direction else list(reversed(ext)) + chain
        if len(chain) >= 3:
            corridors.append(chain)
    return corridors


def generate_procedural_plateau(params: ProceduralParams, seed: int) -> PlateauMap:
    """Rejection-sample a plateau map satisfying ``params``; deterministic per seed."""
    params.validate()
    n = params.grid
    src_cell, dst_cell = (n - 1, 0), (0, n - 1)
    reasons: dict[str, int] = {}

    def reject(why: str) -> None:
        reasons[why] = reasons.get(why, 0) + 1

    for attempt in range(params.max_attempts):
        rng = np.random.default_rng([seed, attempt])
        k = int(rng.integers(params.plateaus[0], params.plateaus[1] + 1))
        cov_target = rng.uniform(*params.coverage)
        centers = _sample_centers(n, k, rng)
        if centers is None:
            reject("centers")
            continue
        blobs = _grow(n, centers, int(np.ceil(cov_target * n * n)), rng)
        covered = sum(len(b) for b in blobs)
        coverage = covered / (n * n)
        if not (params.coverage[0] <= coverage <= params.coverage[1]) or min(len(b) for b in blobs) < 4:
            reject("coverage")
            continue

        plateau_cells = set().union(*blobs)
        ground = {(r, c) for r in range(n) for c in range(n)} - plateau_cells

        entries = []
        for blob in blobs:
            boundary = sorted(
                (cell, nb) for cell in blob for nb in grid_neighbors(cell, n, n) if nb in ground
            )
            e = int(rng.integers(params.entries[0], params.entries[1] + 1))
            entries.append(_pick_entries(boundary, e, rng))

        corridors = find_corridors(ground, n, {src_cell, dst_cell})
        # Longest corridors first until the drawn chokepoint total is reached.
        target = int(rng.integers(params.chokepoints[0], params.chokepoints[1] + 1))
        order = sorted(range(len(corridors)), key=lambda i: (-len(corridors[i]), float(rng.random())))
        choke_cells: list[tuple[Cell, Cell]] = []
        for i in order:
            if len(choke_cells) >= target:
                break
            chain = corridors[i]
            # "final" edges: the end of the chain nearer the target
            d_first = abs(chain[0][0] - dst_cell[0]) + abs(chain[0][1] - dst_cell[1])
            d_last = abs(chain[-1][0] - dst_cell[0]) + abs(chain[-1][1] - dst_cell[1])
            if d_first < d_last:
                chain = chain[::-1]
            cnt = int(rng.integers(params.per_corridor[0], params.per_corridor[1] + 1))
            cnt = min(cnt, len(chain) - 1, params.chokepoints[1] - len(choke_cells))
            if cnt < params.per_corridor[0]:
                continue
            pairs = list(zip(chain, chain[1:]))
            choke_cells.extend(pairs[-cnt:])
        if not (params.chokepoints[0] <= len(choke_cells) <= params.chokepoints[1]):
            reject("chokepoint count")
            continue

        g, vis = build_plateau_graph(n, n, blobs, entries)
        src, dst = grid_node(*src_cell, n), grid_node(*dst_cell, n)
        chokes = frozenset(edge_key(grid_node(*a, n), grid_node(*b, n)) for a, b in choke_cells)
        if shortest_path(g, src, dst) is None:
            reject("disconnected")
            continue
        if shortest_path(g, src, dst, chokes) is None:
            reject("no route avoiding chokepoints")
            continue
        meta = {
            "generator": "procedural",
            "seed": seed,
            "attempt": attempt,
            "params": asdict(params),
            "coverage": coverage,
            "n_plateaus": len(blobs),
            "n_corridors": len(corridors),
        }
        return PlateauMap(
            graph=g,
            vis=vis,
            chokepoints=chokes,
            src=src,
            dst=dst,
            rows=n,
            cols=n,
            plateaus=[frozenset(b) for b in blobs],
            entries=entries,
            meta=meta,
        )
    raise GeneratorError(
        f"no valid layout after {params.max_attempts} attempts (grid={n}, seed={seed}); rejections: {reasons}"
    )
