"""Short diverse path sampling.

Starting from the shortest path, each tree node drops ``n`` virtual obstacles
on its own path (one per child), re-solves, and recurses to depth ``r``.
Obstacles accumulate down a branch, so a depth-``i`` path is the shortest path
only when all ``i`` of its ancestors' obstacles are present.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .graph import EdgeKey, Graph, Path, edge_key, shortest_path


@dataclass(frozen=True)
class SamplerParams:
    n: int = 4
    r: int = 4
    m: int = 1
    rng_seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.r < 0 or self.m < 0:
            raise ValueError("r and m must be >= 0")

    def max_nodes(self) -> int:
        return sum(self.n**i for i in range(self.r + 1))


@dataclass
class PathTreeNode:
    path: Path
    depth: int
    removed_edges: frozenset[EdgeKey]
    children: list["PathTreeNode"] = field(default_factory=list)


@dataclass
class PathTree:
    root: PathTreeNode | None
    params: SamplerParams

    @property
    def empty(self) -> bool:
        return self.root is None

    def __len__(self) -> int:
        return len(flatten(self))


def virtual_obstacle(g: Graph, center: int, m: int) -> frozenset[EdgeKey]:
    """Edges whose both endpoints lie within ``m`` hops of ``center``."""
    ball = {center}
    frontier = deque([(center, 0)])
    while frontier:
        u, d = frontier.popleft()
        if d == m:
            continue
        for v in g.neighbors(u):
            if v not in ball:
                ball.add(v)
                frontier.append((v, d + 1))
    out = set()
    for u in ball:
        for v in g.neighbors(u):
            if v in ball:
                out.add(edge_key(u, v))
    return frozenset(out)


def _child_rng(seed: int, position: tuple[int, ...]) -> np.random.Generator:
    # One stream per tree position keeps serial and parallel expansion identical.
    return np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, len(position), *position])


def sample_short_diverse_paths(
    g: Graph,
    src: int,
    dst: int,
    params: SamplerParams,
    masked: frozenset[EdgeKey] | set[EdgeKey] = frozenset(),
) -> PathTree:
    """Build the rooted tree of short diverse paths from ``src`` to ``dst``.

    Returns a tree with ``root=None`` when ``dst`` is unreachable under ``masked``.
    """
    masked = frozenset(masked)
    first = shortest_path(g, src, dst, masked)
    if first is None:
        return PathTree(None, params)
    root = PathTreeNode(first[0], 0, frozenset())
    obstacle_cache: dict[int, frozenset[EdgeKey]] = {}

    def expand(node: PathTreeNode, position: tuple[int, ...]) -> None:
        if node.depth >= params.r:
            return
        interior = node.path[1:-1]
        if not interior:
            return
        k = min(params.n, len(interior))
        rng = _child_rng(params.rng_seed, position)
        centers = rng.choice(len(interior), size=k, replace=False)
        for idx, ci in enumerate(centers):
            center = interior[int(ci)]
            obstacle = obstacle_cache.get(center)
            if obstacle is None:
                obstacle = obstacle_cache[center] = virtual_obstacle(g, center, params.m)
            removed = node.removed_edges | obstacle
            found = shortest_path(g, src, dst, masked | removed)
            if found is None:
                continue
            child = PathTreeNode(found[0], node.depth + 1, removed)
            node.children.append(child)
            expand(child, position + (idx,))

    expand(root, ())
    return PathTree(root, params)


def flatten(tree: PathTree) -> list[tuple[Path, int]]:
    """Pre-order ``(path, depth)`` listing; duplicate paths are kept."""
    if tree.root is None:
        return []
    out = []
    stack = [tree.root]
    while stack:
        node = stack.pop()
        out.append((node.path, node.depth))
        stack.extend(reversed(node.children))
    return out


def tree_to_dict(node: PathTreeNode) -> dict:
    return {
        "depth": node.depth,
        "path": list(node.path),
        "removed": [f"{a}-{b}" for a, b in sorted(node.removed_edges)],
        "children": [tree_to_dict(c) for c in node.children],
    }


def dump_tree(tree: PathTree) -> str:
    """Debug dump as JSON; ``null`` for an empty tree."""
    return json.dumps(None if tree.root is None else tree_to_dict(tree.root), indent=1)


def format_tree(tree: PathTree) -> str:
    """Indented text listing, one line per tree node."""
    lines = []
    for path, depth in flatten(tree):
        lines.append("  " * depth + f"[{depth}] " + " ".join(map(str, path)))
    return "\n".join(lines)
