"""Directed graphs with symmetric connectivity, visibility maps and masked Dijkstra.

Nodes are dense integers ``0..N-1``. Every connection is stored in both
directions with its own traversal cost. Blockages and observations act on
undirected edge keys ``(min(u, v), max(u, v))`` so a single key covers both
directions.
"""

from __future__ import annotations

import heapq
import math
from typing import Iterable, Mapping, Sequence

EdgeKey = tuple[int, int]
Path = tuple[int, ...]


class GraphError(ValueError):
    """Raised for malformed graphs or invalid arguments."""


class InvalidPathError(GraphError):
    """Raised when a node sequence is not a path of the graph."""


def edge_key(u: int, v: int) -> EdgeKey:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable graph with symmetric connectivity and per-direction costs.

    ``edges`` yields ``(u, v, cost_uv, cost_vu)``; each pair may appear once.
    ``coords`` optionally maps every node to ``(row, col, height)``.
    """

    def __init__(
        self,
        num_nodes: int,
        edges: Iterable[tuple[int, int, float, float]],
        coords: Sequence[tuple[float, float, float]] | None = None,
    ):
        if num_nodes < 0:
            raise GraphError("node count must be non-negative")
        self.num_nodes = int(num_nodes)
        self._cost: dict[tuple[int, int], float] = {}
        for u, v, c_uv, c_vu in edges:
            u, v = int(u), int(v)
            self._check_node(u)
            self._check_node(v)
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            if (u, v) in self._cost:
                raise GraphError(f"duplicate edge {u}-{v}")
            for c in (c_uv, c_vu):
                if not (math.isfinite(c) and c > 0):
                    raise GraphError(f"edge {u}-{v} has non-positive or non-finite cost {c}")
            self._cost[(u, v)] = float(c_uv)
            self._cost[(v, u)] = float(c_vu)

        adj: list[list[tuple[int, float, EdgeKey]]] = [[] for _ in range(self.num_nodes)]
        for (u, v), c in self._cost.items():
            adj[u].append((v, c, edge_key(u, v)))
        for row in adj:
            row.sort()
        self._adj = adj
        self._keys = sorted({edge_key(u, v) for u, v in self._cost})

        if coords is not None:
            coords = [tuple(float(x) for x in c) for c in coords]
            if len(coords) != self.num_nodes:
                raise GraphError("coords must list every node")
        self.coords: list[tuple[float, ...]] | None = coords
        self._assert_symmetric()

    def _check_node(self, v: int) -> None:
        if not (0 <= v < self.num_nodes):
            raise GraphError(f"unknown node {v}")

    def _assert_symmetric(self) -> None:
        for u, v in self._cost:
            if (v, u) not in self._cost:
                raise GraphError(f"edge {u}->{v} has no reverse")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.num_nodes == other.num_nodes
            and self._cost == other._cost
            and self.coords == other.coords
        )

    def __repr__(self) -> str:
        return f"Graph(nodes={self.num_nodes}, edges={len(self._keys)})"

    @property
    def nodes(self) -> range:
        return range(self.num_nodes)

    def edge_keys(self) -> list[EdgeKey]:
        """Sorted undirected keys of all edges."""
        return list(self._keys)

    def num_edges(self) -> int:
        return len(self._keys)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._cost

    def cost(self, u: int, v: int) -> float:
        try:
            return self._cost[(u, v)]
        except KeyError:
            raise GraphError(f"no edge {u}->{v}") from None

    def neighbors(self, u: int) -> list[int]:
        self._check_node(u)
        return [v for v, _, _ in self._adj[u]]

    def adjacency(self, u: int) -> list[tuple[int, float, EdgeKey]]:
        """``(neighbor, cost, key)`` triples in ascending neighbor order."""
        return self._adj[u]

    def incident(self, v: int) -> frozenset[EdgeKey]:
        self._check_node(v)
        return frozenset(k for _, _, k in self._adj[v])

    def undirected_edges(self) -> list[tuple[int, int, float, float]]:
        return [(u, v, self._cost[(u, v)], self._cost[(v, u)]) for u, v in self._keys]

    def without_edges(self, keys: Iterable[EdgeKey]) -> "Graph":
        """A copy with the given undirected edges removed in both directions."""
        drop = {self.edge_id(*k) for k in keys}
        kept = [e for e in self.undirected_edges() if (e[0], e[1]) not in drop]
        return Graph(self.num_nodes, kept, self.coords)

    def edge_id(self, u: int, v: int) -> EdgeKey:
        return undirected_id(self, u, v)


def undirected_id(g: Graph, u: int, v: int) -> EdgeKey:
    """Canonical key of edge ``u-v``, identical for both argument orders."""
    if u == v:
        raise GraphError(f"no self-loops: {u}-{v}")
    if not g.has_edge(u, v):
        raise GraphError(f"no edge {u}-{v}")
    return edge_key(u, v)


def path_edges(p: Sequence[int]) -> list[EdgeKey]:
    return [edge_key(p[i], p[i + 1]) for i in range(len(p) - 1)]


def path_cost(g: Graph, p: Sequence[int]) -> float:
    """Sum of directed traversal costs along ``p``."""
    if len(p) == 0:
        raise InvalidPathError("empty path")
    g._check_node(p[0])
    total = 0.0
    for i in range(len(p) - 1):
        c = g._cost.get((p[i], p[i + 1]))
        if c is None:
            raise InvalidPathError(f"nodes {p[i]} and {p[i + 1]} are not adjacent")
        total += c
    return total


def shortest_path(
    g: Graph,
    src: int,
    dst: int,
    masked: frozenset[EdgeKey] | set[EdgeKey] = frozenset(),
) -> tuple[Path, float] | None:
    """Dijkstra over edges not in ``masked``; ``None`` if ``dst`` is unreachable.

    Ties are broken toward the smaller predecessor id, which makes the result a
    pure function of the inputs.
    """
    g._check_node(src)
    g._check_node(dst)
    if src == dst:
        return (src,), 0.0
    adj = g._adj
    inf = math.inf
    dist = [inf] * g.num_nodes
    pred = [-1] * g.num_nodes
    done = [False] * g.num_nodes
    dist[src] = 0.0
    heap = [(0.0, src)]
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        d, u = pop(heap)
        if done[u]:
            continue
        done[u] = True
        if u == dst:
            break
        for v, c, k in adj[u]:
            if done[v] or k in masked:
                continue
            nd = d + c
            dv = dist[v]
            if nd < dv:
                dist[v] = nd
                pred[v] = u
                push(heap, (nd, v))
            elif nd == dv and u < pred[v]:
                pred[v] = u
    if not done[dst]:
        return None
    path = [dst]
    while path[-1] != src:
        path.append(pred[path[-1]])
    path.reverse()
    return tuple(path), dist[dst]


class VisibilityMap:
    """Node -> set of visible undirected edges.

    Every node always sees its own incident edges; they are added here if the
    caller left them out.
    """

    def __init__(self, g: Graph, vis: Mapping[int, Iterable[EdgeKey]] | Sequence[Iterable[EdgeKey]]):
        items = vis.items() if isinstance(vis, Mapping) else enumerate(vis)
        sets: list[set[EdgeKey]] = [set() for _ in g.nodes]
        for v, keys in items:
            g._check_node(v)
            for a, b in keys:
                sets[v].add(undirected_id(g, a, b))
        self._vis = tuple(frozenset(s | g.incident(v)) for v, s in enumerate(sets))

    @classmethod
    def incident_only(cls, g: Graph) -> "VisibilityMap":
        return cls(g, {})

    def __call__(self, v: int) -> frozenset[EdgeKey]:
        return self._vis[v]

    def __len__(self) -> int:
        return len(self._vis)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VisibilityMap):
            return NotImplemented
        return self._vis == other._vis


class BlockageRealization:
    """Ground-truth blocked edges for one trial."""

    def __init__(self, g: Graph, blocked: Iterable[EdgeKey] = ()):
        self.blocked = frozenset(undirected_id(g, a, b) for a, b in blocked)

    def __contains__(self, key: EdgeKey) -> bool:
        return key in self.blocked

    def __len__(self) -> int:
        return len(self.blocked)


def grid_node(row: int, col: int, cols: int) -> int:
    return row * cols + col


def grid_edges(rows: int, cols: int) -> list[tuple[int, int]]:
    """4-connected grid edges as ``(u, v)`` with ``u < v``."""
    out = []
    for r in range(rows):
        for c in range(cols):
            u = r * cols + c
            if c + 1 < cols:
                out.append((u, u + 1))
            if r + 1 < rows:
                out.append((u, u + cols))
    return out


# --- text serialization -----------------------------------------------------
#
#   nodes N
#   coord v row col height      (optional, one per node, all or none)
#   edge u v cost_uv cost_vu    (u < v)
#   vis v u1-v1 u2-v2 ...       (one line per node, keys sorted)
#
# Blank lines and lines starting with '#' are ignored.


def _fmt(x: float) -> str:
    return repr(float(x))


def serialize_graph(g: Graph, vis: VisibilityMap) -> str:
    lines = [f"nodes {g.num_nodes}"]
    if g.coords is not None:
        for v, (r, c, h) in enumerate(g.coords):
            lines.append(f"coord {v} {_fmt(r)} {_fmt(c)} {_fmt(h)}")
    for u, v, c_uv, c_vu in g.undirected_edges():
        lines.append(f"edge {u} {v} {_fmt(c_uv)} {_fmt(c_vu)}")
    for v in g.nodes:
        toks = " ".join(f"{a}-{b}" for a, b in sorted(vis(v)))
        lines.append(f"vis {v} {toks}".rstrip())
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> tuple[Graph, VisibilityMap]:
    n = None
    coords: dict[int, tuple[float, float, float]] = {}
    edges = []
    vis: dict[int, list[EdgeKey]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        try:
            if tok[0] == "nodes" and len(tok) == 2:
                n = int(tok[1])
            elif n is None:
                raise GraphError("missing 'nodes N' header")
            elif tok[0] == "coord" and len(tok) == 5:
                coords[int(tok[1])] = (float(tok[2]), float(tok[3]), float(tok[4]))
            elif tok[0] == "edge" and len(tok) == 5:
                edges.append((int(tok[1]), int(tok[2]), float(tok[3]), float(tok[4])))
            elif tok[0] == "vis" and len(tok) >= 2:
                keys = []
                for t in tok[2:]:
                    a, b = t.split("-")
                    keys.append((int(a), int(b)))
                vis.setdefault(int(tok[1]), []).extend(keys)
            else:
                raise GraphError(f"unrecognised line {line!r}")
        except ValueError as exc:
            raise GraphError(f"line {lineno}: {exc}") from exc
    if n is None:
        raise GraphError("missing 'nodes N' header")
    coord_list = None
    if coords:
        if sorted(coords) != list(range(n)):
            raise GraphError("coord lines must cover every node")
        coord_list = [coords[v] for v in range(n)]
    g = Graph(n, edges, coord_list)
    return g, VisibilityMap(g, vis)
