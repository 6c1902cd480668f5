"""Edge utilities, observation reward and reward-maximizing path selection."""

from __future__ import annotations

import csv
import io
from typing import Iterable, Sequence

from .graph import EdgeKey, Graph, VisibilityMap, path_cost
from .sampler import PathTree, flatten


class NoCandidateError(RuntimeError):
    """No candidate path exists between the agent and its target."""


UtilityMap = dict[EdgeKey, float]


def compute_edge_utility(tree: PathTree) -> UtilityMap:
    """Depth-discounted edge frequencies over every path stored in ``tree``.

    A path at depth ``i`` adds ``1 / (n**i * (r + 1))`` to each of its edges.
    Edges absent from the map have utility 0.
    """
    n, r = tree.params.n, tree.params.r
    u: UtilityMap = {}
    for path, depth in flatten(tree):
        w = 1.0 / (n**depth * (r + 1))
        for e in {(a, b) if a < b else (b, a) for a, b in zip(path, path[1:])}:
            u[e] = u.get(e, 0.0) + w
    return u


def node_observation_reward(
    v: int, vis: VisibilityMap, u: UtilityMap, observed: set[EdgeKey] | frozenset[EdgeKey]
) -> float:
    return sum(u.get(e, 0.0) for e in vis(v) if e not in observed)


def observation_reward(
    p: Sequence[int], vis: VisibilityMap, u: UtilityMap, observed: Iterable[EdgeKey]
) -> float:
    """Utility of the edges first seen along ``p``, each counted once."""
    seen = set(observed)
    total = 0.0
    for v in p:
        for e in vis(v):
            if e not in seen:
                seen.add(e)
                total += u.get(e, 0.0)
    return total


def path_reward(
    p: Sequence[int],
    lam: float,
    g: Graph,
    vis: VisibilityMap,
    u: UtilityMap,
    observed: Iterable[EdgeKey],
) -> float:
    """``lam * R_obs(p) - cost(p)``; the caller's observed set is left untouched."""
    cost = path_cost(g, p)
    if lam == 0:
        return -cost
    return lam * observation_reward(p, vis, u, observed) - cost


def select_best_path(
    candidates: Sequence[Sequence[int]],
    lam: float,
    g: Graph,
    vis: VisibilityMap,
    u: UtilityMap,
    observed: Iterable[EdgeKey],
) -> tuple[int, ...]:
    """Highest-reward candidate; ties go to the cheaper, then the earlier one."""
    if not candidates:
        raise NoCandidateError("empty candidate set")
    observed = frozenset(observed)
    best = None
    best_key = None
    for idx, p in enumerate(candidates):
        key = (path_reward(p, lam, g, vis, u, observed), -path_cost(g, p), -idx)
        if best_key is None or key > best_key:
            best, best_key = p, key
    return tuple(best)


def utility_csv(u: UtilityMap) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["edge", "utility"])
    for (a, b), val in sorted(u.items()):
        w.writerow([f"{a}-{b}", repr(val)])
    return buf.getvalue()
