"""Online agents navigating a graph whose blockages are revealed by observation."""

from __future__ import annotations

import enum
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial
from typing import Sequence

import numpy as np

from .graph import (
    BlockageRealization,
    EdgeKey,
    Graph,
    Path,
    VisibilityMap,
    edge_key,
    shortest_path,
)
from .reward import UtilityMap, compute_edge_utility, select_best_path
from .sampler import SamplerParams, flatten, sample_short_diverse_paths


class AgentKind(str, enum.Enum):
    REWARD_MAX = "reward"
    SHORTEST_PATH = "sp"


class AgentInvariantError(RuntimeError):
    """The agent tried to traverse an edge that is actually blocked."""


@dataclass(frozen=True)
class AgentConfig:
    lam: float = 3.0
    sampler: SamplerParams = SamplerParams()
    kind: AgentKind = AgentKind.REWARD_MAX

    def __post_init__(self):
        if not (self.lam >= 0 and math.isfinite(self.lam)):
            raise ValueError("lambda must be a finite non-negative number")
        object.__setattr__(self, "kind", AgentKind(self.kind))

    @property
    def label(self) -> str:
        if self.kind is AgentKind.SHORTEST_PATH:
            return "SP"
        return f"lambda={self.lam:g}"


@dataclass
class Step:
    node: int
    newly_observed: int
    newly_blocked: list[EdgeKey]
    replanned: bool


@dataclass
class TrialResult:
    success: bool
    total_cost: float
    replans: int
    trajectory: list[int]
    steps: list[Step] = field(default_factory=list)
    initial_plan: list[int] = field(default_factory=list)
    plan_times_ms: list[float] = field(default_factory=list)
    failure: str = ""

    @property
    def mean_plan_time_ms(self) -> float:
        return float(np.mean(self.plan_times_ms)) if self.plan_times_ms else 0.0


def derive_seed(*parts: int) -> int:
    """64-bit seed that depends only on ``parts``."""
    return int(np.random.SeedSequence([int(p) & 0xFFFFFFFFFFFFFFFF for p in parts]).generate_state(1, np.uint64)[0])


def run_trial(
    g: Graph,
    vis: VisibilityMap,
    realization: BlockageRealization,
    src: int,
    dst: int,
    cfg: AgentConfig,
) -> TrialResult:
    """Simulate one agent until it reaches ``dst`` or no path remains."""
    g._check_node(src)
    g._check_node(dst)
    known_blocked: set[EdgeKey] = set()
    observed: set[EdgeKey] = set()
    plan_times: list[float] = []
    utility: UtilityMap = {}
    plan_count = 0

    def plan_from(v: int) -> Path | None:
        nonlocal plan_count
        t0 = time.perf_counter()
        if cfg.kind is AgentKind.SHORTEST_PATH:
            found = shortest_path(g, v, dst, known_blocked)
            plan = None if found is None else found[0]
        else:
            params = replace(cfg.sampler, rng_seed=derive_seed(cfg.sampler.rng_seed, plan_count + 1))
            tree = sample_short_diverse_paths(g, v, dst, params, known_blocked)
            candidates = [p for p, _ in flatten(tree)]
            plan = select_best_path(candidates, cfg.lam, g, vis, utility, observed) if candidates else None
        plan_times.append((time.perf_counter() - t0) * 1e3)
        plan_count += 1
        return plan

    if cfg.kind is AgentKind.REWARD_MAX:
        params0 = replace(cfg.sampler, rng_seed=derive_seed(cfg.sampler.rng_seed, 0))
        utility = compute_edge_utility(sample_short_diverse_paths(g, src, dst, params0))

    current = src
    trajectory = [src]
    steps: list[Step] = []
    total = 0.0
    replans = 0
    plan = plan_from(src)
    if plan is None:
        return TrialResult(False, total, replans, trajectory, steps, [], plan_times, "no path from source")
    initial_plan = list(plan)
    pos = 0

    while current != dst:
        seen = vis(current)
        new = seen - observed
        observed |= seen
        newly_blocked = sorted(e for e in new if e in realization.blocked)
        known_blocked.update(newly_blocked)
        replanned = False
        if newly_blocked:
            nb = set(newly_blocked)
            if any(edge_key(plan[i], plan[i + 1]) in nb for i in range(pos, len(plan) - 1)):
                replans += 1
                replanned = True
                plan = plan_from(current)
                pos = 0
                if plan is None:
                    steps.append(Step(current, len(new), newly_blocked, replanned))
                    return TrialResult(
                        False, total, replans, trajectory, steps, initial_plan, plan_times,
                        f"target unreachable from node {current}",
                    )
        steps.append(Step(current, len(new), newly_blocked, replanned))
        nxt = plan[pos + 1]
        if edge_key(current, nxt) in realization.blocked:
            raise AgentInvariantError(f"traversal of blocked edge {current}-{nxt}")
        total += g.cost(current, nxt)
        current = nxt
        pos += 1
        trajectory.append(current)

    return TrialResult(True, total, replans, trajectory, steps, initial_plan, plan_times)


# --- batches ----------------------------------------------------------------


@dataclass(frozen=True)
class BlockageModel:
    """Independent Bernoulli blocking of edge groups.

    Each group is blocked as a unit with probability ``p``: singleton groups
    give per-edge blocking, larger groups give atomic obstacles.
    """

    groups: tuple[frozenset[EdgeKey], ...]
    p: float

    @classmethod
    def per_edge(cls, edges: Sequence[EdgeKey], p: float) -> "BlockageModel":
        return cls(tuple(frozenset([tuple(e)]) for e in sorted(map(tuple, edges))), p)

    @classmethod
    def per_group(cls, groups: Sequence[Sequence[EdgeKey]], p: float) -> "BlockageModel":
        return cls(tuple(frozenset(map(tuple, grp)) for grp in groups), p)

    def draw(self, g: Graph, seed: int) -> BlockageRealization:
        # One uniform per group: realizations for different p are nested.
        u = np.random.default_rng(seed).random(len(self.groups))
        blocked = set()
        for grp, x in zip(self.groups, u):
            if x < self.p:
                blocked |= grp
        return BlockageRealization(g, blocked)


@dataclass
class BatchSummary:
    label: str
    p: float
    mean: float
    std: float
    n_runs: int
    failures: int
    mean_plan_ms: float
    trials: list[TrialResult] = field(default_factory=list, repr=False)
    seeds: list[int] = field(default_factory=list, repr=False)


def realization_seed(master_seed: int, trial_index: int) -> int:
    return derive_seed(master_seed, trial_index, 1)


def trial_sampler_seed(master_seed: int, trial_index: int) -> int:
    return derive_seed(master_seed, trial_index, 2)


def _one(trial_index, g, vis, src, dst, cfg, model, master_seed):
    real = model.draw(g, realization_seed(master_seed, trial_index))
    trial_cfg = replace(cfg, sampler=replace(cfg.sampler, rng_seed=trial_sampler_seed(master_seed, trial_index)))
    return run_trial(g, vis, real, src, dst, trial_cfg)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("CTPVIS_WORKERS", "1")))
    except ValueError:
        return 1


def run_trials(
    g: Graph,
    vis: VisibilityMap,
    src: int,
    dst: int,
    cfg: AgentConfig,
    model: BlockageModel,
    trial_indices: Sequence[int],
    master_seed: int = 0,
    workers: int | None = None,
) -> list[TrialResult]:
    """Run one trial per index; output order follows ``trial_indices``."""
    workers = default_workers() if workers is None else workers
    fn = partial(_one, g=g, vis=vis, src=src, dst=dst, cfg=cfg, model=model, master_seed=master_seed)
    if workers <= 1 or len(trial_indices) < 2:
        return [fn(i) for i in trial_indices]
    chunk = max(1, len(trial_indices) // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, trial_indices, chunksize=chunk))


def summarize(label: str, p: float, trials: Sequence[TrialResult], seeds: Sequence[int] = ()) -> BatchSummary:
    """Mean and population std over successful trials; failures counted apart."""
    costs = np.array([t.total_cost for t in trials if t.success], dtype=float)
    times = [x for t in trials for x in t.plan_times_ms]
    return BatchSummary(
        label=label,
        p=p,
        mean=float(costs.mean()) if costs.size else math.nan,
        std=float(costs.std()) if costs.size else math.nan,
        n_runs=len(trials),
        failures=sum(not t.success for t in trials),
        mean_plan_ms=float(np.mean(times)) if times else 0.0,
        trials=list(trials),
        seeds=list(seeds),
    )


def run_batch(
    g: Graph,
    vis: VisibilityMap,
    src: int,
    dst: int,
    cfg: AgentConfig,
    model: BlockageModel,
    seeds: Sequence[int] | range,
    master_seed: int = 0,
    workers: int | None = None,
) -> BatchSummary:
    seeds = list(seeds)
    trials = run_trials(g, vis, src, dst, cfg, model, seeds, master_seed, workers)
    return summarize(cfg.label, model.p, trials, seeds)
