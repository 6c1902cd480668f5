"""Experiment configs, Monte Carlo cells and result files."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Sequence

from .agent import (
    AgentConfig,
    AgentKind,
    BatchSummary,
    BlockageModel,
    realization_seed,
    run_trials,
    summarize,
)
from .bundle import MapBundle, from_plateau, from_terrain, read_bundle
from .environments.plateau import build_plateau_map
from .environments.procedural import generate_procedural_plateau, preset
from .environments.terrain import build_terrain_world, load_heightmap
from .sampler import SamplerParams

MAP_SOURCES = ("builtin", "procedural", "heightmap", "bundle")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    map_source: str = "builtin"
    preset: str = "standard"
    grid: int | None = None
    map_seed: int = 0
    heightmap: str | None = None
    ovals: list | None = None
    los_mode: str = "sightline"
    bundle: str | None = None
    lambdas: list[float] = field(default_factory=lambda: [0.0, 3.0])
    include_sp: bool = True
    ps: list[float] | None = None
    n_seeds: int = 100
    master_seed: int = 0
    n: int = 4
    r: int = 4
    m: int = 1
    output: str = "results"

    def validate(self) -> None:
        if self.map_source not in MAP_SOURCES:
            raise ConfigError(f"map_source must be one of {MAP_SOURCES}")
        if self.map_source == "heightmap" and not self.heightmap:
            raise ConfigError("map_source 'heightmap' needs 'heightmap' (file path)")
        if self.map_source == "bundle" and not self.bundle:
            raise ConfigError("map_source 'bundle' needs 'bundle' (directory)")
        if not self.lambdas and not self.include_sp:
            raise ConfigError("no agents: give at least one lambda or include_sp")
        if any(not (lam >= 0 and math.isfinite(lam)) for lam in self.lambdas):
            raise ConfigError("lambdas must be finite and non-negative")
        if self.ps is not None and any(not (0 <= p <= 1) for p in self.ps):
            raise ConfigError("blockage probabilities must lie in [0, 1]")
        if self.ps is not None and not self.ps:
            raise ConfigError("empty probability list")
        if self.n_seeds < 1:
            raise ConfigError("n_seeds must be >= 1")
        if self.n < 1 or self.r < 0 or self.m < 0:
            raise ConfigError("sampler needs n >= 1, r >= 0, m >= 0")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**d)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        try:
            return cls.from_dict(json.loads(Path(path).read_text()))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None

    def to_dict(self) -> dict:
        return asdict(self)

    def agents(self) -> list[AgentConfig]:
        sampler = SamplerParams(self.n, self.r, self.m, 0)
        out = []
        if self.include_sp:
            out.append(AgentConfig(0.0, sampler, AgentKind.SHORTEST_PATH))
        out += [AgentConfig(float(lam), sampler, AgentKind.REWARD_MAX) for lam in self.lambdas]
        return out


def load_map(cfg: ExperimentConfig) -> MapBundle:
    if cfg.map_source == "builtin":
        return from_plateau(build_plateau_map(), kind="plateau", default_p=0.5)
    if cfg.map_source == "procedural":
        params = preset(cfg.preset, cfg.grid)
        return from_plateau(generate_procedural_plateau(params, cfg.map_seed), kind="procedural")
    if cfg.map_source == "heightmap":
        hm = load_heightmap(cfg.heightmap)
        ovals = None if cfg.ovals is None else [tuple(map(tuple, o)) for o in cfg.ovals]
        return from_terrain(build_terrain_world(hm, ovals, cfg.los_mode))
    return read_bundle(cfg.bundle)


@dataclass
class Cell:
    agent: AgentConfig
    p: float
    summary: BatchSummary
    blocked: list[list[str]]


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    bundle: MapBundle
    cells: list[Cell]

    def cell(self, label: str, p: float) -> Cell:
        for c in self.cells:
            if c.agent.label == label and c.p == p:
                return c
        raise KeyError((label, p))


def run_experiment(cfg: ExperimentConfig, bundle: MapBundle | None = None, workers: int | None = None) -> ExperimentResult:
    """Run every (agent, p) cell on the same seed range."""
    cfg.validate()
    bundle = load_map(cfg) if bundle is None else bundle
    ps = cfg.ps if cfg.ps is not None else [bundle.default_p]
    seeds = list(range(cfg.n_seeds))
    cells = []
    for p in ps:
        model = BlockageModel(tuple(bundle.groups), p)
        blocked = [
            sorted(f"{a}-{b}" for a, b in model.draw(bundle.graph, realization_seed(cfg.master_seed, s)).blocked)
            for s in seeds
        ]
        for agent in cfg.agents():
            trials = run_trials(
                bundle.graph, bundle.vis, bundle.src, bundle.dst, agent, model, seeds, cfg.master_seed, workers
            )
            cells.append(Cell(agent, p, summarize(agent.label, p, trials, seeds), blocked))
    return ExperimentResult(cfg, bundle, cells)


# --- output -----------------------------------------------------------------

TRIAL_COLUMNS = ["agent", "lambda", "p", "seed", "cost", "success", "replans", "steps"]
TIMING_COLUMNS = ["agent", "lambda", "p", "seed", "n_plans", "plan_time_ms"]
SUMMARY_COLUMNS = ["agent", "lambda", "p", "mean", "std", "n_runs", "failures", "mean_plan_ms", "all_failed"]


def _csv(rows: Sequence[Sequence], header: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _lam(agent: AgentConfig) -> str:
    return "" if agent.kind is AgentKind.SHORTEST_PATH else repr(agent.lam)


def trials_csv(res: ExperimentResult) -> str:
    """Per-trial outcomes; contains no wall-clock data, so it is reproducible byte for byte."""
    rows = []
    for c in res.cells:
        for seed, t in zip(c.summary.seeds, c.summary.trials):
            rows.append([c.agent.label, _lam(c.agent), repr(c.p), seed, repr(t.total_cost), int(t.success),
                         t.replans, len(t.trajectory) - 1])
    return _csv(rows, TRIAL_COLUMNS)


def timings_csv(res: ExperimentResult) -> str:
    rows = []
    for c in res.cells:
        for seed, t in zip(c.summary.seeds, c.summary.trials):
            rows.append([c.agent.label, _lam(c.agent), repr(c.p), seed, len(t.plan_times_ms),
                         f"{t.mean_plan_time_ms:.4f}"])
    return _csv(rows, TIMING_COLUMNS)


def summary_rows(res: ExperimentResult) -> list[list]:
    rows = []
    for c in res.cells:
        s = c.summary
        rows.append([s.label, _lam(c.agent), repr(c.p), repr(s.mean), repr(s.std), s.n_runs, s.failures,
                     f"{s.mean_plan_ms:.4f}", int(s.failures == s.n_runs)])
    return rows


def summary_text(res: ExperimentResult) -> str:
    """Aligned table; sigma is the population standard deviation over successful trials."""
    header = ["Agent", "p", "Mean mu", "Std sigma", "Runs", "Failures", "Plan ms"]
    body = []
    for c in res.cells:
        s = c.summary
        flag = "  ALL FAILED" if s.failures == s.n_runs else ""
        body.append([s.label, f"{c.p:g}", f"{s.mean:.2f}", f"{s.std:.2f}", str(s.n_runs), str(s.failures),
                     f"{s.mean_plan_ms:.1f}{flag}"])
    widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]
    lines = ["# sigma: population standard deviation (divide by N) over successful trials"]
    lines.append("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in body]
    return "\n".join(lines) + "\n"


def grid_text(res: ExperimentResult) -> str:
    """Rows of p, one ``mu / sigma`` column per agent."""
    labels = list(dict.fromkeys(c.agent.label for c in res.cells))
    ps = list(dict.fromkeys(c.p for c in res.cells))
    header = ["p"] + labels
    body = []
    for p in ps:
        row = [f"{p:g}"]
        for lab in labels:
            s = res.cell(lab, p).summary
            row.append(f"{s.mean:.2f} / {s.std:.2f}")
        body.append(row)
    widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]
    lines = ["  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in [header] + body]
    return "\n".join(lines) + "\n"


def trial_records(res: ExperimentResult):
    for c in res.cells:
        for seed, t, blocked in zip(c.summary.seeds, c.summary.trials, c.blocked):
            yield {
                "agent": c.agent.label,
                "lambda": None if c.agent.kind is AgentKind.SHORTEST_PATH else c.agent.lam,
                "p": c.p,
                "seed": seed,
                "success": t.success,
                "cost": t.total_cost,
                "replans": t.replans,
                "trajectory": t.trajectory,
                "initial_plan": t.initial_plan,
                "blocked": blocked,
                "failure": t.failure,
            }


def write_results(res: ExperimentResult, out_dir: str | Path | None = None, grid: bool = False) -> Path:
    out = Path(out_dir if out_dir is not None else res.config.output)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.json").write_text(json.dumps(res.config.to_dict(), indent=1, sort_keys=True) + "\n")
    (out / "trials.csv").write_text(trials_csv(res))
    (out / "timings.csv").write_text(timings_csv(res))
    (out / "summary.csv").write_text(_csv(summary_rows(res), SUMMARY_COLUMNS))
    (out / "summary.txt").write_text(summary_text(res))
    with open(out / "trials.jsonl", "w") as fh:
        for rec in trial_records(res):
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    if grid:
        (out / "grid.txt").write_text(grid_text(res))
    return out


def read_trials_csv(path: str | Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
