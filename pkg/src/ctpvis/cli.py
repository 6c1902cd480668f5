"""Command-line front end: ``generate``, ``run``, ``sweep``, ``render``.

Exit codes: 0 success, 1 usage error, 2 map generation failure,
3 experiment failure (including any cell where every trial failed).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .agent import default_workers
from .bundle import BundleError, from_plateau, from_terrain, read_bundle, write_bundle
from .environments.plateau import build_plateau_map
from .environments.procedural import GeneratorError, generate_procedural_plateau, preset
from .environments.terrain import HeightmapError, build_terrain_world, load_heightmap
from .harness import ConfigError, ExperimentConfig, run_experiment, summary_text, grid_text, write_results
from .render import render_trial_svg
from .reward import compute_edge_utility
from .sampler import SamplerParams, sample_short_diverse_paths

EXIT_USAGE, EXIT_GENERATION, EXIT_EXPERIMENT = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None
    return vals


def _oval(text: str):
    vals = _floats(text)
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("oval is row,col,semi_row,semi_col")
    return [[vals[0], vals[1]], [vals[2], vals[3]]]


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ctpvis", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a map bundle")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", action="store_true", help="the fixed plateau map")
    src.add_argument("--preset", help="procedural preset: standard, dense, lowblock, six")
    src.add_argument("--heightmap", help="heightmap text file")
    g.add_argument("--grid", type=int, help="procedural grid size (12, 14 or 16)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--oval", type=_oval, action="append", help="row,col,semi_row,semi_col (repeatable)")
    g.add_argument("--los-mode", default="sightline", choices=["sightline", "threshold"])
    g.add_argument("--out", required=True)

    for name, helptext in (("run", "Monte Carlo batch per (agent, p) cell"), ("sweep", "lambda x p grid")):
        r = sub.add_parser(name, help=helptext)
        r.add_argument("--config", help="JSON experiment config; flags override it")
        r.add_argument("--map", dest="map_source", choices=["builtin", "procedural", "heightmap", "bundle"])
        r.add_argument("--bundle")
        r.add_argument("--preset")
        r.add_argument("--grid", type=int)
        r.add_argument("--map-seed", type=int)
        r.add_argument("--heightmap")
        r.add_argument("--lambdas", type=_floats, help="comma-separated, e.g. 0,3,10")
        r.add_argument("--no-sp", action="store_true", help="omit the shortest-path baseline")
        r.add_argument("--ps", type=_floats, help="comma-separated blockage probabilities")
        r.add_argument("--seeds", dest="n_seeds", type=int)
        r.add_argument("--master-seed", type=int)
        r.add_argument("--n", type=int)
        r.add_argument("--r", type=int)
        r.add_argument("--m", type=int)
        r.add_argument("--out", dest="output")
        r.add_argument("--workers", type=int, help="worker processes (default: $CTPVIS_WORKERS or 1)")

    rd = sub.add_parser("render", help="SVG per trial")
    rd.add_argument("--bundle", required=True)
    rd.add_argument("--trials", required=True, help="trials.jsonl from run/sweep")
    rd.add_argument("--out", required=True)
    rd.add_argument("--agent", help="only this agent label, e.g. SP or lambda=3")
    rd.add_argument("--seed", type=int, action="append", help="only these seeds (repeatable)")
    rd.add_argument("--limit", type=int, default=20)
    rd.add_argument("--utility", action="store_true", help="overlay edge utilities")
    return ap


def cmd_generate(args) -> int:
    try:
        if args.builtin:
            bundle, heights = from_plateau(build_plateau_map(), kind="plateau", default_p=0.5), None
        elif args.preset:
            params = preset(args.preset, args.grid)
            bundle, heights = from_plateau(generate_procedural_plateau(params, args.seed), kind="procedural"), None
        else:
            hm = load_heightmap(args.heightmap)
            tm = build_terrain_world(hm, args.oval, args.los_mode)
            bundle, heights = from_terrain(tm), hm.h
    except (GeneratorError, HeightmapError, OSError) as exc:
        print(f"generate: {exc}", file=sys.stderr)
        return EXIT_GENERATION
    out = write_bundle(bundle, args.out, heights)
    print(
        f"{out}: kind={bundle.kind} nodes={bundle.graph.num_nodes} edges={bundle.graph.num_edges()} "
        f"{'ovals' if bundle.kind == 'terrain' else 'chokepoints'}={len(bundle.groups)} "
        f"blockable_edges={len(bundle.blockable)} "
        f"src={bundle.src} dst={bundle.dst}"
    )
    return 0


def _config(args, sweep: bool) -> ExperimentConfig:
    base = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    over = {}
    for key in ("map_source", "bundle", "preset", "grid", "map_seed", "heightmap", "lambdas", "ps",
                "n_seeds", "master_seed", "n", "r", "m", "output"):
        val = getattr(args, key)
        if val is not None:
            over[key] = val
    if args.no_sp:
        over["include_sp"] = False
    if "bundle" in over and "map_source" not in over:
        over["map_source"] = "bundle"
    cfg = replace(base, **over)
    if sweep and (not cfg.lambdas or not cfg.ps):
        raise UsageError("sweep needs non-empty --lambdas and --ps")
    if args.lambdas is not None and not args.lambdas:
        raise UsageError("empty lambda list")
    cfg.validate()
    return cfg


def cmd_run(args, sweep: bool = False) -> int:
    try:
        cfg = _config(args, sweep)
    except (UsageError, ConfigError) as exc:
        print(f"{args.cmd}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    workers = args.workers if args.workers is not None else default_workers()
    try:
        res = run_experiment(cfg, workers=workers)
    except (GeneratorError, HeightmapError, BundleError, OSError) as exc:
        print(f"{args.cmd}: {exc}", file=sys.stderr)
        return EXIT_EXPERIMENT
    out = write_results(res, grid=sweep)
    print(summary_text(res), end="")
    if sweep:
        print(grid_text(res), end="")
    print(f"results written to {out}")
    dead = [c for c in res.cells if c.summary.failures == c.summary.n_runs]
    if dead:
        for c in dead:
            print(f"{args.cmd}: every trial failed for {c.agent.label} at p={c.p:g}", file=sys.stderr)
        return EXIT_EXPERIMENT
    return 0


def cmd_render(args) -> int:
    try:
        bundle = read_bundle(args.bundle)
        with open(args.trials) as fh:
            records = [json.loads(line) for line in fh if line.strip()]
    except (BundleError, OSError, json.JSONDecodeError) as exc:
        print(f"render: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.agent:
        records = [r for r in records if r["agent"] == args.agent]
    if args.seed:
        records = [r for r in records if r["seed"] in set(args.seed)]
    records = records[: args.limit]
    utility = None
    if args.utility:
        tree = sample_short_diverse_paths(bundle.graph, bundle.src, bundle.dst, SamplerParams())
        utility = compute_edge_utility(tree)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for rec in records:
        try:
            svg = render_trial_svg(bundle, rec, utility)
        except BundleError as exc:
            print(f"render: trial does not match bundle: {exc}", file=sys.stderr)
            return EXIT_USAGE
        name = f"{rec['agent'].replace('=', '')}_p{rec['p']:g}_seed{rec['seed']}.svg"
        (out / name).write_text(svg)
    print(f"wrote {len(records)} SVG file(s) to {out}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.cmd == "generate":
        return cmd_generate(args)
    if args.cmd == "run":
        return cmd_run(args)
    if args.cmd == "sweep":
        return cmd_run(args, sweep=True)
    return cmd_render(args)


if __name__ == "__main__":
    sys.exit(main())
