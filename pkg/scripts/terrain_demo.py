"""Heightmap terrain with three oval obstacles: SP vs lambda=3 over a p sweep.

Planning on the 64x64 grid takes around a second per plan, so the default
seed count is small.

    python scripts/terrain_demo.py --seeds 20 --out results/terrain
"""

import argparse
import json
from pathlib import Path

from ctpvis.bundle import from_terrain, write_bundle
from ctpvis.environments.terrain import build_terrain_world, load_heightmap
from ctpvis.harness import ExperimentConfig, grid_text, run_experiment, trial_records, write_results
from ctpvis.render import render_trial_svg

DATA = Path(__file__).resolve().parent.parent / "data" / "terrain_sample_64.txt"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--heightmap", default=str(DATA))
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--ps", default="0,0.25,0.5")
    ap.add_argument("--los-mode", default="sightline", choices=["sightline", "threshold"])
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--out", default="results/terrain")
    args = ap.parse_args()

    hm = load_heightmap(args.heightmap)
    tm = build_terrain_world(hm, los_mode=args.los_mode)
    bundle = from_terrain(tm)
    write_bundle(bundle, Path(args.out) / "bundle", hm.h)
    cfg = ExperimentConfig(
        map_source="heightmap", heightmap=args.heightmap, los_mode=args.los_mode,
        lambdas=[3.0], ps=[float(x) for x in args.ps.split(",")], n_seeds=args.seeds, output=args.out,
    )
    res = run_experiment(cfg, bundle=bundle, workers=args.workers)
    write_results(res, grid=True)
    print(grid_text(res), end="")

    # one picture per agent at the highest p, first seed with a replan if any
    top = max(cfg.ps)
    recs = [r for r in trial_records(res) if r["p"] == top]
    for label in ("SP", "lambda=3"):
        mine = [r for r in recs if r["agent"] == label]
        pick = next((r for r in mine if r["replans"]), mine[0])
        path = Path(args.out) / f"{label.replace('=', '')}_p{top:g}_seed{pick['seed']}.svg"
        path.write_text(render_trial_svg(bundle, json.loads(json.dumps(pick))))
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
