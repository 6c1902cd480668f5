"""Procedural plateau maps: several maps per grid size, SP vs lambda=3 on each.

    python scripts/procedural_suite.py --maps-per-grid 15 --seeds 128 --preset standard
"""

import argparse

import numpy as np

from ctpvis.bundle import from_plateau
from ctpvis.environments.procedural import PRESET_GRIDS, generate_procedural_plateau, preset
from ctpvis.harness import ExperimentConfig, run_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--preset", default="standard")
    ap.add_argument("--maps-per-grid", type=int, default=3)
    ap.add_argument("--seeds", type=int, default=32)
    ap.add_argument("--lam", type=float, default=3.0)
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args()

    rows = []
    for grid in PRESET_GRIDS[args.preset]:
        params = preset(args.preset, grid)
        for k in range(args.maps_per_grid):
            pm = generate_procedural_plateau(params, seed=1000 * grid + k)
            cfg = ExperimentConfig(lambdas=[args.lam], ps=[params.p], n_seeds=args.seeds)
            res = run_experiment(cfg, bundle=from_plateau(pm, kind="procedural"), workers=args.workers)
            sp, ours = (c.summary for c in res.cells)
            rows.append((grid, k, len(pm.chokepoints), sp.mean, sp.std, ours.mean, ours.std))
            print(f"grid={grid} map={k} chokepoints={len(pm.chokepoints)}  "
                  f"SP {sp.mean:.2f}/{sp.std:.2f}  lambda={args.lam:g} {ours.mean:.2f}/{ours.std:.2f}")
    arr = np.array([r[3:] for r in rows])
    print(f"\naverage over {len(rows)} maps: SP {arr[:, 0].mean():.2f}/{arr[:, 1].mean():.2f}  "
          f"lambda={args.lam:g} {arr[:, 2].mean():.2f}/{arr[:, 3].mean():.2f}")


if __name__ == "__main__":
    main()
