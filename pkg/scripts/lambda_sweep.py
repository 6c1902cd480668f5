"""lambda x p sweep on the fixed plateau map (SP plus lambda in {0, 3, 10}).

    python scripts/lambda_sweep.py --seeds 1000 --out results/sweep
"""

import argparse

from ctpvis.harness import ExperimentConfig, grid_text, run_experiment, write_results


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=1000)
    ap.add_argument("--lambdas", default="0,3,10")
    ap.add_argument("--ps", default="0,0.1,0.2,0.3,0.4,0.5")
    ap.add_argument("--map", default="builtin", choices=["builtin", "procedural"])
    ap.add_argument("--preset", default="standard")
    ap.add_argument("--map-seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--out", default="results/sweep")
    args = ap.parse_args()

    cfg = ExperimentConfig(
        map_source=args.map,
        preset=args.preset,
        map_seed=args.map_seed,
        lambdas=[float(x) for x in args.lambdas.split(",")],
        ps=[float(x) for x in args.ps.split(",")],
        n_seeds=args.seeds,
        output=args.out,
    )
    res = run_experiment(cfg, workers=args.workers)
    write_results(res, grid=True)
    print("mean / std (population) over successful trials")
    print(grid_text(res), end="")


if __name__ == "__main__":
    main()
