"""Fixed plateau map at p=0.5: SP vs lambda=0 vs lambda=3, with paired bootstrap.

    python scripts/plateau_table.py --seeds 1000 --out results/plateau
"""

import argparse

import numpy as np

from ctpvis.harness import ExperimentConfig, run_experiment, summary_text, write_results
from ctpvis.stats import paired_bootstrap


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=1000)
    ap.add_argument("--p", type=float, default=0.5)
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--out", default="results/plateau")
    args = ap.parse_args()

    cfg = ExperimentConfig(map_source="builtin", lambdas=[0.0, 3.0], ps=[args.p], n_seeds=args.seeds, output=args.out)
    res = run_experiment(cfg, workers=args.workers)
    write_results(res)
    print(summary_text(res), end="")

    base = res.cell("lambda=0", args.p).summary.trials
    ours = res.cell("lambda=3", args.p).summary.trials
    ok = [i for i, (a, b) in enumerate(zip(ours, base)) if a.success and b.success]
    a = np.array([ours[i].total_cost for i in ok])
    b = np.array([base[i].total_cost for i in ok])
    for stat in ("mean", "std"):
        bs = paired_bootstrap(a, b, stat)
        print(f"{stat}(lambda=3) - {stat}(lambda=0) = {bs.estimate:+.3f}, 95% upper bound {bs.high:+.3f}")


if __name__ == "__main__":
    main()
