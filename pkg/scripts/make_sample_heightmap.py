"""Write a synthetic 64x64 terrain heightmap (raw elevations in metres).

Stand-in for an exported DEM tile: a ridge running corner to corner, a few
hills and a valley, plus seeded fine-scale roughness. Any grid exported as
``rows cols`` followed by row-major heights loads the same way.
"""

import argparse
from pathlib import Path

import numpy as np

from ctpvis.environments.terrain import format_heightmap


def synth(size: int = 64, seed: int = 7) -> np.ndarray:
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:size, 0:size] / (size - 1)
    h = 1400.0 + 120.0 * np.exp(-((x - y) ** 2) / 0.02)  # diagonal ridge
    for _ in range(6):
        cy, cx = rng.uniform(0.1, 0.9, 2)
        amp, width = rng.uniform(60, 180), rng.uniform(0.004, 0.02)
        h += amp * np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / width)
    h -= 90.0 * np.exp(-((x - 0.7) ** 2 + (y - 0.3) ** 2) / 0.03)  # valley
    h += rng.normal(0.0, 4.0, h.shape)
    return np.round(h, 1)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=64)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data" / "terrain_sample_64.txt"))
    args = ap.parse_args()
    Path(args.out).write_text(format_heightmap(synth(args.size, args.seed)))
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
