"""Bootstrap comparisons between two agents evaluated on the same seeds."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class BootstrapResult:
    estimate: float
    low: float
    high: float
    confidence: float

    @property
    def below_zero(self) -> bool:
        """The whole one-sided interval lies below zero."""
        return self.high < 0


def paired_bootstrap(
    a: np.ndarray,
    b: np.ndarray,
    stat: str = "mean",
    n_boot: int = 5_000,
    confidence: float = 0.95,
    seed: int = 0,
) -> BootstrapResult:
    """One-sided bootstrap bound on ``stat(a) - stat(b)`` resampling pairs jointly.

    ``high`` is the ``confidence`` quantile of the bootstrap distribution, so
    ``high < 0`` means ``stat(a) < stat(b)`` at that confidence.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or a.size == 0:
        raise ValueError("need two equal-length non-empty 1-D samples")
    fn = {"mean": np.mean, "std": np.std}[stat]
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, a.size, size=(n_boot, a.size))
    diffs = fn(a[idx], axis=1) - fn(b[idx], axis=1)
    return BootstrapResult(
        estimate=float(fn(a) - fn(b)),
        low=float(np.quantile(diffs, 1 - confidence)),
        high=float(np.quantile(diffs, confidence)),
        confidence=confidence,
    )
