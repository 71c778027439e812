"""Monte Carlo estimate of how often a random tournament fails quadrangularity."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.stats import binomtest

STREAM_TRIALS = 1000


@dataclass(frozen=True)
class SampleEstimate:
    n: int
    trials: int
    non_quadrangular: int
    fraction: float
    wilson_ci: tuple[float, float]
    bound: float
    seed: int

    def row(self) -> dict:
        return {
            "n": self.n,
            "trials": self.trials,
            "non_quadrangular": self.non_quadrangular,
            "fraction": self.fraction,
            "ci_low": self.wilson_ci[0],
            "ci_high": self.wilson_ci[1],
            "bound": self.bound,
            "seed": self.seed,
        }


def nonquad_bound(n: int) -> float:
    """Union bound over the out and in events: 2 * n(n-1)(n-2)/8 * (3/4)**(n-3)."""
    return 2 * n * (n - 1) * (n - 2) / 8 * 0.75 ** (n - 3)


def bound_curve(n_min: int, n_max: int) -> list[tuple[int, float]]:
    if not 4 <= n_min <= n_max:
        raise ValueError("need 4 <= n_min <= n_max")
    return [(n, nonquad_bound(n)) for n in range(n_min, n_max + 1)]


def random_adjacency(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` uniform labelled tournaments as 0/1 float32 matrices."""
    iu = np.triu_indices(n, 1)
    bits = rng.integers(0, 2, size=(count, iu[0].size), dtype=np.int8).astype(np.float32)
    a = np.zeros((count, n, n), np.float32)
    a[:, iu[0], iu[1]] = bits
    a[:, iu[1], iu[0]] = 1.0 - bits
    return a


def nonquadrangular_mask(a: np.ndarray) -> np.ndarray:
    """Per-matrix flag: some distinct pair shares exactly one out- or in-neighbour."""
    out_common = a @ a.transpose(0, 2, 1)
    in_common = a.transpose(0, 2, 1) @ a
    n = a.shape[1]
    off = ~np.eye(n, dtype=bool)
    bad_out = ((out_common == 1) & off).any(axis=(1, 2))
    bad_in = ((in_common == 1) & off).any(axis=(1, 2))
    return bad_out | bad_in


def _stream_count(n: int, trials: int, seed: int, stream: int) -> int:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))
    return int(nonquadrangular_mask(random_adjacency(n, trials, rng)).sum())


def estimate_nonquad(n: int, trials: int, seed: int, threads: int = 1) -> SampleEstimate:
    """Sample ``trials`` tournaments in fixed-size seeded streams.

    Stream ``i`` covers trials ``[i * STREAM_TRIALS, (i + 1) * STREAM_TRIALS)``
    so the result does not depend on ``threads``.
    """
    if n < 4 or trials < 1:
        raise ValueError("need n >= 4 and trials >= 1")
    sizes = [min(STREAM_TRIALS, trials - s) for s in range(0, trials, STREAM_TRIALS)]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        counts = list(pool.map(lambda i: _stream_count(n, sizes[i], seed, i), range(len(sizes))))
    bad = sum(counts)
    ci = binomtest(bad, trials).proportion_ci(confidence_level=0.95, method="wilson")
    return SampleEstimate(n, trials, bad, bad / trials, (float(ci.low), float(ci.high)),
                          nonquad_bound(n), seed)


def bound_ratio(n: int) -> float:
    """Closed form of bound(n + 1) / bound(n)."""
    return (n + 1) / (n - 2) * 0.75


def expected_violating_pairs(n: int) -> float:
    """Exact expected number of (pair, side) violations; equals the union bound."""
    return 2 * math.comb(n, 2) * (n - 2) * 0.25 * 0.75 ** (n - 3)
