"""Fit the leading constants of the ``empirical`` profile.

Each routine scans an ascending grid of candidate constants, sizes the
operator with the corresponding bound and measures the success rate over
seeded trials; the first candidate whose rate reaches ``target`` wins.
"""

from __future__ import annotations

import math

from . import bounds, rng
from .datasets import Geometry, SampleSpec, sample
from .operators import Dist, make_sob, make_subgaussian
from .verify import jl_verdict, ric_bruteforce


def finite_subgaussian_rate(constant: float, cardinality: int = 100, epsilon: float = 0.3, p: float = 0.1,
                            N: int = 1024, trials: int = 100, seed: int = 0,
                            dist: Dist = Dist.GAUSSIAN) -> tuple[int, float]:
    """Row count and JL success rate of dense maps sized with ``c_double_prime = constant``."""
    reg = bounds.UNIT.replace(c_double_prime=constant)
    m = bounds.m_finite_subgaussian(cardinality, epsilon, p, reg).m
    hits = 0
    for i in range(trials):
        trial_seed = rng.child_seed(seed, i)
        points = sample(SampleSpec(Geometry.GAUSSIAN_CLOUD, N, cardinality, trial_seed))
        op = make_subgaussian(m, N, dist, rng.child_seed(trial_seed, 1))
        hits += jl_verdict(op, points, epsilon)
    return m, hits / trials


def sob_rip_rate(constant: float, s: int = 2, epsilon: float = 0.5, p: float = 0.1, N: int = 64,
                 trials: int = 100, seed: int = 0) -> tuple[int, float]:
    """Row count and RIP success rate of unsigned DCT-II row samples sized with ``a0_prime = constant``."""
    reg = bounds.UNIT.replace(a0_prime=constant)
    m = bounds.m_sob_rip(s, epsilon, p, N, constants=reg).m
    hits = sum(ric_bruteforce(make_sob(N, m, "dct2", rng.child_seed(seed, i)), s).ric <= epsilon
               for i in range(trials))
    return m, hits / trials


def fit(rate_fn, grid, target: float = 0.95, **kwargs) -> tuple[float, int, float]:
    """Smallest constant in ``grid`` reaching ``target``; returns ``(constant, m, rate)``."""
    last = (math.nan, 0, 0.0)
    for c in grid:
        m, rate = rate_fn(c, **kwargs)
        last = (c, m, rate)
        if rate >= target:
            return last
    return last


if __name__ == "__main__":
    grid = [0.5 * k for k in range(1, 21)]
    print("c_double_prime", fit(finite_subgaussian_rate, grid))
    print("a0_prime", fit(sob_rip_rate, [0.05 * k for k in range(1, 21)]))
