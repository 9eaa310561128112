"""Empirical checks of embedding quality.

Two distortion metrics are reported, each evaluated over the same inputs:

* ``norm_rel_err``: ``|‖Au‖ - ‖u‖| / ‖u‖``, the relative norm error;
* ``sq_err``: ``|‖Au‖² / ‖u‖² - 1|``, the squared-norm error on unit inputs.

With ``mode="secants"`` the inputs are the pairwise differences of the
points; with ``mode="points"`` they are the points themselves.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np
from scipy.stats import binomtest

from . import rng
from .errors import EmptySet, ParameterError, TooFewPoints, TooManySupports
from .operators import LinearOperator, materialize

EXACT_PAIR_LIMIT = 2000
DEFAULT_SECANT_SAMPLE = 10**6
SUPPORT_LIMIT = 10**6
_CHUNK = 1 << 16


@dataclass(frozen=True)
class DistortionReport:
    max_norm_rel_err: float
    mean_norm_rel_err: float
    max_sq_err: float
    mean_sq_err: float
    count: int
    mode: str
    exact: bool

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class RicReport:
    s: int
    ric: float
    support: tuple[int, ...]
    supports_checked: int

    def to_dict(self) -> dict:
        return {"s": self.s, "ric": self.ric, "support": list(self.support),
                "supports_checked": self.supports_checked}


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    if not np.iscomplexobj(pts):
        pts = pts.astype(np.float64, copy=False)
    return pts


def _pair_chunks(n: int, sample: int | None, seed: int):
    """Yield ``(i, j)`` index arrays over all pairs ``i < j`` or a seeded sample of them."""
    if sample is None:
        for i in range(n - 1):
            j = np.arange(i + 1, n)
            yield np.full(j.size, i), j
        return
    gen = rng.stream(seed, rng.PAIRS)
    left = sample
    while left > 0:
        k = min(_CHUNK, left)
        i = gen.integers(0, n, size=k)
        j = gen.integers(0, n - 1, size=k)
        j = j + (j >= i)
        yield np.minimum(i, j), np.maximum(i, j)
        left -= k


def _ratios(images: np.ndarray, inputs: np.ndarray) -> np.ndarray:
    """Per-row ``‖image‖ / ‖input‖``, with zero-length inputs dropped."""
    base = np.linalg.norm(inputs, axis=1)
    keep = base > 0
    return np.linalg.norm(images[keep], axis=1) / base[keep]


def secant_norm_ratios(op: LinearOperator, points, *, max_exact: int = EXACT_PAIR_LIMIT,
                       sample_size: int = DEFAULT_SECANT_SAMPLE, seed: int = 0):
    """Yield arrays of ``‖A(x - y)‖ / ‖x - y‖`` over secants, chunk by chunk.

    Uses linearity: ``A(x - y) = Ax - Ay``, so the operator is applied once
    per point rather than once per pair.
    """
    pts = _as_points(points)
    n = pts.shape[0]
    if n < 2:
        raise TooFewPoints(f"need at least 2 points, got {n}")
    images = op.apply(pts)
    sample = None if n <= max_exact else int(sample_size)
    for i, j in _pair_chunks(n, sample, seed):
        yield _ratios(images[i] - images[j], pts[i] - pts[j])


def _summarize(chunks, mode: str, exact: bool) -> DistortionReport:
    max_rel = max_sq = 0.0
    sums_rel, sums_sq = [], []
    count = 0
    for r in chunks:
        if r.size == 0:
            continue
        rel = np.abs(r - 1.0)
        sq = np.abs(r * r - 1.0)
        max_rel = max(max_rel, float(rel.max()))
        max_sq = max(max_sq, float(sq.max()))
        sums_rel.append(math.fsum(rel))
        sums_sq.append(math.fsum(sq))
        count += r.size
    if count == 0:
        raise TooFewPoints("no nonzero inputs to evaluate")
    return DistortionReport(max_rel, math.fsum(sums_rel) / count, max_sq, math.fsum(sums_sq) / count,
                            count, mode, exact)


def distortion_from_images(images, inputs, mode: str = "points") -> DistortionReport:
    """Summarize already computed ``images[i] = A inputs[i]`` without reapplying the operator."""
    return _summarize([_ratios(np.asarray(images), _as_points(inputs))], mode, True)


def distortion(op: LinearOperator, points, *, mode: str = "secants", max_exact: int = EXACT_PAIR_LIMIT,
               sample_size: int = DEFAULT_SECANT_SAMPLE, seed: int = 0) -> DistortionReport:
    """Measure how well ``op`` preserves norms over a point set.

    Args:
        op: operator to test.
        points: ``(n, N)`` array.
        mode: ``"secants"`` for pairwise differences, ``"points"`` for the points themselves.
        max_exact: largest ``n`` for which all ``n(n-1)/2`` secants are enumerated.
        sample_size: secants drawn when ``n`` exceeds ``max_exact``.
        seed: seed of the secant sample.

    Raises:
        TooFewPoints: fewer than two points in secant mode, or only zero inputs.
    """
    if mode == "points":
        pts = _as_points(points)
        if pts.shape[0] == 0:
            raise TooFewPoints("no points given")
        return distortion_from_images(op.apply(pts), pts)
    if mode != "secants":
        raise ParameterError(f"mode must be 'secants' or 'points', got {mode!r}")
    n = _as_points(points).shape[0]
    chunks = secant_norm_ratios(op, points, max_exact=max_exact, sample_size=sample_size, seed=seed)
    return _summarize(chunks, mode, n <= max_exact)


def jl_verdict(op: LinearOperator, points, epsilon: float, **kwargs) -> bool:
    """True iff every unit secant ``u`` satisfies ``|‖Au‖² - 1| <= epsilon``."""
    return distortion(op, points, mode="secants", **kwargs).max_sq_err <= epsilon


def _matrix(op_or_matrix) -> np.ndarray:
    if isinstance(op_or_matrix, LinearOperator):
        return materialize(op_or_matrix)
    return np.asarray(op_or_matrix)


def _gram_extremes(gram: np.ndarray, supports: np.ndarray) -> np.ndarray:
    sub = gram[supports[:, :, None], supports[:, None, :]]
    eig = np.linalg.eigvalsh(sub)
    return np.maximum(eig[:, -1] - 1.0, 1.0 - eig[:, 0])


def ric_bruteforce(op_or_matrix, s: int, *, max_supports: int = SUPPORT_LIMIT,
                   batch: int = 20000) -> RicReport:
    """Exact restricted isometry constant of order ``s`` by enumerating every support.

    For each support ``T`` the extreme eigenvalues of the ``s x s`` Gram
    block ``A_T* A_T`` are the extreme squared singular values of ``A_T``.

    Raises:
        TooManySupports: ``C(N, s)`` exceeds ``max_supports``.
    """
    A = _matrix(op_or_matrix)
    N = A.shape[1]
    if not 1 <= s <= N:
        raise ParameterError(f"sparsity must lie in [1, {N}], got {s}")
    total = math.comb(N, s)
    if total > max_supports:
        raise TooManySupports(f"C({N}, {s}) = {total} supports exceeds the guard {max_supports}")
    gram = A.conj().T @ A
    best, best_support = -math.inf, ()
    combos = itertools.combinations(range(N), s)
    while True:
        block = np.fromiter(itertools.chain.from_iterable(itertools.islice(combos, batch)), dtype=np.intp)
        if block.size == 0:
            break
        supports = block.reshape(-1, s)
        dev = _gram_extremes(gram, supports)
        k = int(np.argmax(dev))
        if dev[k] > best:
            best, best_support = float(dev[k]), tuple(int(v) for v in supports[k])
    return RicReport(s, max(best, 0.0), best_support, total)


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    ci = binomtest(successes, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


def success_probability(factory: Callable[[int], LinearOperator], task, epsilon: float, trials: int,
                        seed: int = 0) -> tuple[float, tuple[float, float]]:
    """Fraction of seeded operators that meet the ``epsilon`` target, with a 95% Wilson interval.

    Args:
        factory: builds an operator from a 64-bit seed.
        task: an ``(n, N)`` point array (checked with :func:`jl_verdict`) or an
            integer sparsity ``s`` (checked with ``ric <= epsilon``).
        epsilon: distortion target.
        trials: number of seeds, at least 30.
        seed: root seed; trial ``i`` uses ``rng.child_seed(seed, i)``.
    """
    if trials < 30:
        raise ParameterError(f"need at least 30 trials, got {trials}")
    is_rip = isinstance(task, (int, np.integer)) and not isinstance(task, bool)
    hits = 0
    for i in range(trials):
        op = factory(rng.child_seed(seed, i))
        ok = ric_bruteforce(op, int(task)).ric <= epsilon if is_rip else jl_verdict(op, task, epsilon)
        hits += bool(ok)
    return hits / trials, wilson_interval(hits, trials)


def greedy_cover(points, epsilon: float) -> tuple[np.ndarray, int]:
    """Farthest-point greedy cover: every point ends within ``epsilon`` of a returned center."""
    pts = _as_points(points)
    n = pts.shape[0]
    if n == 0:
        raise EmptySet("cannot cover an empty set")
    centers = [0]
    dist = np.linalg.norm(pts - pts[0], axis=1)
    while True:
        far = int(np.argmax(dist))
        if dist[far] <= epsilon:
            break
        centers.append(far)
        np.minimum(dist, np.linalg.norm(pts - pts[far], axis=1), out=dist)
    return pts[centers], len(centers)


def secant_sample(points, count: int, seed: int = 0, decimals: int = 12) -> np.ndarray:
    """Seeded sample of unit secants ``(x - y)/‖x - y‖``, one representative per ``±u`` pair.

    All pairs are used when ``count`` reaches ``n(n-1)/2``; otherwise
    ``count`` distinct pairs are drawn without replacement.
    """
    pts = _as_points(points)
    n = pts.shape[0]
    if n < 2:
        raise TooFewPoints(f"need at least 2 points, got {n}")
    total = n * (n - 1) // 2
    if count >= total:
        i, j = np.triu_indices(n, k=1)
    else:
        flat = rng.stream(seed, rng.PAIRS).choice(total, size=count, replace=False)
        flat.sort()
        i, j = _unrank_pairs(flat, n)
    diffs = pts[i] - pts[j]
    lengths = np.linalg.norm(diffs, axis=1)
    keep = lengths > 0
    if not keep.any():
        raise TooFewPoints("all points coincide")
    units = diffs[keep] / lengths[keep, None]
    # Canonical sign: first coordinate with magnitude above rounding noise is positive.
    lead = np.argmax(np.abs(units) > 10.0**-decimals, axis=1)
    flip = np.sign(units[np.arange(units.shape[0]), lead])
    units = units * flip[:, None]
    _, first = np.unique(np.round(units, decimals), axis=0, return_index=True)
    return units[np.sort(first)]


def _unrank_pairs(flat: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Map ranks in row-major upper-triangle order to ``(i, j)`` with ``i < j``."""
    starts = np.concatenate([[0], np.cumsum(np.arange(n - 1, 0, -1))])
    i = np.searchsorted(starts, flat, side="right") - 1
    j = flat - starts[i] + i + 1
    return i, j
