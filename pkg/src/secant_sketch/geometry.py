"""Manifold descriptors and closed-form covering and width bounds.

Count-like quantities can exceed the double range for moderate intrinsic
dimension, so every bound is computed as a natural logarithm first and the
linear value is obtained with ``exp`` (``inf`` on overflow).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .errors import DescriptorError, DomainError, EmptySet, InfiniteReach, NotSpecial

INF = math.inf
SQRT6 = math.sqrt(6.0)


def log_omega(d: int) -> float:
    """Log of the volume of the unit ball in R^d."""
    if d < 0:
        raise DomainError(f"dimension must be nonnegative, got {d}")
    return 0.5 * d * math.log(math.pi) - math.lgamma(0.5 * d + 1.0)


def omega(d: int) -> float:
    """Volume of the unit ball in R^d, ``pi**(d/2) / Gamma(d/2 + 1)``."""
    return math.exp(log_omega(d))


def log_sphere_measure(d: int) -> float:
    """Log of the d-dimensional surface measure of the unit sphere in R^(d+1)."""
    if d < 0:
        raise DomainError(f"dimension must be nonnegative, got {d}")
    return math.log(2.0) + 0.5 * (d + 1) * math.log(math.pi) - math.lgamma(0.5 * (d + 1))


def sphere_measure(d: int) -> float:
    return math.exp(log_sphere_measure(d))


def _safe_exp(value: float) -> float:
    try:
        return math.exp(value)
    except OverflowError:
        return INF


def _parse_reach(value) -> float:
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "+inf", "infinity"):
            return INF
        return float(value)
    return float(value)


@dataclass(frozen=True)
class ManifoldDescriptor:
    """Geometric parameters of a compact smooth submanifold of R^N.

    Attributes:
        d: intrinsic dimension.
        N: ambient dimension.
        volume: d-dimensional volume.
        boundary_volume: (d-1)-dimensional volume of the boundary, 0 if none.
        reach: reach of the manifold, ``math.inf`` allowed.
        boundary_reach: smallest reach over boundary components, ``math.inf``
            when the boundary is empty.
    """

    name: str
    d: int
    N: int
    volume: float
    boundary_volume: float = 0.0
    reach: float = INF
    boundary_reach: float = INF

    def __post_init__(self):
        self.validate()

    @property
    def tau(self) -> float:
        return min(self.reach, self.boundary_reach)

    @property
    def has_boundary(self) -> bool:
        return self.boundary_volume > 0

    def validate(self) -> None:
        if self.d < 0 or self.N < 1 or self.d > self.N:
            raise DescriptorError(f"{self.name}: need 0 <= d <= N, got d={self.d}, N={self.N}")
        if not self.volume > 0:
            raise DescriptorError(f"{self.name}: volume must be positive")
        if self.boundary_volume < 0:
            raise DescriptorError(f"{self.name}: boundary volume must be nonnegative")
        if not (self.reach > 0 and self.boundary_reach > 0):
            raise DescriptorError(f"{self.name}: reaches must be positive")
        if not self.has_boundary and self.d >= 1 and math.isfinite(self.reach):
            # Closed manifolds with finite reach are at least as large as a sphere of that radius.
            ratio = math.log(self.volume) - self.d * math.log(self.reach)
            if ratio < log_sphere_measure(self.d) - 1e-12:
                raise DescriptorError(
                    f"{self.name}: volume/reach^d = {math.exp(ratio):.6g} is below the unit sphere measure "
                    f"{sphere_measure(self.d):.6g}")

    def to_dict(self) -> dict:
        def enc(v):
            return "inf" if math.isinf(v) else v
        return {"name": self.name, "d": self.d, "N": self.N, "volume": self.volume,
                "boundary_volume": self.boundary_volume, "reach": enc(self.reach),
                "boundary_reach": enc(self.boundary_reach)}

    @classmethod
    def from_dict(cls, data: dict) -> "ManifoldDescriptor":
        try:
            return cls(
                name=str(data.get("name", "manifold")), d=int(data["d"]), N=int(data["N"]),
                volume=float(data["volume"]), boundary_volume=float(data.get("boundary_volume", 0.0)),
                reach=_parse_reach(data.get("reach", "inf")),
                boundary_reach=_parse_reach(data.get("boundary_reach", "inf")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DescriptorError):
                raise
            raise DescriptorError(f"malformed descriptor: {exc!r}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ManifoldDescriptor":
        return cls.from_dict(json.loads(text))


def sphere(d: int, N: int | None = None) -> ManifoldDescriptor:
    """Unit sphere S^d in R^(d+1), reach 1."""
    return ManifoldDescriptor(f"sphere{d}", d, N or d + 1, sphere_measure(d), 0.0, 1.0, INF)


def disk(d: int, N: int | None = None) -> ManifoldDescriptor:
    """Unit ball D^d: flat, so infinite reach; boundary S^(d-1) of reach 1."""
    boundary_reach = INF if d == 1 else 1.0
    return ManifoldDescriptor(f"disk{d}", d, N or d, omega(d), sphere_measure(d - 1), INF, boundary_reach)


def circle(N: int = 2) -> ManifoldDescriptor:
    return ManifoldDescriptor("circle", 1, N, 2 * math.pi, 0.0, 1.0, INF)


def interval(N: int = 1) -> ManifoldDescriptor:
    """Segment [0, 1]; its boundary components are single points."""
    return ManifoldDescriptor("interval", 1, N, 1.0, 2.0, INF, INF)


def annulus(inner: float = 1.0, outer: float = 2.0, N: int = 2) -> ManifoldDescriptor:
    """Planar annulus; the hole limits the reach to the inner radius."""
    if not 0 < inner < outer:
        raise DescriptorError("annulus needs 0 < inner < outer")
    return ManifoldDescriptor("annulus", 2, N, math.pi * (outer**2 - inner**2),
                              2 * math.pi * (inner + outer), inner, inner)


def catalog(name: str) -> ManifoldDescriptor:
    """Look up a built-in descriptor: ``sphere<d>``, ``disk<d>``, ``circle``, ``interval``, ``annulus``."""
    key = name.strip().lower()
    fixed = {"circle": circle, "interval": interval, "annulus": annulus}
    if key in fixed:
        return fixed[key]()
    for prefix, build in (("sphere", sphere), ("disk", disk)):
        if key.startswith(prefix) and key[len(prefix):].isdigit():
            d = int(key[len(prefix):])
            if prefix == "disk" and d < 1:
                break
            return build(d)
    raise DescriptorError(f"unknown catalog manifold {name!r}")


@dataclass(frozen=True)
class CoverBound:
    """Upper bound on a covering number, held as a log and a linear value."""

    epsilon: float
    log_count: float
    formula_id: str
    terms: tuple = field(default=())

    @property
    def count(self) -> float:
        return _safe_exp(self.log_count)

    def to_dict(self) -> dict:
        return {"epsilon": self.epsilon, "count": self.count, "log_count": self.log_count,
                "formula_id": self.formula_id, "terms": [_safe_exp(t) for t in self.terms]}


@dataclass(frozen=True)
class SecantAlpha:
    d: int
    log_alpha: float
    log_beta: float

    @property
    def alpha(self) -> float:
        return _safe_exp(self.log_alpha)

    @property
    def beta(self) -> float:
        return _safe_exp(self.log_beta)


def _log_curvature(d_power: int, eps: float, scale: float, tau: float) -> float:
    """``d_power * log(1 - eps^2 / (scale * tau^2))``, exactly 0 for infinite reach."""
    if math.isinf(tau) or d_power == 0:
        return 0.0
    return d_power * math.log1p(-(eps * eps) / (scale * tau * tau))


def gunther_ball_volume(d: int, tau: float, r: float) -> float:
    """Minimum volume of an intrinsic ball of radius ``r`` on a manifold of reach ``tau``."""
    if d < 2:
        raise DomainError(f"ball volume comparison needs d >= 2, got {d}")
    if not (tau > 0 and 0 < r < SQRT6 * tau):
        raise DomainError(f"need 0 < r < sqrt(6)*tau, got r={r}, tau={tau}")
    return math.exp(log_omega(d) + _log_curvature(d - 1, r, 6.0, tau) + d * math.log(r))


def _log_interior_term(M: ManifoldDescriptor, eps: float) -> float:
    d = M.d
    return (math.log(M.volume) - log_omega(d) - _log_curvature(d - 1, eps, 24.0, M.reach)
            - d * math.log(eps / 2))


def cover_no_boundary(M: ManifoldDescriptor, eps: float) -> CoverBound:
    """Cover-size bound for a manifold without boundary."""
    if M.has_boundary:
        raise DomainError(f"{M.name} has a boundary; use cover_with_boundary")
    if M.d == 0:
        return CoverBound(eps, math.log(M.volume), "cover-no-boundary-d0")
    if not (0 < eps < 2 * SQRT6 * M.reach):
        raise DomainError(f"epsilon must lie in (0, 2*sqrt(6)*reach), got {eps}")
    return CoverBound(eps, _log_interior_term(M, eps), "cover-no-boundary")


def cover_with_boundary(M: ManifoldDescriptor, eps: float) -> CoverBound:
    """Cover-size bound split into an interior term and a boundary collar term."""
    if not M.has_boundary:
        raise DomainError(f"{M.name} has no boundary; use cover_no_boundary")
    if M.d < 1:
        raise DomainError("a manifold with boundary has d >= 1")
    limit = min(4 * SQRT6 * M.boundary_reach, 2 * SQRT6 * M.reach)
    if not (0 < eps <= limit):
        raise DomainError(f"epsilon must lie in (0, {limit}], got {eps}")
    if M.d == 1:
        interior = math.log(M.volume / eps)
        collar = math.log(M.boundary_volume)
    else:
        d = M.d
        interior = _log_interior_term(M, eps)
        collar = (math.log(M.boundary_volume) - log_omega(d - 1)
                  - _log_curvature(d - 2, eps, 96.0, M.boundary_reach) - (d - 1) * math.log(eps / 4))
    return CoverBound(eps, float(np.logaddexp(interior, collar)), "cover-with-boundary", (interior, collar))


def cover_bound(M: ManifoldDescriptor, eps: float) -> CoverBound:
    return cover_with_boundary(M, eps) if M.has_boundary else cover_no_boundary(M, eps)


def sphere_cover_corollary(d: int, eps: float) -> float:
    """Simplified cover bound ``3.4 sqrt(d) (2.1/eps)^d`` for S^d, 0 < eps < 1."""
    if not 0 < eps < 1:
        raise DomainError("epsilon must lie in (0, 1)")
    return 3.4 * math.sqrt(d) * (2.1 / eps) ** d


def disk_cover_corollary(d: int, eps: float) -> float:
    """Simplified cover bound ``(2/eps)^d + H(S^(d-1)) (4.05/eps)^(d-1)`` for D^d."""
    return (2 / eps) ** d + sphere_measure(d - 1) * (4.05 / eps) ** (d - 1)


def secant_alpha(M: ManifoldDescriptor) -> SecantAlpha:
    if M.d < 1:
        raise DomainError("secant constants need d >= 1")
    tau = M.tau
    if math.isinf(M.reach) or math.isinf(tau):
        raise InfiniteReach(f"{M.name} has infinite reach; use secant_cover_special")
    d = M.d
    if d == 1:
        log_alpha = math.log(20 * M.volume / tau + M.boundary_volume)
        log_extra = math.log(2.0)
    else:
        interior = math.log(M.volume) - log_omega(d) + d * math.log(41 / tau)
        if M.has_boundary:
            collar = math.log(M.boundary_volume) - log_omega(d - 1) + (d - 1) * math.log(81 / tau)
            log_alpha = float(np.logaddexp(interior, collar))
        else:
            log_alpha = interior
        log_extra = d * math.log(3.0)
    # beta = alpha^2 + extra * alpha
    log_beta = float(np.logaddexp(2 * log_alpha, log_extra + log_alpha))
    return SecantAlpha(d, log_alpha, log_beta)


def secant_cover(M: ManifoldDescriptor, eps: float) -> CoverBound:
    """Cover-size bound for the unit secants of a finite-reach manifold."""
    if not 0 < eps < 1:
        raise DomainError(f"epsilon must lie in (0, 1), got {eps}")
    sa = secant_alpha(M)
    power = 4 * M.d if M.d >= 2 else 4
    return CoverBound(eps, sa.log_beta - power * math.log(eps), "secant-cover")


def secant_cover_corollary_sphere(d: int, eps: float) -> float:
    """Simplified unit-secant cover bound ``20 d 41^(2d) / eps^(4d)`` for S^d."""
    return math.exp(math.log(20 * d) + 2 * d * math.log(41) - 4 * d * math.log(eps))


def secant_cover_special(M: ManifoldDescriptor, eps: float) -> CoverBound:
    """Unit-secant cover for finite sets (d = 0) and flat pieces (infinite reach)."""
    if M.d == 0:
        return CoverBound(eps, 2 * math.log(M.volume), "secant-cover-points")
    if math.isinf(M.reach):
        if not eps > 0:
            raise DomainError("epsilon must be positive")
        return CoverBound(eps, M.d * math.log1p(2 / eps), "secant-cover-flat")
    raise NotSpecial(f"{M.name}: d={M.d} with finite reach has no special-case formula")


def secant_width_bound(M: ManifoldDescriptor) -> float:
    """Upper bound ``8 sqrt(2) sqrt(ln beta + 4d)`` on the Gaussian width of the unit secants."""
    if M.d < 2:
        raise DomainError(f"width bound is only available for d >= 2, got d={M.d}")
    sa = secant_alpha(M)
    return 8 * math.sqrt(2) * math.sqrt(sa.log_beta + 4 * M.d)


def sphere_net_bound(d: int, delta: float) -> float:
    """Size of a delta-net of the unit sphere S^(d-1), ``(3/delta)^d``."""
    if d < 1 or not delta > 0:
        raise DomainError("need d >= 1 and delta > 0")
    return _safe_exp(d * math.log(3 / delta))


def width_montecarlo(points, trials: int, seed: int = 0, antithetic: bool = True,
                     chunk: int = 512) -> tuple[float, float]:
    """Estimate the Gaussian width ``E max_x <g, x>`` of a finite point set.

    With ``antithetic`` each Gaussian draw ``g`` is paired with ``-g`` and the
    pair average is one sample, which keeps the estimator unbiased while
    cancelling odd-order fluctuations.

    Args:
        points: ``(n, N)`` array.
        trials: number of Gaussian vectors evaluated, at least 2.
        seed: root seed of the Gaussian stream.
        antithetic: pair ``g`` with ``-g``.
        chunk: Gaussian vectors drawn per batch.

    Returns:
        ``(estimate, standard_error)``.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts.reshape(1, -1)
    if pts.shape[0] == 0:
        raise EmptySet("width of an empty set is undefined")
    if trials < 2:
        raise DomainError("need at least 2 trials")
    gen = rng.stream(seed, rng.GAUSS)
    draws = (trials + 1) // 2 if antithetic else trials
    samples = []
    done = 0
    while done < draws:
        k = min(chunk, draws - done)
        g = gen.standard_normal((k, pts.shape[1]))
        proj = g @ pts.T
        top = proj.max(axis=1)
        if antithetic:
            top = 0.5 * (top + (-proj).max(axis=1))
        samples.append(top)
        done += k
    values = np.concatenate(samples)
    se = float(values.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else 0.0
    return float(values.mean()), se
