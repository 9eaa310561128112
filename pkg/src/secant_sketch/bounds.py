"""Embedding-dimension calculators with an explicit constants registry.

The guarantees these formulas come from hold "for some absolute constants".
Every such constant is a named entry of a :class:`ConstantsRegistry`, so
its value is visible, overridable and recorded in each :class:`BoundReport`.

Two profiles ship:

* ``unit``: every absolute constant equals 1 (flagged uncalibrated).
* ``empirical``: the constants exercised by the desk-scale distortion and
  RIP suites are fitted with :mod:`secant_sketch.calibrate`; the rest
  stay at 1.

Logarithms of compound expressions that appear squared (``ln^2(...)``) are
evaluated as ``ln(max(arg, e))``. Without the floor the squared factor can
vanish or grow as the argument drops below 1, which breaks monotonicity in
``epsilon`` and ``p``. Every report lists the factors where the floor was
active in ``extras["clamped"]``.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Mapping

from .errors import DomainError, ParameterError

E = math.e
SQRT2 = math.sqrt(2.0)

# name -> (unit value, note)
_UNIT_DEFAULTS: dict[str, tuple[float, str]] = {
    "K": (SQRT2, "orthonormal-system bound; sqrt(2) covers Hadamard and DCT-II"),
    "c_prime": (1.0, "sub-gaussian manifold bound; uncalibrated"),
    "c_double_prime": (1.0, "sub-gaussian finite-set bound; uncalibrated"),
    "sors_c0": (1.0, "SORS manifold bound, leading factor; uncalibrated"),
    "sors_c1": (1.0, "SORS manifold bound, inner log factor; uncalibrated"),
    "block_c1": (1.0, "block manifold bound, lower window on p; uncalibrated"),
    "block_c2": (1.0, "block manifold bound, feasibility scale; uncalibrated"),
    "block_c3": (1.0, "block manifold bound, feasibility log factor; uncalibrated"),
    "block_c4": (1.0, "block manifold bound, leading factor; uncalibrated"),
    "m1_c": (1.0, "implied m1 rule, leading factor; uncalibrated"),
    "fin_sors_c0": (1.0, "SORS finite-set bound, leading factor; uncalibrated"),
    "fin_sors_c1": (1.0, "SORS finite-set bound, outer log; uncalibrated"),
    "fin_sors_c2": (1.0, "SORS finite-set bound, nested log; uncalibrated"),
    "a0_prime": (1.0, "SOB RIP bound, leading factor; uncalibrated"),
    "a1_prime": (1.0, "SOB RIP bound, nested log; uncalibrated"),
    "sob_mrip_c0": (1.0, "SOB multiresolution RIP bound, leading factor; uncalibrated"),
    "sob_mrip_c1": (1.0, "SOB multiresolution RIP bound, nested log; uncalibrated"),
    "ff_c0": (1.0, "fast finite-set embedding, m1 leading factor; uncalibrated"),
    "ff_c1": (1.0, "fast finite-set embedding, m1 outer log; uncalibrated"),
    "ff_c2": (1.0, "fast finite-set embedding, m1 nested log; uncalibrated"),
    "ff_c3": (1.0, "fast finite-set embedding, m2 leading factor; uncalibrated"),
    "ff_restrict": (1.0, "fast finite-set embedding, cardinality window; uncalibrated"),
    "sub_c": (1.0, "fast subspace embedding, dimension window; uncalibrated"),
    "sub_c_prime": (1.0, "fast subspace embedding, leading factor; uncalibrated"),
    "rip_c": (1.0, "fast RIP, sparsity window scale; uncalibrated"),
    "rip_c_prime": (1.0, "fast RIP, sparsity window log factor; uncalibrated"),
    "rip_c_dprime": (1.0, "fast RIP, leading factor; uncalibrated"),
    "fmrip_c1": (1.0, "fast multiresolution RIP, sparsity window scale; uncalibrated"),
    "fmrip_c2": (1.0, "fast multiresolution RIP, sparsity window log factor; uncalibrated"),
    "fmrip_c3": (1.0, "fast multiresolution RIP, leading factor; uncalibrated"),
    "inf_c1": (1.0, "fast infinite-set embedding, lower window on p; uncalibrated"),
    "inf_c2": (1.0, "fast infinite-set embedding, width window scale; uncalibrated"),
    "inf_c3": (1.0, "fast infinite-set embedding, width window log factor; uncalibrated"),
    "inf_c4": (1.0, "fast infinite-set embedding, leading factor; uncalibrated"),
}

# From secant_sketch.calibrate: smallest grid value with a 95% success rate (a0_prime one step higher).
_EMPIRICAL_OVERRIDES: dict[str, tuple[float, str]] = {
    "c_double_prime": (6.5, "fitted: Gaussian maps of 100-point clouds in R^1024, eps=0.3, p=0.1"),
    "a0_prime": (0.3, "fitted: unsigned DCT-II row samples, N=64, s=2, eps=0.5, p=0.1"),
}


class ConstantsRegistry(Mapping[str, float]):
    """Immutable snapshot of named positive constants with provenance notes."""

    def __init__(self, values: Mapping[str, float], notes: Mapping[str, str] | None = None,
                 profile: str = "custom"):
        for key, value in values.items():
            if not (isinstance(value, (int, float)) and value > 0 and math.isfinite(value)):
                raise ParameterError(f"constant {key} must be a positive finite number, got {value!r}")
        self._values = MappingProxyType({k: float(v) for k, v in values.items()})
        self._notes = MappingProxyType(dict(notes or {}))
        self.profile = profile

    def __getitem__(self, key: str) -> float:
        try:
            return self._values[key]
        except KeyError:
            raise ParameterError(f"unknown constant {key!r}") from None

    def __iter__(self):
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def note(self, key: str) -> str:
        return self._notes.get(key, "")

    def replace(self, **updates: float) -> "ConstantsRegistry":
        """New snapshot with ``updates`` applied; the original is untouched."""
        unknown = set(updates) - set(self._values)
        if unknown:
            raise ParameterError(f"unknown constants {sorted(unknown)}")
        notes = dict(self._notes)
        for key in updates:
            notes[key] = "user override"
        return ConstantsRegistry({**self._values, **updates}, notes, "custom")

    def snapshot(self) -> dict[str, float]:
        return dict(self._values)

    def __repr__(self) -> str:
        return f"ConstantsRegistry(profile={self.profile!r})"


def _profile(overrides: dict[str, tuple[float, str]], name: str) -> ConstantsRegistry:
    merged = {**_UNIT_DEFAULTS, **overrides}
    return ConstantsRegistry({k: v for k, (v, _) in merged.items()},
                             {k: n for k, (_, n) in merged.items()}, name)


UNIT = _profile({}, "unit")
EMPIRICAL = _profile(_EMPIRICAL_OVERRIDES, "empirical")
PROFILES = {"unit": UNIT, "empirical": EMPIRICAL}


def get_profile(name: str) -> ConstantsRegistry:
    try:
        return PROFILES[name]
    except KeyError:
        raise ParameterError(f"unknown constants profile {name!r}; expected one of {sorted(PROFILES)}") from None


class TheoremId(str, enum.Enum):
    SUBGAUSSIAN = "subgaussian"
    SORS = "sors"
    BLOCK = "block"
    FINITE_SUBGAUSSIAN = "finite-subgaussian"
    FINITE_SORS = "finite-sors"
    SOB_RIP = "sob-rip"
    SOB_MRIP = "sob-mrip"
    MRIP = "mrip"
    FAST_FINITE = "fast-finite"
    FAST_SUBSPACE = "fast-subspace"
    FAST_RIP = "fast-rip"
    FAST_MRIP = "fast-mrip"
    FAST_INFINITE = "fast-infinite"


@dataclass(frozen=True)
class BoundReport:
    theorem_id: TheoremId
    m_required: float
    feasible: bool
    feasibility_reason: str
    inputs: dict
    constants: dict
    profile: str
    extras: dict = field(default_factory=dict)

    @property
    def m(self) -> int:
        """Integer embedding dimension to use: ``max(1, ceil(m_required))``."""
        if not math.isfinite(self.m_required):
            raise DomainError("m_required is not finite")
        return max(1, math.ceil(self.m_required))

    def to_dict(self) -> dict:
        out = {"theorem_id": self.theorem_id.value, "m_required": self.m_required,
               "feasible": self.feasible, "feasibility_reason": self.feasibility_reason,
               "inputs": self.inputs, "constants": self.constants, "profile": self.profile,
               "extras": self.extras}
        if math.isfinite(self.m_required):
            out["m"] = self.m
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, default=str)


class _Clamps:
    def __init__(self):
        self.names: list[str] = []

    def ln(self, name: str, arg: float) -> float:
        """``ln(max(arg, e))``, noting when the floor applies."""
        if arg < E:
            self.names.append(name)
            return 1.0
        return math.log(arg)


def _unit_interval(name: str, value: float, upper: float = 1.0, lower: float = 0.0) -> float:
    if not (lower < value < upper):
        raise DomainError(f"{name} must lie in ({lower:g}, {upper:g}), got {value}")
    return float(value)


def _check_K(K: float) -> float:
    if not K >= 1:
        raise DomainError(f"K must be at least 1, got {K}")
    return float(K)


def _report(tid, m, feasible, reason, inputs, reg, extras=None, clamps=None):
    extras = dict(extras or {})
    if clamps is not None:
        extras["clamped"] = list(clamps.names)
    return BoundReport(tid, float(m), bool(feasible), reason, inputs, reg.snapshot(), reg.profile, extras)


def m_subgaussian(beta: float, epsilon: float, p: float, constants: ConstantsRegistry = UNIT) -> BoundReport:
    """``c' (sqrt(ln beta) + sqrt(ln(2/p)))^2 / eps^2`` for dense sub-gaussian maps of a manifold."""
    eps = _unit_interval("epsilon", epsilon)
    p = _unit_interval("p", p)
    if not beta > 1:
        raise DomainError(f"beta must exceed 1, got {beta}")
    root = math.sqrt(math.log(beta)) + math.sqrt(math.log(2 / p))
    m = constants["c_prime"] * root * root / (eps * eps)
    return _report(TheoremId.SUBGAUSSIAN, m, True, "no restriction",
                   {"beta": beta, "epsilon": eps, "p": p}, constants)


def m_sors(beta: float, epsilon: float, p: float, N: int, K: float | None = None,
           constants: ConstantsRegistry = UNIT) -> BoundReport:
    """SORS embedding dimension for a manifold with secant constant ``beta``."""
    eps = _unit_interval("epsilon", epsilon)
    p = _unit_interval("p", p)
    if not beta > 1:
        raise DomainError(f"beta must exceed 1, got {beta}")
    if N < 1:
        raise DomainError("N must be positive")
    K = _check_K(constants["K"] if K is None else K)
    clamps = _Clamps()
    ln_beta = math.log(beta)
    ln_2p = math.log(2 / p)
    nested = clamps.ln("nested", constants["sors_c1"] * ln_beta * ln_2p * K * K / (eps * eps))
    m = (constants["sors_c0"] / (eps * eps)) * K * K * ln_beta * nested**2 * ln_2p * math.log(2 * E * N / p)
    return _report(TheoremId.SORS, m, True, "no restriction",
                   {"beta": beta, "epsilon": eps, "p": p, "N": N, "K": K}, constants, clamps=clamps)


def implied_m1(log_size: float, epsilon: float, p: float, N: int, m2: float, K: float,
               constants: ConstantsRegistry = UNIT) -> dict:
    """Minimal inner dimension ``c K^2/eps^2 * ln(N |S|/p) * ln^3(N K^2/(eps p))`` clamped to ``[m2, sqrt(N)]``.

    ``log_size`` is ``ln |S|`` for a finite set, or the log covering proxy
    (``ln beta`` for a manifold) otherwise.
    """
    raw = (constants["m1_c"] * K * K / (epsilon * epsilon) * (math.log(N / p) + log_size)
           * math.log(N * K * K / (epsilon * p)) ** 3)
    upper = math.isqrt(N)
    lower = math.ceil(m2)
    chosen = min(max(math.ceil(raw), lower), upper)
    return {"m1_raw": raw, "m1": chosen, "m1_within_sqrt_n": raw <= upper,
            "m1_at_least_m2": chosen >= lower}


def m_block(beta: float, epsilon: float, p: float, N: int, K: float | None = None,
            constants: ConstantsRegistry = UNIT) -> BoundReport:
    """Block-construction embedding dimension ``m2`` for a manifold, with its feasibility window."""
    if N < 50:
        raise DomainError(f"N must be at least 50, got {N}")
    eps = _unit_interval("epsilon", epsilon)
    p = _unit_interval("p", p, upper=1 / 3, lower=math.exp(-constants["block_c1"] * N))
    if not beta > 1:
        raise DomainError(f"beta must exceed 1, got {beta}")
    K = _check_K(constants["K"] if K is None else K)
    ln_beta = math.log(beta)
    threshold = constants["block_c2"] * eps**2 * math.sqrt(N) / math.log(constants["block_c3"] * N / (eps * p)) ** 6
    feasible = ln_beta <= threshold
    m2 = constants["block_c4"] * ln_beta * math.log(N / (eps * p)) * math.log(1 / p) / (eps * eps)
    reason = (f"ln(beta)={ln_beta:.6g} {'<=' if feasible else '>'} window {threshold:.6g}")
    extras = {"ln_beta_threshold": threshold, **implied_m1(ln_beta, eps, p, N, m2, K, constants)}
    return _report(TheoremId.BLOCK, m2, feasible, reason,
                   {"beta": beta, "epsilon": eps, "p": p, "N": N, "K": K}, constants, extras)


def _check_cardinality(cardinality: int) -> int:
    if isinstance(cardinality, bool) or int(cardinality) != cardinality or cardinality < 1:
        raise DomainError(f"set cardinality must be a positive integer, got {cardinality!r}")
    return int(cardinality)


def m_finite_subgaussian(cardinality: int, epsilon: float, p: float,
                         constants: ConstantsRegistry = UNIT) -> BoundReport:
    """``c'' ln(2|S|/p) / eps^2`` for dense sub-gaussian maps of a finite set."""
    size = _check_cardinality(cardinality)
    eps = _unit_interval("epsilon", epsilon)
    p = _unit_interval("p", p)
    m = constants["c_double_prime"] * math.log(2 * size / p) / (eps * eps)
    return _report(TheoremId.FINITE_SUBGAUSSIAN, m, True, "no restriction",
                   {"cardinality": size, "epsilon": eps, "p": p}, constants)


def m_finite_sors(cardinality: int, epsilon: float, p: float, N: float, K: float | None = None,
                  constants: ConstantsRegistry = UNIT) -> BoundReport:
    """SORS embedding dimension for a finite set."""
    size = _check_cardinality(cardinality)
    eps = _unit_interval("epsilon", epsilon)
    p = _unit_interval("p", p)
    if not N >= 1:
        raise DomainError("N must be at least 1")
    K = _check_K(constants["K"] if K is None else K)
    clamps = _Clamps()
    K2 = K * K
    nested = clamps.ln("nested", math.log(constants["fin_sors_c2"] * size / p) * K2 / eps)
    m = (constants["fin_sors_c0"] * K2 / (eps * eps) * math.log(constants["fin_sors_c1"] * size / p)
         * (nested**2 * math.log(E * N) + math.log(2 * E / p)))
    return _report(TheoremId.FINITE_SORS, m, True, "no restriction",
                   {"cardinality": size, "epsilon": eps, "p": p, "N": N, "K": K}, constants, clamps=clamps)


def _check_sparsity(s: int, N: int) -> int:
    if isinstance(s, bool) or int(s) != s or not 1 <= s <= N:
        raise DomainError(f"sparsity must be an integer in [1, N={N}], got {s!r}")
    return int(s)


def m_sob_rip(s: int, epsilon: float, p: float, N: int, K: float | None = None,
              constants: ConstantsRegistry = UNIT) -> BoundReport:
    """Rows needed for an unsigned subsampled orthogonal matrix to have the RIP of order ``(s, eps)``."""
    s = _check_sparsity(s, N)
    eps = _unit_interval("epsilon", epsilon)
    p = _unit_interval("p", p)
    K = _check_K(constants["K"] if K is None else K)
    clamps = _Clamps()
    K2 = K * K
    nested = clamps.ln("nested", constants["a1_prime"] * s * K2 / eps)
    m = constants["a0_prime"] / (eps * eps) * K2 * s * (math.log(E * N) * nested**2 + math.log(E / p))
    return _report(TheoremId.SOB_RIP, m, True, "no restriction",
                   {"s": s, "epsilon": eps, "p": p, "N": N, "K": K}, constants, clamps=clamps)


def m_sob_mrip(s: int, epsilon: float, p: float, N: int, K: float | None = None,
               constants: ConstantsRegistry = UNIT) -> BoundReport:
    """Closed-form multiresolution RIP bound for unsigned subsampled orthogonal matrices."""
    s = _check_sparsity(s, N)
    eps = _unit_interval("epsilon", epsilon)
    p = _unit_interval("p", p)
    K = _check_K(constants["K"] if K is None else K)
    clamps = _Clamps()
    K2 = K * K
    nested = clamps.ln("nested", constants["sob_mrip_c1"] * s * K2 / (eps * eps))
    m = constants["sob_mrip_c0"] / (eps * eps) * K2 * s * math.log(E * N / p) * nested**2
    return _report(TheoremId.SOB_MRIP, m, True, "no restriction",
                   {"s": s, "epsilon": eps, "p": p, "N": N, "K": K}, constants, clamps=clamps)


def ric_scale(eps_2s: float, s: int, t: int) -> float:
    """Upper bound ``(t/s) eps_2s`` on the order-``t`` restricted isometry constant, ``t >= s``."""
    if s < 1 or t < s:
        raise DomainError(f"need 1 <= s <= t, got s={s}, t={t}")
    if eps_2s < 0:
        raise DomainError("restricted isometry constants are nonnegative")
    return (t / s) * eps_2s


def ric_scale_ceil(eps: float, s: int, k: float) -> tuple[int, float]:
    """Return ``(2 ceil(s/k), k eps)``: a small-order RIC below ``eps`` certifies order ``s`` at ``k eps``."""
    if s < 1 or not k >= 1:
        raise DomainError(f"need s >= 1 and k >= 1, got s={s}, k={k}")
    if eps < 0:
        raise DomainError("restricted isometry constants are nonnegative")
    return 2 * math.ceil(s / k), k * eps


BoundFunction = Callable[[int, float, float], "float | BoundReport"]


def _as_value(result) -> float:
    return result.m_required if isinstance(result, BoundReport) else float(result)


def m_mrip(f: BoundFunction, s: int, epsilon: float, p: float, N: int, a: float = 1.0,
           constants: ConstantsRegistry = UNIT) -> BoundReport:
    """Lift an RIP row bound ``f(s', eps', p')`` to a multiresolution RIP bound.

    Sparsity arguments above ``N`` are evaluated at ``N``, since every
    support of size ``N`` or more is the whole index set.
    """
    s = _check_sparsity(s, N)
    eps = _unit_interval("epsilon", epsilon)
    p = _unit_interval("p", p)
    if not 0 < a <= 1:
        raise DomainError(f"a must lie in (0, 1], got {a}")
    levels = math.ceil(math.log2(N / s)) + 1
    p_level = p / levels
    L = min(2 * math.log2(a / eps), levels)
    base_s = min(2 * math.ceil(a * a * s / (eps * eps)), N)
    terms = [("base", base_s, a * a / 2, _as_value(f(base_s, a * a / 2, p_level)))]
    l = 0
    while l < L:
        s_l = min(2**l * s, N)
        terms.append((l, s_l, 2 ** (l / 2) * eps, _as_value(f(s_l, 2 ** (l / 2) * eps, p_level))))
        l += 1
    best = max(terms, key=lambda t: t[3])
    extras = {"argmax_level": best[0], "level_count": levels, "L": L, "p_level": p_level,
              "terms": [{"level": t[0], "s": t[1], "epsilon": t[2], "m": t[3]} for t in terms]}
    return _report(TheoremId.MRIP, best[3], True, "no restriction",
                   {"s": s, "epsilon": eps, "p": p, "N": N, "a": a}, constants, extras)


class FastKind(str, enum.Enum):
    FINITE_SETS = "finite"
    SUBSPACE = "subspace"
    RIP = "rip"
    MRIP = "mrip"
    INFINITE = "infinite"


def _fast_common(N: int, epsilon: float, p: float, min_N: float = 50) -> tuple[float, float]:
    if N < min_N:
        raise DomainError(f"N must be at least {min_N:g}, got {N}")
    return _unit_interval("epsilon", epsilon), _unit_interval("p", p)


def m_fast_finite(cardinality: int, epsilon: float, p: float, N: int, K: float | None = None,
                  constants: ConstantsRegistry = UNIT) -> BoundReport:
    """Block construction for a finite set: ``m2`` bound plus the smallest admissible ``m1``.

    ``m1`` must satisfy ``sqrt(N) >= m1 >= g(m1)`` where ``g`` decreases in
    ``m1``; the search returns the smallest integer that works, raised to
    ``m2`` so the inner dimension never undercuts the outer one.
    """
    size = _check_cardinality(cardinality)
    eps, p = _fast_common(N, epsilon, p, min_N=4 * E)
    K = _check_K(constants["K"] if K is None else K)
    K2 = K * K
    clamps = _Clamps()
    m2 = constants["ff_c3"] * math.log(4 * size / p) / (eps * eps)

    def lower(m1: int, record: bool = False) -> float:
        ratio = N * size / (m1 * m1 * p)
        nested_arg = math.log(constants["ff_c2"] * ratio) * K2 / eps
        nested = clamps.ln("nested", nested_arg) if record else math.log(max(nested_arg, E))
        return (constants["ff_c0"] * K2 / (eps * eps) * math.log(constants["ff_c1"] * ratio)
                * nested**2 * math.log(4 * E * N / p))

    top = math.isqrt(N)
    m1 = next((k for k in range(1, top + 1) if k >= lower(k)), None)
    restrict_log = (math.log(p / N) + constants["ff_restrict"] * eps**2 * math.sqrt(N)
                    / math.log(N / (eps * p)) ** 3)
    extras = {"cardinality_log_window": restrict_log,
              "within_cardinality_window": math.log(size) <= restrict_log}
    if m1 is None:
        lower(top, record=True)
        reason = f"no m1 <= sqrt(N)={top} meets its lower bound ({lower(top):.6g} at m1={top})"
        extras.update(m1=None, m1_lower_at_sqrt_n=lower(top))
        feasible = False
    else:
        lower(m1, record=True)
        chosen = max(m1, math.ceil(m2))
        feasible = chosen <= top
        reason = (f"m1={chosen} within [m1 lower bound, sqrt(N)={top}]" if feasible
                  else f"m2={m2:.6g} exceeds sqrt(N)={top}, so no m1 >= m2 fits")
        extras.update(m1=chosen, m1_min=m1)
    return _report(TheoremId.FAST_FINITE, m2, feasible, reason,
                   {"cardinality": size, "epsilon": eps, "p": p, "N": N, "K": K}, constants, extras, clamps)


def m_fast_subspace(d: int, epsilon: float, p: float, N: int,
                    constants: ConstantsRegistry = UNIT) -> BoundReport:
    """Block construction as an oblivious embedding of every ``d``-dimensional subspace."""
    eps, p = _fast_common(N, epsilon, p)
    if isinstance(d, bool) or int(d) != d or d < 1:
        raise DomainError(f"subspace dimension must be a positive integer, got {d!r}")
    ceiling = constants["sub_c"] * eps**2 * math.sqrt(N) / math.log(N / (eps * p)) ** 4 - 1
    feasible = d <= ceiling
    m = constants["sub_c_prime"] * d / (eps * eps) * (-math.log(eps) - math.log(p) / d)
    reason = f"d={d} {'<=' if feasible else '>'} dimension window {ceiling:.6g}"
    return _report(TheoremId.FAST_SUBSPACE, m, feasible, reason,
                   {"d": d, "epsilon": eps, "p": p, "N": N}, constants, {"d_ceiling": ceiling})


def _sparse_bound(lead: float, s: int, eps: float, p: float, N: int) -> float:
    return lead * s / (eps * eps) * (math.log(N) - math.log(eps) - math.log(p) / s)


def m_fast_rip(s: int, epsilon: float, p: float, N: int, constants: ConstantsRegistry = UNIT) -> BoundReport:
    """Block construction with the RIP of order ``(s, eps)``."""
    if N < 50:
        raise DomainError(f"N must be at least 50, got {N}")
    eps = _unit_interval("epsilon", epsilon, upper=1 / 3)
    p = _unit_interval("p", p, upper=1 / 3, lower=math.exp(-N))
    s = _check_sparsity(s, N)
    ceiling = constants["rip_c"] * eps**2 * math.sqrt(N) / math.log(constants["rip_c_prime"] * N / (eps * p)) ** 5
    feasible = s <= ceiling
    m = _sparse_bound(constants["rip_c_dprime"], s, eps, p, N)
    reason = f"s={s} {'<=' if feasible else '>'} sparsity window {ceiling:.6g}"
    return _report(TheoremId.FAST_RIP, m, feasible, reason,
                   {"s": s, "epsilon": eps, "p": p, "N": N}, constants, {"s_ceiling": ceiling})


def m_fast_mrip(s: int, epsilon: float, p: float, N: int, constants: ConstantsRegistry = UNIT) -> BoundReport:
    """Block construction with the multiresolution RIP of order ``(s, eps)``."""
    if N < 50:
        raise DomainError(f"N must be at least 50, got {N}")
    s = _check_sparsity(s, N)
    eps = _unit_interval("epsilon", epsilon)
    levels = math.ceil(math.log2(N / s)) + 1
    p = _unit_interval("p", p, upper=1 / 3, lower=math.exp(-N) * levels)
    ceiling = constants["fmrip_c1"] * eps**2 * math.sqrt(N) / math.log(constants["fmrip_c2"] * N / (eps * p)) ** 5
    feasible = s <= ceiling
    m = _sparse_bound(constants["fmrip_c3"], s, eps, p, N)
    reason = f"s={s} {'<=' if feasible else '>'} sparsity window {ceiling:.6g}"
    return _report(TheoremId.FAST_MRIP, m, feasible, reason,
                   {"s": s, "epsilon": eps, "p": p, "N": N}, constants, {"s_ceiling": ceiling})


def m_fast_infinite(width: float, epsilon: float, p: float, N: int, K: float | None = None,
                    constants: ConstantsRegistry = UNIT) -> BoundReport:
    """Block construction for an arbitrary set with unit-secant Gaussian width ``width``."""
    if N < 50:
        raise DomainError(f"N must be at least 50, got {N}")
    eps = _unit_interval("epsilon", epsilon)
    p = _unit_interval("p", p, upper=1 / 3, lower=math.exp(-constants["inf_c1"] * N))
    if not width > 0:
        raise DomainError(f"Gaussian width of a nonempty set must be positive, got {width}")
    K = _check_K(constants["K"] if K is None else K)
    w2 = width * width
    window = constants["inf_c2"] * eps**2 * math.sqrt(N) / math.log(constants["inf_c3"] * N / (eps * p)) ** 6
    feasible = w2 <= window
    m = constants["inf_c4"] * w2 * math.log(N / (eps * p)) * math.log(1 / p) / (eps * eps)
    reason = f"w^2={w2:.6g} {'<=' if feasible else '>'} width window {window:.6g}"
    extras = {"width_sq_window": window, **implied_m1(w2, eps, p, N, m, K, constants)}
    return _report(TheoremId.FAST_INFINITE, m, feasible, reason,
                   {"width": width, "epsilon": eps, "p": p, "N": N, "K": K}, constants, extras)


_FAST = {
    FastKind.FINITE_SETS: m_fast_finite,
    FastKind.SUBSPACE: m_fast_subspace,
    FastKind.RIP: m_fast_rip,
    FastKind.MRIP: m_fast_mrip,
    FastKind.INFINITE: m_fast_infinite,
}


def m_fast_family(kind: FastKind | str, **params) -> BoundReport:
    """Dispatch to the block-construction calculator named by ``kind``.

    ``finite`` takes ``cardinality``, ``subspace`` takes ``d``, ``rip`` and
    ``mrip`` take ``s``, ``infinite`` takes ``width``; all take ``epsilon``,
    ``p``, ``N`` and optionally ``constants``.
    """
    try:
        kind = FastKind(kind)
    except ValueError:
        raise ParameterError(f"unknown fast-family kind {kind!r}") from None
    return _FAST[kind](**params)


@dataclass(frozen=True)
class BinomBounds:
    log_lower: float
    log_upper: float

    @property
    def lower(self) -> float:
        return math.exp(self.log_lower)

    @property
    def upper(self) -> float:
        return math.exp(self.log_upper)


def binom_bounds(N: int, s: int) -> BinomBounds:
    """``(N/s)^s <= C(N, s) <= (e N / s)^s`` as logarithms."""
    if not (isinstance(N, int) and isinstance(s, int) and N >= s >= 1):
        raise DomainError(f"need integers N >= s >= 1, got N={N!r}, s={s!r}")
    base = math.log(N / s)
    return BinomBounds(s * base, s * (1.0 + base))
