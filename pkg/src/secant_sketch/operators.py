"""Seeded random embedding operators behind one matrix-free interface.

Operators act on the last axis: a vector of length ``cols`` maps to a
vector of length ``rows``, and a ``(batch, cols)`` array maps row by row to
``(batch, rows)``.

Families:

* ``SubGaussianOperator``: dense ``m x N`` matrix of i.i.d. Rademacher or
  Gaussian entries, scaled by ``1/sqrt(m)``.
* ``SorsOperator``: ``sqrt(N/m) R U D`` with ``R`` sampling ``m`` rows
  uniformly with replacement, ``U`` an orthonormal transform and ``D``
  random signs. With ``signs=False`` it is the unsigned subsampled
  orthogonal matrix ``sqrt(N/m) R U``.
* ``BlockOperator``: ``(1/sqrt(m2)) B C D'`` where ``C`` is block diagonal
  with copies of one inner ``m1 x m1**2`` subsampled transform scaled by
  ``sqrt(m1)``, ``D'`` is an optional length-``N`` sign diagonal and ``B`` is
  a dense ``m2 x m1*ceil(N/m1**2)`` sub-gaussian matrix.
* ``IdentityOperator``, ``ScaledOperator``, ``CompositeOperator``.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from . import rng, transforms
from .errors import DimensionMismatch, ParameterError, ShapeError, TooLarge
from .transforms import TransformKind

MATERIALIZE_LIMIT = 10**7


class Family(str, enum.Enum):
    SUBGAUSSIAN = "subgaussian"
    SORS = "sors"
    BLOCK = "block"
    IDENTITY = "identity"
    SCALED = "scaled"
    COMPOSITE = "composite"


class Dist(str, enum.Enum):
    RADEMACHER = "rademacher"
    GAUSSIAN = "gaussian"

    @classmethod
    def parse(cls, value: "Dist | str") -> "Dist":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ParameterError(f"unknown distribution {value!r}") from None


def _positive_int(name: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
        raise ParameterError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def _draw(gen: np.random.Generator, dist: Dist, shape) -> np.ndarray:
    if dist is Dist.GAUSSIAN:
        return gen.standard_normal(shape)
    return gen.choice(np.array([-1.0, 1.0]), size=shape)


def _signs(gen: np.random.Generator, n: int) -> np.ndarray:
    return gen.choice(np.array([-1.0, 1.0]), size=n)


class LinearOperator:
    """Common interface: ``rows``, ``cols``, ``family``, ``seed``, ``apply``, ``flops``."""

    family: Family
    rows: int
    cols: int
    seed: int = 0

    def _apply(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def apply(self, x) -> np.ndarray:
        arr = np.asarray(x)
        if arr.ndim == 0 or arr.shape[-1] != self.cols:
            got = "scalar" if arr.ndim == 0 else arr.shape[-1]
            raise DimensionMismatch(f"operator expects length {self.cols}, got {got}")
        if not np.iscomplexobj(arr):
            arr = arr.astype(np.float64, copy=False)
        return self._apply(arr)

    __call__ = apply

    def flops(self) -> int:
        raise NotImplementedError

    @property
    def is_complex(self) -> bool:
        return False

    def to_dict(self) -> dict:
        raise NotImplementedError

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_json()})"


class IdentityOperator(LinearOperator):
    family = Family.IDENTITY

    def __init__(self, N: int):
        self.rows = self.cols = _positive_int("N", N)

    def _apply(self, x):
        return x.copy()

    def flops(self) -> int:
        return self.cols

    def to_dict(self) -> dict:
        return {"family": self.family.value, "N": self.cols}


class ScaledOperator(LinearOperator):
    family = Family.SCALED

    def __init__(self, inner: LinearOperator, factor: float):
        self.inner = inner
        self.factor = float(factor)
        self.rows, self.cols, self.seed = inner.rows, inner.cols, inner.seed

    def _apply(self, x):
        return self.factor * self.inner.apply(x)

    def flops(self) -> int:
        return self.inner.flops() + self.rows

    @property
    def is_complex(self) -> bool:
        return self.inner.is_complex

    def to_dict(self) -> dict:
        return {"family": self.family.value, "factor": self.factor, "inner": self.inner.to_dict()}


class CompositeOperator(LinearOperator):
    """``outer(inner(x))``."""

    family = Family.COMPOSITE

    def __init__(self, outer: LinearOperator, inner: LinearOperator):
        if outer.cols != inner.rows:
            raise ShapeError(f"cannot compose: outer takes {outer.cols}, inner gives {inner.rows}")
        self.outer, self.inner = outer, inner
        self.rows, self.cols, self.seed = outer.rows, inner.cols, inner.seed

    def _apply(self, x):
        return self.outer.apply(self.inner.apply(x))

    def flops(self) -> int:
        return self.outer.flops() + self.inner.flops()

    @property
    def is_complex(self) -> bool:
        return self.outer.is_complex or self.inner.is_complex

    def to_dict(self) -> dict:
        return {"family": self.family.value, "outer": self.outer.to_dict(), "inner": self.inner.to_dict()}


class SubGaussianOperator(LinearOperator):
    family = Family.SUBGAUSSIAN

    def __init__(self, m: int, N: int, dist: Dist | str = Dist.RADEMACHER, seed: int = 0):
        self.rows = _positive_int("m", m)
        self.cols = _positive_int("N", N)
        if self.rows * self.cols > MATERIALIZE_LIMIT:
            raise TooLarge(f"dense {self.rows}x{self.cols} matrix exceeds {MATERIALIZE_LIMIT} entries")
        self.dist = Dist.parse(dist)
        self.seed = rng.check_seed(seed)
        entries = _draw(rng.stream(self.seed, rng.DENSE), self.dist, (self.rows, self.cols))
        self.matrix = entries / np.sqrt(self.rows)
        self.matrix.setflags(write=False)

    def _apply(self, x):
        return x @ self.matrix.T

    def flops(self) -> int:
        return 2 * self.rows * self.cols

    def to_dict(self) -> dict:
        return {"family": self.family.value, "N": self.cols, "m": self.rows,
                "dist": self.dist.value, "seed": self.seed}


@dataclass(frozen=True)
class SorsParams:
    N: int
    m: int
    kind: TransformKind = TransformKind.DCT2
    seed: int = 0
    signs: bool = True


class SorsOperator(LinearOperator):
    """``sqrt(N/m) R U D``; unsigned (``D = I``) when ``params.signs`` is false."""

    family = Family.SORS

    def __init__(self, params: SorsParams, workers: int = 1):
        self.params = params
        self.cols = _positive_int("N", params.N)
        self.rows = _positive_int("m", params.m)
        self.seed = rng.check_seed(params.seed)
        self.plan = transforms.plan(params.kind, self.cols, workers)
        self.row_index = rng.stream(self.seed, rng.ROWS).integers(0, self.cols, size=self.rows)
        self.signs = _signs(rng.stream(self.seed, rng.SIGNS), self.cols) if params.signs else None
        self.scale = math.sqrt(self.cols / self.rows)
        for arr in (self.row_index, self.signs):
            if arr is not None:
                arr.setflags(write=False)

    @property
    def is_complex(self) -> bool:
        return self.plan.kind.is_complex

    def _apply(self, x):
        if self.signs is not None:
            x = x * self.signs
        return self.scale * transforms.apply(self.plan, x)[..., self.row_index]

    def flops(self) -> int:
        return int(round(transforms.transform_flops(self.plan.kind, self.cols) + 2 * self.cols))

    def to_dict(self) -> dict:
        return {"family": self.family.value, "N": self.cols, "m": self.rows,
                "transform": self.plan.kind.value, "seed": self.seed, "signs": self.params.signs}


@dataclass(frozen=True)
class BlockParams:
    N: int
    m1: int
    m2: int
    inner_kind: TransformKind = TransformKind.DCT2
    subgaussian_dist: Dist = Dist.RADEMACHER
    seed: int = 0
    use_outer_sign: bool = True
    use_inner_sign: bool = False
    require_m1_ge_m2: bool = True


class BlockOperator(LinearOperator):
    """``(1/sqrt(m2)) B C D'`` with block-diagonal ``C`` of inner subsampled transforms."""

    family = Family.BLOCK

    def __init__(self, params: BlockParams, workers: int = 1):
        self.params = params
        self.cols = _positive_int("N", params.N)
        self.m1 = _positive_int("m1", params.m1)
        self.rows = self.m2 = _positive_int("m2", params.m2)
        if params.require_m1_ge_m2 and self.m2 > self.m1:
            raise ShapeError(f"block operator needs m2 <= m1, got m2={self.m2} > m1={self.m1}")
        self.seed = rng.check_seed(params.seed)
        self.block_length = self.m1 * self.m1
        self.chunks = -(-self.cols // self.block_length)
        self.padded_length = self.chunks * self.block_length
        self.intermediate = self.chunks * self.m1
        self.plan = transforms.plan(params.inner_kind, self.block_length, workers)
        self.row_index = rng.stream(self.seed, rng.ROWS).integers(0, self.block_length, size=self.m1)
        self.inner_signs = (_signs(rng.stream(self.seed, rng.SIGNS), self.block_length)
                            if params.use_inner_sign else None)
        self.outer_signs = (_signs(rng.stream(self.seed, rng.OUTER_SIGNS), self.cols)
                            if params.use_outer_sign else None)
        dist = Dist.parse(params.subgaussian_dist)
        self.mixing = _draw(rng.stream(self.seed, rng.MIXING), dist, (self.m2, self.intermediate))
        for arr in (self.row_index, self.inner_signs, self.outer_signs, self.mixing):
            if arr is not None:
                arr.setflags(write=False)

    @property
    def is_complex(self) -> bool:
        return self.plan.kind.is_complex

    def intermediate_apply(self, x) -> np.ndarray:
        """Return ``C D' x``, the concatenated inner-block outputs."""
        arr = np.asarray(x, dtype=np.result_type(x, np.float64))
        if arr.shape[-1] != self.cols:
            raise DimensionMismatch(f"operator expects length {self.cols}, got {arr.shape[-1]}")
        if self.outer_signs is not None:
            arr = arr * self.outer_signs
        lead = arr.shape[:-1]
        if self.padded_length != self.cols:
            pad = np.zeros(lead + (self.padded_length - self.cols,), dtype=arr.dtype)
            arr = np.concatenate([arr, pad], axis=-1)
        blocks = arr.reshape(*lead, self.chunks, self.block_length)
        if self.inner_signs is not None:
            blocks = blocks * self.inner_signs
        sampled = transforms.apply(self.plan, blocks)[..., self.row_index]
        return math.sqrt(self.m1) * sampled.reshape(*lead, self.intermediate)

    def _apply(self, x):
        return self.intermediate_apply(x) @ self.mixing.T / math.sqrt(self.m2)

    def flops(self) -> int:
        transform = self.chunks * transforms.transform_flops(self.plan.kind, self.block_length)
        return int(round(transform + self.m2 * self.m1 * self.chunks))

    def inner_bos_constant(self) -> float:
        return transforms.bos_constant(self.plan)

    def to_dict(self) -> dict:
        p = self.params
        return {"family": self.family.value, "N": self.cols, "m": {"m1": self.m1, "m2": self.m2},
                "transform": self.plan.kind.value, "dist": Dist.parse(p.subgaussian_dist).value,
                "seed": self.seed, "use_outer_sign": p.use_outer_sign,
                "use_inner_sign": p.use_inner_sign, "require_m1_ge_m2": p.require_m1_ge_m2}


def make_subgaussian(m: int, N: int, dist: Dist | str = Dist.RADEMACHER, seed: int = 0) -> SubGaussianOperator:
    return SubGaussianOperator(m, N, dist, seed)


def make_sors(params: SorsParams, workers: int = 1) -> SorsOperator:
    return SorsOperator(params, workers)


def make_sob(N: int, m: int, kind: TransformKind | str = TransformKind.DCT2, seed: int = 0) -> SorsOperator:
    """Unsigned subsampled orthogonal operator ``sqrt(N/m) R U``."""
    return SorsOperator(SorsParams(N, m, TransformKind.parse(kind), seed, signs=False))


def make_block(params: BlockParams, workers: int = 1) -> BlockOperator:
    return BlockOperator(params, workers)


def apply(op: LinearOperator, x) -> np.ndarray:
    return op.apply(x)


def flops(op: LinearOperator) -> int:
    return op.flops()


def materialize(op: LinearOperator) -> np.ndarray:
    """Dense ``rows x cols`` matrix whose column ``j`` is ``op.apply(e_j)``.

    Raises:
        TooLarge: ``rows * cols`` exceeds ``MATERIALIZE_LIMIT``.
    """
    if op.rows * op.cols > MATERIALIZE_LIMIT:
        raise TooLarge(f"{op.rows}x{op.cols} exceeds the {MATERIALIZE_LIMIT}-entry guard")
    return np.ascontiguousarray(op.apply(np.eye(op.cols)).T)


def from_dict(spec: dict, workers: int = 1) -> LinearOperator:
    """Rebuild an operator from its JSON parameter record."""
    try:
        family = Family(str(spec["family"]).lower())
    except (KeyError, TypeError, ValueError):
        raise ParameterError(f"operator record has no valid family: {spec!r}") from None
    try:
        if family is Family.IDENTITY:
            return IdentityOperator(spec["N"])
        if family is Family.SCALED:
            return ScaledOperator(from_dict(spec["inner"], workers), spec["factor"])
        if family is Family.COMPOSITE:
            return CompositeOperator(from_dict(spec["outer"], workers), from_dict(spec["inner"], workers))
        seed = spec.get("seed", 0)
        if family is Family.SUBGAUSSIAN:
            return SubGaussianOperator(spec["m"], spec["N"], spec.get("dist", "rademacher"), seed)
        kind = TransformKind.parse(spec.get("transform", "dct2"))
        if family is Family.SORS:
            return SorsOperator(SorsParams(spec["N"], spec["m"], kind, seed, bool(spec.get("signs", True))), workers)
        m = spec["m"]
        params = BlockParams(
            N=spec["N"], m1=m["m1"], m2=m["m2"], inner_kind=kind,
            subgaussian_dist=Dist.parse(spec.get("dist", "rademacher")), seed=seed,
            use_outer_sign=bool(spec.get("use_outer_sign", True)),
            use_inner_sign=bool(spec.get("use_inner_sign", False)),
            require_m1_ge_m2=bool(spec.get("require_m1_ge_m2", True)),
        )
        return BlockOperator(params, workers)
    except (KeyError, TypeError) as exc:
        raise ParameterError(f"malformed operator record: {exc!r}") from None


def from_json(text: str, workers: int = 1) -> LinearOperator:
    return from_dict(json.loads(text), workers)
