"""Seeded samplers for test geometries and point-set file formats."""

from __future__ import annotations

import enum
import json
import math
import struct
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import geometry, rng
from .errors import DimensionError, ParameterError


class Geometry(str, enum.Enum):
    GAUSSIAN_CLOUD = "gaussian"
    SPHERE = "sphere"
    DISK = "disk"
    CIRCLE = "circle"
    INTERVAL = "interval"
    SWISS_ROLL = "swissroll"


@dataclass(frozen=True)
class SampleSpec:
    """What to sample: ``n`` points of ``geometry`` placed in R^N.

    ``d`` is the intrinsic dimension for spheres and disks. Unless
    ``embed`` is false, manifold samples are rotated into R^N by a seeded
    random orthonormal frame; Gaussian clouds are drawn directly in R^N.
    """

    geometry: Geometry
    N: int
    n: int
    seed: int = 0
    d: int | None = None
    embed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "geometry", Geometry(self.geometry))
        if self.n < 1 or self.N < 1:
            raise ParameterError("need n >= 1 and N >= 1")
        if self.geometry in (Geometry.SPHERE, Geometry.DISK) and (self.d is None or self.d < 1):
            raise ParameterError(f"{self.geometry.value} needs an intrinsic dimension d >= 1")
        rng.check_seed(self.seed)

    @property
    def intrinsic_ambient(self) -> int:
        """Dimension of the coordinate space the geometry is first drawn in."""
        return {
            Geometry.GAUSSIAN_CLOUD: self.N,
            Geometry.SPHERE: (self.d or 0) + 1,
            Geometry.DISK: self.d or 0,
            Geometry.CIRCLE: 2,
            Geometry.INTERVAL: 1,
            Geometry.SWISS_ROLL: 3,
        }[self.geometry]

    def to_dict(self) -> dict:
        out = asdict(self)
        out["geometry"] = self.geometry.value
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "SampleSpec":
        try:
            return cls(Geometry(data["geometry"]), int(data["N"]), int(data["n"]), int(data.get("seed", 0)),
                       None if data.get("d") is None else int(data["d"]), bool(data.get("embed", True)))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ParameterError):
                raise
            raise ParameterError(f"malformed sample spec: {exc!r}") from None


def _unit_rows(gen: np.random.Generator, n: int, k: int) -> np.ndarray:
    g = gen.standard_normal((n, k))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def sample_intrinsic(spec: SampleSpec) -> np.ndarray:
    """Points on the nominal geometry in its own coordinates, before ambient placement."""
    gen = rng.stream(spec.seed, rng.POINTS)
    n = spec.n
    g = spec.geometry
    if g is Geometry.GAUSSIAN_CLOUD:
        return gen.standard_normal((n, spec.N))
    if g is Geometry.SPHERE:
        return _unit_rows(gen, n, spec.d + 1)
    if g is Geometry.CIRCLE:
        return _unit_rows(gen, n, 2)
    if g is Geometry.DISK:
        radius = gen.random(n) ** (1.0 / spec.d)
        return _unit_rows(gen, n, spec.d) * radius[:, None]
    if g is Geometry.INTERVAL:
        t = gen.random(n)
        if n >= 2:
            t[:2] = (0.0, 1.0)
        return t.reshape(-1, 1)
    # Swiss roll: jittered cells of a near-square grid over (t, h).
    side = math.ceil(math.sqrt(n))
    cell = np.arange(n)
    u = (cell % side + gen.random(n)) / side
    v = (cell // side + gen.random(n)) / side
    t = 1.5 * math.pi * (1.0 + 2.0 * u)
    h = 21.0 * v
    return np.column_stack([t * np.cos(t), h, t * np.sin(t)])


def orthonormal_frame(N: int, k: int, seed: int) -> np.ndarray:
    """``N x k`` matrix with orthonormal columns from the QR factorization of a Gaussian matrix."""
    if k > N:
        raise DimensionError(f"cannot place a {k}-dimensional coordinate space in R^{N}")
    q, r = np.linalg.qr(rng.stream(seed, rng.FRAME).standard_normal((N, k)))
    return q * np.sign(np.diag(r))


def sample(spec: SampleSpec) -> np.ndarray:
    """Draw ``spec.n`` points in R^N as an ``(n, N)`` array.

    Raises:
        DimensionError: the geometry does not fit in R^N.
    """
    k = spec.intrinsic_ambient
    if spec.geometry is not Geometry.GAUSSIAN_CLOUD and k > spec.N:
        raise DimensionError(f"{spec.geometry.value} needs ambient dimension >= {k}, got N={spec.N}")
    pts = sample_intrinsic(spec)
    if spec.geometry is Geometry.GAUSSIAN_CLOUD:
        return pts
    if not spec.embed:
        if k != spec.N:
            return np.hstack([pts, np.zeros((spec.n, spec.N - k))])
        return pts
    return pts @ orthonormal_frame(spec.N, k, spec.seed).T


def descriptor_for(spec: SampleSpec | Geometry, d: int | None = None,
                   N: int | None = None) -> geometry.ManifoldDescriptor | None:
    """Catalog descriptor matching a sampler, or ``None`` when no reach is certified."""
    if isinstance(spec, SampleSpec):
        g, d, N = spec.geometry, spec.d, spec.N
    else:
        g = Geometry(spec)
    if g is Geometry.SPHERE:
        return geometry.sphere(d, N)
    if g is Geometry.DISK:
        return geometry.disk(d, N)
    if g is Geometry.CIRCLE:
        return geometry.circle(N or 2)
    if g is Geometry.INTERVAL:
        return geometry.interval(N or 1)
    return None


MAGIC = b"SECSKPT1"
_HEADER = struct.Struct("<8sQQ")


def write_points(path: str | Path, points) -> None:
    """Binary format: 8-byte magic, uint64 N, uint64 n, then ``n*N`` little-endian float64 row-major."""
    pts = np.ascontiguousarray(points, dtype="<f8")
    if pts.ndim != 2:
        raise ParameterError("points must be a 2-D array")
    n, N = pts.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, N, n))
        fh.write(pts.tobytes())


def read_points(path: str | Path) -> np.ndarray:
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise ParameterError(f"{path}: truncated header")
        magic, N, n = _HEADER.unpack(head)
        if magic != MAGIC:
            raise ParameterError(f"{path}: not a point-set file")
        data = np.frombuffer(fh.read(), dtype="<f8")
    if data.size != n * N:
        raise ParameterError(f"{path}: expected {n * N} values, found {data.size}")
    return data.reshape(n, N).astype(np.float64)


def write_points_csv(path: str | Path, points) -> None:
    np.savetxt(path, np.atleast_2d(points), delimiter=",", fmt="%.17g")


def read_points_csv(path: str | Path) -> np.ndarray:
    return np.atleast_2d(np.loadtxt(path, delimiter=",", dtype=np.float64))


def load_points(path: str | Path) -> np.ndarray:
    """Read a point set, choosing the format by extension (``.csv`` or binary)."""
    return read_points_csv(path) if str(path).lower().endswith(".csv") else read_points(path)


def save_points(path: str | Path, points) -> None:
    if str(path).lower().endswith(".csv"):
        write_points_csv(path, points)
    else:
        write_points(path, points)


def spec_to_json(spec: SampleSpec) -> str:
    return json.dumps(spec.to_dict(), sort_keys=True)
