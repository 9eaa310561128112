"""Accuracy and speed comparison of embedding families on Gaussian point sets.

For every ambient dimension ``N`` and repetition, one set of ``n`` standard
Gaussian vectors is drawn and mapped by a freshly seeded operator of each
requested family; the largest relative norm error over the set and the
wall time of the batched apply are recorded.
"""

from __future__ import annotations

import csv
import io
import math
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields

from . import rng
from .datasets import Geometry, SampleSpec, sample
from .errors import ParameterError
from .operators import BlockParams, Dist, SorsParams, make_block, make_sors, make_subgaussian
from .transforms import TransformKind, is_power_of_two
from .verify import distortion_from_images

CSV_VERSION = 1
METHODS = ("sors", "block", "subgaussian")
_METHOD_CODE = {"sors": 1, "block": 2, "subgaussian": 3}


@dataclass
class BenchConfig:
    N: list[int] = field(default_factory=lambda: [2**10, 2**12, 2**14])
    methods: list[str] = field(default_factory=lambda: ["sors", "block"])
    m: int | None = None
    m_fraction: float = 0.25
    m1: int | None = None
    n: int = 100
    reps: int = 100
    seed: int = 0
    transform: str = "dct2"
    dist: str = "rademacher"
    threads: int = 1
    timing: bool = True

    def validate(self) -> "BenchConfig":
        if not self.N or any(int(v) < 2 for v in self.N):
            raise ParameterError("N must be a nonempty list of integers >= 2")
        bad = [m for m in self.methods if m not in METHODS]
        if bad or not self.methods:
            raise ParameterError(f"unknown methods {bad}; choose from {METHODS}")
        if self.m is not None and self.m < 1:
            raise ParameterError("m must be positive")
        if not 0 < self.m_fraction <= 1:
            raise ParameterError("m_fraction must lie in (0, 1]")
        if self.n < 1 or self.reps < 1 or self.threads < 1:
            raise ParameterError("n, reps and threads must be positive")
        TransformKind.parse(self.transform)
        Dist.parse(self.dist)
        rng.check_seed(self.seed)
        return self

    @classmethod
    def from_dict(cls, data: dict) -> "BenchConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ParameterError(f"unknown bench config keys {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)


def rows_for(config: BenchConfig, N: int) -> int:
    return config.m if config.m is not None else max(1, int(N * config.m_fraction))


def block_m1_for(config: BenchConfig, N: int) -> int:
    """``floor(sqrt(N))``, lowered to a power of two when the inner transform needs one."""
    if config.m1 is not None:
        return config.m1
    m1 = math.isqrt(N)
    if TransformKind.parse(config.transform) is TransformKind.HADAMARD:
        while not is_power_of_two(m1 * m1):
            m1 -= 1
    return m1


def build_operator(config: BenchConfig, method: str, N: int, seed: int):
    m = rows_for(config, N)
    kind = TransformKind.parse(config.transform)
    if method == "sors":
        return make_sors(SorsParams(N, m, kind, seed))
    if method == "block":
        m1 = block_m1_for(config, N)
        # The bench keeps m fixed across families, so m may exceed m1 here.
        return make_block(BlockParams(N, m1, m, kind, Dist.parse(config.dist), seed,
                                      require_m1_ge_m2=False))
    return make_subgaussian(m, N, Dist.parse(config.dist), seed)


@dataclass(frozen=True)
class BenchRow:
    N: int
    method: str
    m: int
    m1: int | None
    rep: int
    seed: int
    time_ns: int
    max_rel_err: float


def _run_one(config: BenchConfig, N: int, method: str, rep: int, n_index: int) -> BenchRow:
    rep_seed = rng.child_seed(rng.child_seed(config.seed, n_index), rep)
    points = sample(SampleSpec(Geometry.GAUSSIAN_CLOUD, N, config.n, rep_seed))
    op_seed = rng.child_seed(rep_seed, _METHOD_CODE[method])
    op = build_operator(config, method, N, op_seed)
    start = time.perf_counter_ns()
    images = op.apply(points)
    elapsed = time.perf_counter_ns() - start
    report = distortion_from_images(images, points)
    m1 = op.m1 if method == "block" else None
    return BenchRow(N, method, op.rows, m1, rep, op_seed, elapsed, report.max_norm_rel_err)


def run(config: BenchConfig) -> list[BenchRow]:
    """Execute the benchmark; rows come back in (N, method, rep) order regardless of threading."""
    config.validate()
    rows: list[BenchRow] = []
    for n_index, N in enumerate(config.N):
        for method in config.methods:
            warm = build_operator(config, method, N, config.seed)
            warm.apply(sample(SampleSpec(Geometry.GAUSSIAN_CLOUD, N, config.n, config.seed)))
            jobs = [(config, N, method, rep, n_index) for rep in range(config.reps)]
            if config.threads == 1:
                rows.extend(_run_one(*job) for job in jobs)
            else:
                with ThreadPoolExecutor(max_workers=config.threads) as pool:
                    rows.extend(pool.map(lambda job: _run_one(*job), jobs))
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_csv(rows: list[BenchRow], timing: bool = True, threads: int = 1) -> str:
    """Detail rows followed by one aggregate row per (N, method) with ``rep`` set to ``agg``."""
    buf = io.StringIO()
    buf.write(f"# secant-sketch v{CSV_VERSION}\n")
    buf.write(f"# threads={threads}\n")
    header = ["N", "method", "m", "m1", "rep", "seed", "time_ns", "max_rel_err",
              "time_ns_median", "time_ns_std", "max_rel_err_std"]
    if not timing:
        header = [h for h in header if not h.startswith("time_ns")]
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)

    def emit(record: dict):
        writer.writerow([_fmt(record.get(h)) for h in header])

    groups: dict[tuple[int, str], list[BenchRow]] = {}
    for row in rows:
        emit(asdict(row))
        groups.setdefault((row.N, row.method), []).append(row)
    for (N, method), group in groups.items():
        errs = [r.max_rel_err for r in group]
        times = [r.time_ns for r in group]
        spread = len(group) > 1
        emit({"N": N, "method": method, "m": group[0].m, "m1": group[0].m1, "rep": "agg", "seed": None,
              "time_ns": statistics.fmean(times), "max_rel_err": statistics.fmean(errs),
              "time_ns_median": float(statistics.median(times)),
              "time_ns_std": statistics.stdev(times) if spread else 0.0,
              "max_rel_err_std": statistics.stdev(errs) if spread else 0.0})
    return buf.getvalue()


def summarize(rows: list[BenchRow]) -> dict[tuple[int, str], float]:
    """Mean max relative error per (N, method)."""
    groups: dict[tuple[int, str], list[float]] = {}
    for row in rows:
        groups.setdefault((row.N, row.method), []).append(row.max_rel_err)
    return {key: statistics.fmean(v) for key, v in groups.items()}
