"""Command-line entry point: ``secant-sketch <subcommand> [options]``.

Exit codes: 0 success, 2 usage error, 3 guard or check violation,
4 infeasible bound (``--warn-infeasible`` downgrades it to a warning).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import bench, bounds, datasets, geometry, operators, rng, verify
from .errors import SketchError, TooLarge, TooManySupports

EXIT_OK, EXIT_USAGE, EXIT_GUARD, EXIT_INFEASIBLE = 0, 2, 3, 4

THEOREM_ALIASES = {
    "1.3": bounds.TheoremId.SUBGAUSSIAN,
    "1.4": bounds.TheoremId.SORS,
    "1.5": bounds.TheoremId.BLOCK,
    "3.2": bounds.TheoremId.FAST_FINITE,
    "3.5": bounds.TheoremId.FAST_SUBSPACE,
    "3.8": bounds.TheoremId.FAST_RIP,
    "3.9": bounds.TheoremId.FAST_MRIP,
    "3.10": bounds.TheoremId.FAST_INFINITE,
}
THEOREM_CHOICES = sorted(THEOREM_ALIASES) + [t.value for t in bounds.TheoremId]


class UsageError(Exception):
    pass


def _load_json_arg(value: str) -> dict:
    """Accept inline JSON or a path to a JSON file."""
    text = value.strip()
    if not text.startswith("{"):
        path = Path(value)
        if not path.exists():
            raise UsageError(f"{value!r} is neither inline JSON nor an existing file")
        text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}") from None


def _emit(args, payload) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _merge_config(args, defaults: dict) -> dict:
    """CLI flags override the JSON config file, which overrides ``defaults``."""
    config = _load_json_arg(args.config) if args.config else {}
    merged = dict(defaults)
    merged.update({k: v for k, v in config.items()})
    for key in defaults:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def cmd_bench(args) -> int:
    defaults = bench.BenchConfig().to_dict()
    raw = _merge_config(args, defaults)
    if args.no_timing:
        raw["timing"] = False
    raw["threads"] = args.threads or raw.get("threads", 1)
    config = bench.BenchConfig.from_dict(raw).validate()
    rows = bench.run(config)
    text = bench.to_csv(rows, timing=config.timing, threads=config.threads)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _theorem(value: str) -> bounds.TheoremId:
    if value in THEOREM_ALIASES:
        return THEOREM_ALIASES[value]
    return bounds.TheoremId(value)


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"--thm {args.thm} needs {', '.join('--' + m for m in missing)}")


def cmd_bounds(args) -> int:
    reg = bounds.get_profile(args.constants_profile)
    if args.set:
        updates = {}
        for item in args.set:
            key, _, value = item.partition("=")
            updates[key] = float(value)
        reg = reg.replace(**updates)
    if args.manifold is not None and args.beta is None:
        desc = geometry.catalog(args.manifold) if not args.manifold.strip().startswith("{") \
            else geometry.ManifoldDescriptor.from_dict(_load_json_arg(args.manifold))
        args.beta = geometry.secant_alpha(desc).beta
    tid = _theorem(args.thm)
    T = bounds.TheoremId
    if tid is T.SUBGAUSSIAN:
        _need(args, "beta", "eps", "p")
        report = bounds.m_subgaussian(args.beta, args.eps, args.p, reg)
    elif tid is T.SORS:
        _need(args, "beta", "eps", "p", "N")
        report = bounds.m_sors(args.beta, args.eps, args.p, args.N, args.K, reg)
    elif tid is T.BLOCK:
        _need(args, "beta", "eps", "p", "N")
        report = bounds.m_block(args.beta, args.eps, args.p, args.N, args.K, reg)
    elif tid is T.FINITE_SUBGAUSSIAN:
        _need(args, "card", "eps", "p")
        report = bounds.m_finite_subgaussian(args.card, args.eps, args.p, reg)
    elif tid is T.FINITE_SORS:
        _need(args, "card", "eps", "p", "N")
        report = bounds.m_finite_sors(args.card, args.eps, args.p, args.N, args.K, reg)
    elif tid is T.SOB_RIP:
        _need(args, "s", "eps", "p", "N")
        report = bounds.m_sob_rip(args.s, args.eps, args.p, args.N, args.K, reg)
    elif tid is T.SOB_MRIP:
        _need(args, "s", "eps", "p", "N")
        report = bounds.m_sob_mrip(args.s, args.eps, args.p, args.N, args.K, reg)
    elif tid is T.MRIP:
        _need(args, "s", "eps", "p", "N")

        def rip(s, e, q):
            return bounds.m_sob_rip(s, e, q, args.N, args.K, reg)
        report = bounds.m_mrip(rip, args.s, args.eps, args.p, args.N, args.a, reg)
    elif tid is T.FAST_FINITE:
        _need(args, "card", "eps", "p", "N")
        report = bounds.m_fast_finite(args.card, args.eps, args.p, args.N, args.K, reg)
    elif tid is T.FAST_SUBSPACE:
        _need(args, "d", "eps", "p", "N")
        report = bounds.m_fast_subspace(args.d, args.eps, args.p, args.N, reg)
    elif tid is T.FAST_RIP:
        _need(args, "s", "eps", "p", "N")
        report = bounds.m_fast_rip(args.s, args.eps, args.p, args.N, reg)
    elif tid is T.FAST_MRIP:
        _need(args, "s", "eps", "p", "N")
        report = bounds.m_fast_mrip(args.s, args.eps, args.p, args.N, reg)
    else:
        _need(args, "width", "eps", "p", "N")
        report = bounds.m_fast_infinite(args.width, args.eps, args.p, args.N, args.K, reg)
    _emit(args, report.to_dict())
    status = "feasible" if report.feasible else f"INFEASIBLE ({report.feasibility_reason})"
    print(f"{report.theorem_id.value}: m_required={report.m_required:.6g}, {status}", file=sys.stderr)
    if not report.feasible and not args.warn_infeasible:
        return EXIT_INFEASIBLE
    return EXIT_OK


def _load_points(args) -> np.ndarray:
    if args.points:
        return datasets.load_points(args.points)
    if args.dataset:
        return datasets.sample(datasets.SampleSpec.from_dict(_load_json_arg(args.dataset)))
    raise UsageError("give --dataset or --points")


def _operator(args, record: dict | None = None) -> operators.LinearOperator:
    record = record if record is not None else _load_json_arg(args.operator)
    return operators.from_dict(record, workers=args.threads or 1)


def _dense_report(matrix: np.ndarray, pts: np.ndarray) -> verify.DistortionReport:
    i, j = np.triu_indices(pts.shape[0], k=1)
    diffs = pts[i] - pts[j]
    base = np.linalg.norm(diffs, axis=1)
    keep = base > 0
    ratios = np.linalg.norm(diffs[keep] @ matrix.T, axis=1) / base[keep]
    return verify._summarize([ratios], "secants", True)


def cmd_distort(args) -> int:
    op = _operator(args)
    pts = _load_points(args)
    report = verify.distortion(op, pts, mode=args.mode, seed=args.seed or 0)
    payload = report.to_dict()
    if args.eps is not None:
        payload["jl_verdict"] = report.max_sq_err <= args.eps
        payload["epsilon"] = args.eps
    if args.oracle:
        if args.mode != "secants" or pts.shape[0] > verify.EXACT_PAIR_LIMIT:
            raise UsageError("--oracle compares exact secant reports only")
        dense = _dense_report(operators.materialize(op), pts)
        payload["oracle"] = dense.to_dict()
        payload["oracle_max_abs_diff"] = max(abs(dense.max_sq_err - report.max_sq_err),
                                             abs(dense.max_norm_rel_err - report.max_norm_rel_err))
    _emit(args, payload)
    return EXIT_OK


def cmd_rip(args) -> int:
    record = _load_json_arg(args.operator)
    if args.trials is None:
        _emit(args, verify.ric_bruteforce(_operator(args, record), args.s).to_dict())
        return EXIT_OK
    if args.eps is None:
        raise UsageError("--trials needs --eps")

    def factory(seed: int):
        return _operator(args, {**record, "seed": seed})
    base = args.seed if args.seed is not None else int(record.get("seed", 0))
    rate, (lo, hi) = verify.success_probability(factory, args.s, args.eps, args.trials, seed=base)
    _emit(args, {"s": args.s, "epsilon": args.eps, "trials": args.trials, "rate": rate,
                 "wilson_low": lo, "wilson_high": hi, "operator": record})
    return EXIT_OK


_SAMPLERS = {
    "circle": lambda d: (datasets.Geometry.CIRCLE, None),
    "interval": lambda d: (datasets.Geometry.INTERVAL, None),
    "sphere": lambda d: (datasets.Geometry.SPHERE, d),
    "disk": lambda d: (datasets.Geometry.DISK, d),
}


def _sampler_for(name: str):
    key = name.strip().lower().rstrip("0123456789")
    if key not in _SAMPLERS:
        return None
    return _SAMPLERS[key]


def cmd_cover(args) -> int:
    if args.manifold.strip().startswith("{") or Path(args.manifold).exists():
        desc = geometry.ManifoldDescriptor.from_dict(_load_json_arg(args.manifold))
    else:
        desc = geometry.catalog(args.manifold)
    sampler = _sampler_for(desc.name)
    points = None
    if args.empirical:
        if sampler is None:
            raise UsageError(f"no sampler for {desc.name}; --empirical needs a catalog geometry")
        g, d = sampler(desc.d)
        spec = datasets.SampleSpec(g, desc.N, args.samples, args.seed or 0, d)
        points = datasets.sample(spec)
    results, all_dominated = [], True
    for eps in args.eps:
        bound = geometry.cover_bound(desc, eps)
        entry = {"epsilon": eps, "cover": bound.count, "log_cover": bound.log_count,
                 "cover_formula": bound.formula_id}
        if bound.terms:
            entry["cover_terms"] = {"interior": math.exp(bound.terms[0]), "boundary": math.exp(bound.terms[1])}
        try:
            if math.isinf(desc.reach) or desc.d == 0:
                sec = geometry.secant_cover_special(desc, eps)
            else:
                sec = geometry.secant_cover(desc, eps)
                sa = geometry.secant_alpha(desc)
                entry.update(alpha=sa.alpha, beta=sa.beta)
            entry.update(secant_cover=sec.count, secant_formula=sec.formula_id)
        except SketchError as exc:
            entry["secant_cover"] = None
            entry["secant_note"] = str(exc)
        try:
            entry["width_bound"] = geometry.secant_width_bound(desc)
        except SketchError as exc:
            entry["width_bound"] = None
            entry["width_note"] = str(exc)
        if points is not None:
            _, size = verify.greedy_cover(points, eps)
            entry["greedy_cover"] = size
            entry["dominated"] = size <= bound.count
            all_dominated &= entry["dominated"]
        results.append(entry)
    _emit(args, {"manifold": desc.to_dict(), "results": results})
    return EXIT_OK if all_dominated else EXIT_GUARD


def cmd_sample(args) -> int:
    if args.spec:
        spec = datasets.SampleSpec.from_dict(_load_json_arg(args.spec))
    else:
        if args.geometry is None or args.N is None or args.n is None:
            raise UsageError("give --spec, or --geometry with --N and --n")
        spec = datasets.SampleSpec(datasets.Geometry(args.geometry), args.N, args.n, args.seed or 0, args.d)
    if not args.out:
        raise UsageError("sample needs --out")
    datasets.save_points(args.out, datasets.sample(spec))
    return EXIT_OK


def _seed(value: str) -> int:
    try:
        return rng.check_seed(int(value, 0))
    except (ValueError, SketchError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(value: str) -> list[int]:
    return [int(v, 0) for v in value.split(",") if v]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=None, help="root seed (64-bit)")
    common.add_argument("--config", default=None, help="JSON config file or inline JSON")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--threads", type=int, default=None, help="worker threads")
    common.add_argument("--constants-profile", choices=sorted(bounds.PROFILES), default="unit")

    parser = argparse.ArgumentParser(prog="secant-sketch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bench", parents=[common], help="compare families on Gaussian point sets (CSV)")
    p.add_argument("--N", type=_int_list, default=None, help="comma-separated ambient dimensions")
    p.add_argument("--methods", type=lambda v: v.split(","), default=None)
    p.add_argument("--m", type=int, default=None, help="fixed row count (default: m-fraction * N)")
    p.add_argument("--m-fraction", dest="m_fraction", type=float, default=None)
    p.add_argument("--m1", type=int, default=None, help="block inner dimension (default floor(sqrt(N)))")
    p.add_argument("--n", type=int, default=None, help="vectors per set")
    p.add_argument("--reps", type=int, default=None)
    p.add_argument("--transform", default=None)
    p.add_argument("--dist", default=None)
    p.add_argument("--no-timing", action="store_true", help="omit timing columns")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("bounds", parents=[common], help="evaluate an embedding-dimension bound (JSON)")
    p.add_argument("--thm", required=True, choices=THEOREM_CHOICES)
    for name, kind in (("beta", float), ("eps", float), ("p", float), ("N", int), ("K", float),
                       ("card", int), ("s", int), ("d", int), ("width", float)):
        p.add_argument(f"--{name}", type=kind, default=None)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--manifold", default=None, help="catalog name or descriptor JSON; supplies beta")
    p.add_argument("--set", action="append", metavar="NAME=VALUE", help="override one constant")
    p.add_argument("--warn-infeasible", action="store_true", help="exit 0 on infeasible bounds")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("distort", parents=[common], help="distortion report of an operator (JSON)")
    p.add_argument("--operator", required=True, help="operator JSON (inline or file)")
    p.add_argument("--dataset", default=None, help="sample spec JSON (inline or file)")
    p.add_argument("--points", default=None, help="point-set file (.csv or binary)")
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--mode", choices=("secants", "points"), default="secants")
    p.add_argument("--oracle", action="store_true", help="also evaluate through the dense matrix")
    p.set_defaults(func=cmd_distort)

    p = sub.add_parser("rip", parents=[common], help="brute-force restricted isometry constants (JSON)")
    p.add_argument("--operator", required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.set_defaults(func=cmd_rip)

    p = sub.add_parser("cover", parents=[common], help="covering and width bounds for a manifold (JSON)")
    p.add_argument("manifold", help="catalog name (sphere<d>, disk<d>, circle, interval, annulus) or descriptor JSON")
    p.add_argument("--eps", type=float, nargs="+", required=True)
    p.add_argument("--empirical", action="store_true", help="add greedy covers of a sample")
    p.add_argument("--samples", type=int, default=5000)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("sample", parents=[common], help="write a sampled point set")
    p.add_argument("--spec", default=None, help="sample spec JSON (inline or file)")
    p.add_argument("--geometry", choices=[g.value for g in datasets.Geometry], default=None)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TooManySupports, TooLarge) as exc:
        print(f"guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except SketchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
