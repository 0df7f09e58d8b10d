"""Command-line front end: ``umccev {cluster,synth,eval,sweep}``."""
import argparse
import dataclasses
import itertools
import sys
import time
from pathlib import Path

import numpy as np

from . import metrics
from .clustering import spectral_cluster
from .datasets import (
    SynthSpec,
    atomic_write_text,
    format_matrix,
    load_labels,
    load_manifest,
    parse_key_values,
    save_dataset,
    save_labels,
    synth_multiview,
)
from .errors import InvalidInputError, UmcCevError
from .solver import SolverConfig, Variant, affinity, run

#: Decade ladder used for the lambda sensitivity sweeps.
LAMBDA_LADDER = (2e-5, 2e-4, 2e-3, 2e-2, 2e-1, 2.0, 2e1, 2e2, 2e3)

_CONFIG_TYPES = {f.name: f.type for f in dataclasses.fields(SolverConfig)}


def derived_seeds(seed, repeats):
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(repeats)]


def load_config_file(path):
    """``key = value`` lines naming :class:`SolverConfig` fields."""
    raw = parse_key_values(path, repeatable=())
    out = {}
    for key, value in raw.items():
        if key not in _CONFIG_TYPES:
            raise InvalidInputError(f"{path}: unknown config key {key!r}")
        out[key] = _coerce(key, value)
    return out


def _coerce(key, value):
    if key in ("max_iter", "knn_k", "seed"):
        return int(value)
    if key == "printed_updates":
        if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
            raise InvalidInputError(f"printed_updates must be a boolean, got {value!r}")
        return value.lower() in ("true", "1", "yes")
    if key == "variant":
        return Variant(value)
    return float(value)


def build_config(args):
    """Defaults < config file < command-line flags."""
    values = {}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    flags = {
        "lambda1": args.lambda1, "lambda2": args.lambda2, "lambda3": args.lambda3,
        "eta": args.eta, "gamma": args.gamma, "max_iter": args.max_iter, "tol": args.tol,
        "variant": args.variant, "knn_k": args.knn_k, "seed": args.seed,
    }
    values.update({k: v for k, v in flags.items() if v is not None})
    if args.printed_updates:
        values["printed_updates"] = True
    return SolverConfig(**values)


def cluster_dataset(data, cfg, repeats, seed):
    """Solve once, then run the seeded spectral clustering ``repeats`` times.

    The solver itself is deterministic, so repeats differ only in the k-means
    seeds used by the final clustering.
    """
    if repeats < 1:
        raise InvalidInputError("repeats must be at least 1")
    t0 = time.perf_counter()
    state, trace = run(data, cfg)
    A = affinity(state, cfg)
    seeds = derived_seeds(seed, repeats)
    labels = [spectral_cluster(A, data.c, seed=s) for s in seeds]
    scores = None
    if data.labels is not None:
        scores = [metrics.evaluate(lab, data.labels) for lab in labels]
    return {
        "state": state, "trace": trace, "affinity": A, "labels": labels, "seeds": seeds,
        "scores": scores, "wall_time": time.perf_counter() - t0,
    }


def summarize(scores):
    """Per metric: ``(values, mean, std)`` with population std (0 for one repeat)."""
    out = {}
    for name in metrics.METRIC_NAMES:
        vals = np.array([s[name] for s in scores])
        out[name] = (vals, float(vals.mean()), float(vals.std()))
    return out


def _fmt(x):
    return f"{x:.17g}"


def format_report(data, cfg, result, manifest, artifacts):
    lines = [
        f"manifest = {manifest}",
        f"samples = {data.n}",
        f"views = {data.n_views}",
        f"clusters = {data.c}",
        f"repeats = {len(result['labels'])}",
        f"seeds = {','.join(map(str, result['seeds']))}",
    ]
    for f in dataclasses.fields(SolverConfig):
        val = getattr(cfg, f.name)
        lines.append(f"config.{f.name} = {val.value if isinstance(val, Variant) else val}")
    trace = result["trace"]
    lines.append(f"iterations = {len(trace)}")
    if len(trace):
        last = len(trace) - 1
        lines.append(f"final.max_residual = {_fmt(trace.max_residual(last))}")
        lines.append(f"final.objective = {_fmt(trace.objective[last])}")
    lines.append(f"wall_time_s = {result['wall_time']:.3f}")
    if result["scores"] is not None:
        for name, (vals, mean, std) in summarize(result["scores"]).items():
            lines.append(f"metric.{name}.values = {','.join(_fmt(v) for v in vals)}")
            lines.append(f"metric.{name}.mean = {_fmt(mean)}")
            lines.append(f"metric.{name}.std = {_fmt(std)}")
    for key, val in artifacts.items():
        lines.append(f"artifact.{key} = {val}")
    return "\n".join(lines) + "\n"


def parse_report(path):
    """Read a report back into a flat ``{key: str}`` dict."""
    return parse_key_values(path, repeatable=())


def cmd_cluster(args):
    data = load_manifest(args.manifest)
    cfg = build_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    result = cluster_dataset(data, cfg, args.repeats, args.seed if args.seed is not None else 0)
    label_files = []
    for i, lab in enumerate(result["labels"]):
        name = f"labels_{i:03d}.txt"
        save_labels(lab, out / name)
        label_files.append(name)
    atomic_write_text(out / "affinity.csv", format_matrix(result["affinity"]))
    atomic_write_text(out / "trace.csv", result["trace"].to_csv())
    artifacts = {"labels": ",".join(label_files), "affinity": "affinity.csv", "trace": "trace.csv",
                 "report": "report.txt"}
    report = format_report(data, cfg, result, args.manifest, artifacts)
    atomic_write_text(out / "report.txt", report)
    if result["scores"] is not None:
        for name, (_, mean, std) in summarize(result["scores"]).items():
            print(f"{name} = {mean:.4f} +- {std:.4f}")
    print(f"wrote {out / 'report.txt'}")
    return 0


def cmd_synth(args):
    spec = SynthSpec(
        clusters=args.clusters, samples_per_cluster=args.per_cluster,
        ambient_dims=tuple(int(x) for x in args.dims.split(",")),
        subspace_dim=args.subspace_dim, noise_sigma=args.noise, seed=args.seed,
    )
    manifest = save_dataset(synth_multiview(spec), args.out, prefix=args.prefix)
    print(manifest)
    return 0


def cmd_eval(args):
    pred, truth = load_labels(args.pred), load_labels(args.truth)
    if pred.size != truth.size:
        raise InvalidInputError(f"{args.pred} has {pred.size} labels, {args.truth} has {truth.size}")
    for name, val in metrics.evaluate(pred, truth).items():
        print(f"{name} = {_fmt(val)}")
    return 0


def _parse_grid(specs, ladder):
    grid = {}
    for spec in specs or []:
        if "=" not in spec:
            raise InvalidInputError(f"grid entry must look like name=v1,v2,..., got {spec!r}")
        name, vals = spec.split("=", 1)
        name = name.strip()
        if name not in ("lambda1", "lambda2", "lambda3"):
            raise InvalidInputError(f"sweepable parameters are lambda1, lambda2, lambda3; got {name!r}")
        grid[name] = [float(v) for v in vals.split(",") if v.strip()]
    for name in ladder or []:
        grid[name] = list(LAMBDA_LADDER)
    if not grid:
        raise InvalidInputError("empty sweep grid; use --grid or --ladder")
    return grid


def cmd_sweep(args):
    data = load_manifest(args.manifest)
    base = build_config(args)
    grid = _parse_grid(args.grid, args.ladder)
    names = list(grid)
    seed = args.seed if args.seed is not None else 0
    header = names + ["iterations"] + [f"{m}_{s}" for m in metrics.METRIC_NAMES for s in ("mean", "std")]
    rows = [",".join(header)]
    for point in itertools.product(*(grid[n] for n in names)):
        cfg = dataclasses.replace(base, **dict(zip(names, point)))
        result = cluster_dataset(data, cfg, args.repeats, seed)
        cells = [_fmt(v) for v in point] + [str(len(result["trace"]))]
        if result["scores"] is None:
            raise InvalidInputError("sweep needs ground-truth labels in the manifest")
        for _, (_, mean, std) in summarize(result["scores"]).items():
            cells += [_fmt(mean), _fmt(std)]
        rows.append(",".join(cells))
        print(" ".join(f"{n}={v:g}" for n, v in zip(names, point)),
              f"acc={np.mean([s['acc'] for s in result['scores']]):.4f}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    atomic_write_text(out / "sweep.csv", "\n".join(rows) + "\n")
    print(f"wrote {out / 'sweep.csv'}")
    return 0


def _solver_flags(p):
    p.add_argument("--manifest", required=True)
    p.add_argument("--config", help="key = value file of solver settings")
    p.add_argument("--lambda1", type=float)
    p.add_argument("--lambda2", type=float)
    p.add_argument("--lambda3", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--variant", choices=[v.value for v in Variant])
    p.add_argument("--knn-k", type=int)
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-iter", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--printed-updates", action="store_true",
                   help="alternative Z/U update forms, for comparison runs only")
    p.add_argument("--out", required=True)


def build_parser():
    parser = argparse.ArgumentParser(prog="umccev", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="run the solver and spectral clustering on a dataset")
    _solver_flags(p)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("synth", help="write a synthetic union-of-subspaces dataset")
    p.add_argument("--clusters", type=int, default=3)
    p.add_argument("--per-cluster", type=int, default=20)
    p.add_argument("--dims", default="10,15", help="comma-separated ambient dimension per view")
    p.add_argument("--subspace-dim", type=int, default=3)
    p.add_argument("--noise", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prefix", default="synth")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("eval", help="score a label file against ground truth")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="grid over lambda1/lambda2/lambda3")
    _solver_flags(p)
    p.add_argument("--grid", action="append", metavar="NAME=V1,V2,...")
    p.add_argument("--ladder", action="append", choices=["lambda1", "lambda2", "lambda3"],
                   help="sweep NAME over the decade ladder 2e-5 ... 2e3")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UmcCevError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
