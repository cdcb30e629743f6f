"""``mlspectral`` command line: gen, cluster, eval, spectrum.

Every command prints one JSON document (to stdout or ``--output``). Library
errors exit with status 1 and a single ``mlspectral: error: ...`` line on
stderr; bad invocations exit with status 2.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .baselines import kernel_kmeans_sum, sc_al, sc_sum
from .exceptions import LengthMismatch, MLSpectralError
from .ged import GedSolverConfig, cluster_ged, resolve_init_layer
from .graph import MultiLayerGraph, load_labels, load_layer, save_labels, save_layer
from .metrics import confusion_matrix, evaluate
from .spectral import KMeansConfig, decompose, spectral_cluster
from .sr import SrConfig, solve_sr
from .synth import LayerSpec, MsbmConfig, complementary_pair, generate

METHODS = ("sc", "sc-ged", "sc-sr", "sc-sum", "sc-sum-norm", "k-kmeans", "sc-al")


class UsageError(Exception):
    pass


def _float_list(text):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _init_layer(text):
    if text == "auto":
        return text
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a layer index or 'auto', got {text!r}")


def _infer_n(paths):
    top = -1
    for path in paths:
        with Path(path).open("r", encoding="utf-8") as fh:
            for raw in fh:
                parts = raw.split()
                if len(parts) >= 2 and not parts[0].startswith("#"):
                    try:
                        top = max(top, int(parts[0]), int(parts[1]))
                    except ValueError:
                        pass  # load_layer reports the bad line
    if top < 0:
        raise MLSpectralError(f"cannot infer the vertex count from {', '.join(map(str, paths))}; pass --n")
    return top + 1


def _emit(doc, output):
    text = json.dumps(doc, indent=2) + "\n"
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _ms(t0):
    return round((time.perf_counter() - t0) * 1000.0, 3)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_gen(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.family == "complementary":
        mlg, truth = complementary_pair(args.n, args.k, args.seed, args.p_in, args.p_pair,
                                        args.p_out, args.weights)
        params = {"p_in": args.p_in, "p_pair": args.p_pair, "p_out": args.p_out}
    else:
        specs = [LayerSpec(args.p_in, args.p_out)] * args.layers
        specs += [LayerSpec(args.p_in, args.p_out, informative=False)] * args.noise_layers
        mlg, truth = generate(MsbmConfig(args.n, args.k, tuple(specs), weight_mode=args.weights,
                                         poisson_mean=args.poisson_mean, seed=args.seed))
        params = {"p_in": args.p_in, "p_out": args.p_out, "layers": args.layers,
                  "noise_layers": args.noise_layers}
    paths = []
    for i, g in enumerate(mlg):
        p = out / f"layer{i}.edges"
        save_layer(g, p)
        paths.append(str(p))
    labels_path = out / "labels.txt"
    save_labels(truth, labels_path)
    params["weights"] = args.weights
    return {"command": "gen", "family": args.family, "n": mlg.n, "k": args.k, "seed": args.seed,
            "params": params, "layers": paths, "labels": str(labels_path)}


def _check_cluster_args(args, paths):
    if not paths:
        raise UsageError("cluster needs at least one --layer/--layers file")
    if args.k < 1:
        raise UsageError("--k must be positive")
    if args.method == "sc" and len(paths) != 1:
        raise UsageError("--method sc takes exactly one layer")
    if args.method != "sc-ged" and (args.alpha is not None or args.beta is not None):
        raise UsageError("--alpha/--beta only apply to sc-ged")
    if args.method != "sc-sr" and (args.lambda_schedule or args.order):
        raise UsageError("--lambda/--order only apply to sc-sr")
    if args.method != "k-kmeans" and args.d is not None:
        raise UsageError("--d only applies to k-kmeans")
    if args.restarts < 1:
        raise UsageError("--restarts must be positive")


def cmd_cluster(args):
    paths = list(args.layer or []) + list(args.layers or [])
    _check_cluster_args(args, paths)
    t_all = time.perf_counter()
    n = args.n if args.n is not None else _infer_n(paths)
    if args.k > n:
        raise UsageError(f"--k {args.k} exceeds the vertex count {n}")
    mlg = MultiLayerGraph(tuple(load_layer(p, n) for p in paths))
    load_ms = _ms(t_all)

    km = KMeansConfig(restarts=args.restarts, seed=args.seed)
    params = {"restarts": args.restarts, "layers": paths}
    t0 = time.perf_counter()
    m = args.method
    if m == "sc":
        labels = spectral_cluster(mlg[0], args.k, km)
    elif m == "sc-ged":
        alpha = 10.0 if args.alpha is None else args.alpha
        beta = 100.0 if args.beta is None else args.beta
        init = resolve_init_layer(mlg, 0 if args.init_layer is None else args.init_layer)
        labels = cluster_ged(mlg, args.k, GedSolverConfig(init_layer=init), km, alpha, beta)
        params.update(alpha=alpha, beta=beta, init_layer=init)
    elif m == "sc-sr":
        order = args.order
        if not order and args.init_layer is not None:
            order = (resolve_init_layer(mlg, args.init_layer),)
        res = solve_sr(mlg, args.k, SrConfig(args.lambda_schedule, order, km))
        labels = res.clustering
        params.update(order=res.order, lambdas=res.lambdas)
    elif m in ("sc-sum", "sc-sum-norm"):
        labels = sc_sum(mlg, args.k, m == "sc-sum-norm", km)
    elif m == "k-kmeans":
        d = args.k if args.d is None else args.d
        if not 1 <= d <= n:
            raise UsageError(f"--d {d} out of range [1, {n}]")
        labels = kernel_kmeans_sum(mlg, args.k, d, km)
        params["d"] = d
    else:
        labels = sc_al(mlg, args.k, km)
    cluster_ms = _ms(t0)
    return {"method": m, "k": args.k, "n": n, "params": params,
            "labels": [int(x) for x in labels.labels],
            "timings_ms": {"load": load_ms, "cluster": cluster_ms, "total": _ms(t_all)},
            "seed": args.seed}


def cmd_eval(args):
    pred, truth = load_labels(args.pred), load_labels(args.truth)
    if pred.size == 0 or truth.size == 0:
        empty = args.pred if pred.size == 0 else args.truth
        raise MLSpectralError(f"{empty}: no labels")
    if pred.size != truth.size:
        raise LengthMismatch(f"{args.pred} has {pred.size} labels but {args.truth} has {truth.size}")
    doc = evaluate(pred, truth).as_dict()
    doc["confusion"] = {"raw": confusion_matrix(pred, truth).tolist(),
                        "matched": confusion_matrix(pred, truth, matched=True).tolist()}
    doc["n"] = int(pred.size)
    return doc


def cmd_spectrum(args):
    if args.count is not None and args.count < 1:
        raise UsageError("--count must be positive")
    n = args.n if args.n is not None else _infer_n([args.layer])
    count = n if args.count is None else args.count
    if count > n:
        raise UsageError(f"--count {count} exceeds the vertex count {n}")
    dec = decompose(load_layer(args.layer, n), args.kind)
    return {"layer": args.layer, "n": n, "kind": dec.kind.value, "count": count,
            "eigenvalues": [float(x) for x in dec.eigenvalues[:count]],
            "eigenvectors": dec.eigenvectors[:, :count].T.tolist()}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mlspectral",
                                     description="Spectral clustering of multi-layer graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="sample a synthetic multi-layer block model")
    g.add_argument("--out", required=True, help="output directory")
    g.add_argument("--family", choices=("msbm", "complementary"), default="msbm")
    g.add_argument("--n", type=int, default=200)
    g.add_argument("--k", type=int, default=4)
    g.add_argument("--layers", type=int, default=2, help="informative layers (msbm)")
    g.add_argument("--noise-layers", type=int, default=0, help="uninformative layers (msbm)")
    g.add_argument("--p-in", type=float, default=0.3)
    g.add_argument("--p-out", type=float, default=0.03)
    g.add_argument("--p-pair", type=float, default=0.15, help="paired-block probability (complementary)")
    g.add_argument("--weights", choices=("unit", "poisson"), default="unit")
    g.add_argument("--poisson-mean", type=float, default=3.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--output", help="write the JSON summary here instead of stdout")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("cluster", help="cluster a multi-layer graph")
    c.add_argument("--method", choices=METHODS, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--n", type=int, help="vertex count (default: largest id + 1)")
    c.add_argument("--layer", action="append", help="edge-list file; repeatable")
    c.add_argument("--layers", nargs="+", help="several edge-list files")
    c.add_argument("--alpha", type=float)
    c.add_argument("--beta", type=float)
    c.add_argument("--lambda", dest="lambda_schedule", type=_float_list, default=(),
                   help="comma-separated lambda per combination step, or one value for all")
    c.add_argument("--order", type=_int_list, default=(),
                   help="comma-separated layer order (a prefix is completed greedily)")
    c.add_argument("--d", type=int, help="spectral kernel rank for k-kmeans (default k)")
    c.add_argument("--init-layer", type=_init_layer, help="layer index or 'auto'")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--restarts", type=int, default=20)
    c.add_argument("--output")
    c.set_defaults(func=cmd_cluster)

    e = sub.add_parser("eval", help="score predicted labels against ground truth")
    e.add_argument("pred")
    e.add_argument("truth")
    e.add_argument("--output")
    e.set_defaults(func=cmd_eval)

    s = sub.add_parser("spectrum", help="eigenvalues and eigenvectors of one layer")
    s.add_argument("layer")
    s.add_argument("--n", type=int)
    s.add_argument("--kind", choices=("rw", "sym", "comb"), default="rw")
    s.add_argument("--count", type=int)
    s.add_argument("--output")
    s.set_defaults(func=cmd_spectrum)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc = args.func(args)
        _emit(doc, args.output)
    except UsageError as exc:
        parser.error(str(exc))
    except (MLSpectralError, OSError, ValueError, IndexError, RuntimeError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"mlspectral: error: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
