"""Command line front end.

    graphspace generate   --spec S --seed N --out G
    graphspace barycenter --spec S --out G
    graphspace entropy    --spec S
    graphspace edev       --graph G --spec S [--samples N --seed N | --exact]
    graphspace test       --graph G --spec S --q Q --delta D --seed N
    graphspace partition  --graph G --blocks P --seed N [--out S]
    graphspace experiment PRESET --out DIR --seed N [--scale X]

Exit codes: 0 success, 1 runtime/numeric failure, 2 usage or spec error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .ensembles import barycenter, entropy, sample
from .errors import GraphspaceError, SpecError
from .experiments import PRESETS, ExperimentConfig, run_experiment
from .geometry import edev_exact, edev_mc
from .graph import load_graph, save_graph
from .inference import fit_sbm, greedy_min_entropy_partition, partition_entropy, permutation_test
from .models import load_spec, save_spec
from .rng import RngStream

log = logging.getLogger("graphspace")


def positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def probability(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1), got {v}")
    return v


def positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {v}")
    return v


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)


def cmd_generate(args):
    G = sample(load_spec(args.spec), RngStream(args.seed))
    save_graph(G, args.out)
    log.info("wrote %r to %s", G, args.out)


def cmd_barycenter(args):
    save_graph(barycenter(load_spec(args.spec)), args.out)


def cmd_entropy(args):
    ent = entropy(load_spec(args.spec))
    _emit({"nats": ent.nats, "approximate": ent.approximate}, args.out)


def cmd_edev(args):
    G = load_graph(args.graph)
    spec = load_spec(args.spec)
    if args.exact:
        result = {"mean": edev_exact(G, spec), "std_error": 0.0, "n_samples": None,
                  "exact": True}
    else:
        est = edev_mc(G, spec, args.samples, RngStream(args.seed))
        result = dict(est.to_dict(), exact=False)
    _emit(result, args.out)


def cmd_test(args):
    G = load_graph(args.graph)
    spec = load_spec(args.spec)
    rep = permutation_test(G, spec, args.q, args.delta, RngStream(args.seed),
                           inner_samples=args.samples)
    _emit(rep.to_dict(full=args.full), args.out)


def cmd_partition(args):
    G = load_graph(args.graph)
    part = greedy_min_entropy_partition(G, args.blocks, args.restarts, RngStream(args.seed))
    if args.out:
        save_spec(fit_sbm(G, part), args.out)
    _emit({"block_of": part.block_of.tolist(), "blocks": part.p,
           "entropy_nats": partition_entropy(G, part)})


def cmd_experiment(args):
    cfg = ExperimentConfig(args.preset, args.out, seed=args.seed, scale=args.scale,
                           samples=args.samples, q=args.q, graphs=args.graphs,
                           figures=not args.no_figures)
    written = run_experiment(cfg)
    for name, path in written.items():
        print(f"{name}\t{path}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphspace",
        description="Evaluate statistical graph models with the edit distance expected value.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample a graph from a model spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("barycenter", help="write the expected weight matrix of a model")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_barycenter)

    p = sub.add_parser("entropy", help="log-cardinality of a microcanonical ensemble")
    p.add_argument("--spec", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("edev", help="edit distance expected value of a graph to a model")
    p.add_argument("--graph", required=True)
    p.add_argument("--spec", required=True)
    p.add_argument("--samples", type=positive_int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exact", action="store_true", help="closed form (ER and SBM only)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_edev)

    p = sub.add_parser("test", help="permutation test of a graph against a model")
    p.add_argument("--graph", required=True)
    p.add_argument("--spec", required=True)
    p.add_argument("--q", type=positive_int, default=200)
    p.add_argument("--delta", type=probability, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=positive_int, default=100,
                   help="inner Monte-Carlo samples when no exact EDEV exists")
    p.add_argument("--full", action="store_true", help="include x and theta_stars arrays")
    p.add_argument("--out")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("partition", help="greedy minimum-entropy block partition")
    p.add_argument("--graph", required=True)
    p.add_argument("--blocks", type=positive_int, required=True)
    p.add_argument("--restarts", type=positive_int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the fitted SBM spec here")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("experiment", help="regenerate a figure as CSV (+ SVG)")
    p.add_argument("preset", choices=PRESETS)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", type=positive_float, default=1.0,
                   help="multiply every default count (samples, graphs, q, grid points)")
    p.add_argument("--samples", type=positive_int,
                   help="fig2: samples per model; fig3: grid points; fig4-6: inner MC samples")
    p.add_argument("--q", type=positive_int, help="reference sample size of each test")
    p.add_argument("--graphs", type=positive_int, help="observed graphs per model")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except SpecError as exc:
        print(f"graphspace: error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"graphspace: error: {exc}", file=sys.stderr)
        return 2
    except (GraphspaceError, ArithmeticError, OSError) as exc:
        print(f"graphspace: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
