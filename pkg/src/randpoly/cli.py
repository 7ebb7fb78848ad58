"""Command line entry point: ``randpoly <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from contextlib import contextmanager

from . import metrics as M
from .adjacency import AUTO, METHODS, SearchBudgetExceeded, averaging_certificate_search, build_graph, edge_status
from .analytics import closed_form_tuple_count, count_averaging_tuples, threshold_constants
from .harness import (AUTO_SAMPLE_PAIRS, DEFAULT_PAIR_BUDGET, METRICS, ConfigError, SweepConfig,
                      csv_text, graph_json_text, run_sweep, run_verify)
from .hypercube import full_mask
from .sampling import RateSpec, VertexSet, sample_rate

EXIT_OK = 0
EXIT_DISAGREE = 2
EXIT_CONFIG = 3


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _rate(text: str) -> RateSpec:
    try:
        return RateSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if "-" in part.strip()[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _load_set(args) -> VertexSet:
    if args.input:
        return VertexSet.read(args.input)
    if args.n is None or args.rate is None:
        raise ConfigError("need --input FILE or both --n and --rate")
    return sample_rate(args.n, args.rate, args.seed)


def _word(text: str, n: int) -> int:
    """Hex word, or ``0b`` followed by bits with coordinate 1 first."""
    t = text.strip().lower()
    if t.startswith("0b"):
        return sum(1 << i for i, ch in enumerate(t[2:]) if ch == "1")
    return int(t, 16)


# --------------------------------------------------------------------------
# subcommands


def cmd_sample(args) -> int:
    Q = _load_set(args)
    with _output(args.out) as fh:
        fh.write(Q.dumps())
    return EXIT_OK


def cmd_graph(args) -> int:
    Q = _load_set(args)
    G = build_graph(Q, args.method, pair_budget=args.pair_budget, certificates=args.edge_certificates,
                    seed=args.seed)
    with _output(args.out) as fh:
        fh.write(graph_json_text(G))
    return EXIT_OK


def cmd_pair(args) -> int:
    Q = _load_set(args)
    x, y = _word(args.x, Q.n), _word(args.y, Q.n)
    if (x | y) & ~full_mask(Q.n):
        raise ConfigError("point has bits beyond the dimension")
    status = edge_status(Q, x, y, args.method, certify=True)
    doc = {
        "x": format(x, f"0{(Q.n + 3) // 4}x"),
        "y": format(y, f"0{(Q.n + 3) // 4}x"),
        "verdict": status.verdict,
        "certificate": status.certificate.to_json() if status.certificate else None,
    }
    if args.averaging:
        try:
            tup = averaging_certificate_search(Q, x, y, args.averaging)
            doc["averaging"] = tup.to_json() if tup else None
        except SearchBudgetExceeded as exc:
            doc["averaging"] = {"error": str(exc)}
    with _output(args.out) as fh:
        fh.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_metrics(args) -> int:
    Q = _load_set(args)
    G = build_graph(Q, args.method)
    rep = M.report(G, with_expansion=len(Q) <= M.MAX_EXPANSION_VERTICES)
    doc = {k: (str(v) if hasattr(v, "denominator") and not isinstance(v, int) else v)
           for k, v in vars(rep).items()}
    with _output(args.out) as fh:
        fh.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_sweep(args) -> int:
    metrics = tuple(m.strip() for m in args.metrics.split(",") if m.strip())
    config = SweepConfig(
        n_list=tuple(args.n), rates=tuple(args.rate), trials=args.trials, base_seed=args.seed,
        metrics=metrics, method=args.method, pair_budget=args.pair_budget,
        auto_sample_pairs=None if args.no_auto_sample else args.auto_sample_pairs, workers=args.workers)
    records = run_sweep(config)
    with _output(args.out) as fh:
        fh.write(csv_text(records))
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_verify(args.n_max, args.trials, args.seed, n_min=args.n_min, full_cube=args.full_cube)
    with _output(args.out) as fh:
        fh.write(json.dumps(report.to_json(), indent=2) + "\n")
    if not report.ok:
        print(f"verification failed: {len(report.disagreements)} disagreements, "
              f"{len(report.replay_failures)} replay failures", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_OK


def cmd_delta(args) -> int:
    c = threshold_constants()
    with _output(args.out) as fh:
        for name in ("delta_star", "f_max_arg", "f_max", "weak_exponent"):
            fh.write(f"{name} {getattr(c, name):.12f}\n")
    return EXIT_OK


def cmd_count_tuples(args) -> int:
    if args.input:
        Q = VertexSet.read(args.input)
        x, y = _word(args.x, Q.n), _word(args.y, Q.n)
        count = count_averaging_tuples(Q.points, x, y, args.k, exclude_endpoints=args.exclude)
        doc = {"k": args.k, "count": count}
    else:
        if args.d is None:
            raise ConfigError("need --d for the full interval, or --input with --x/--y")
        from .hypercube import interval_bits

        x, y = 0, (1 << args.d) - 1
        count = count_averaging_tuples(list(interval_bits(x, y)), x, y, args.k,
                                       exclude_endpoints=args.exclude)
        doc = {"d": args.d, "k": args.k, "count": count,
               "closed_form": closed_form_tuple_count(args.d, args.k)}
    with _output(args.out) as fh:
        fh.write(json.dumps(doc) + "\n")
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog="randpoly", formatter_class=fmt,
                                     description="Random 0/1 polytopes and their exact 1-skeletons.")
    # global flags; repeated on each subcommand so they may follow it too
    def add_globals(p, suppress):
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        p.add_argument("--seed", type=int, default=d(0), help="64-bit base seed")
        p.add_argument("--out", default=d("-"), help="output file, '-' for stdout")
        p.add_argument("--method", choices=METHODS, default=d(AUTO), help="adjacency decider")
        p.add_argument("-v", "--verbose", action="store_true", default=d(False), help="debug logging")

    add_globals(parser, False)
    common = argparse.ArgumentParser(add_help=False)
    add_globals(common, True)

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--input", help="vertex set file ('n=<int>' then hex points)")
    source.add_argument("--n", type=int, help="dimension when sampling")
    source.add_argument("--rate", type=_rate, help="rate, e.g. pow2:c=0.6, explicit:0.5, delta:eps=0.03,sign=-")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", parents=[common, source], formatter_class=fmt, help="sample a vertex set")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("graph", parents=[common, source], formatter_class=fmt, help="build the polytope graph as JSON")
    p.add_argument("--pair-budget", type=int, default=None, help="classify only this many sampled pairs")
    p.add_argument("--edge-certificates", action="store_true", help="also store certificates for edges")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("pair", parents=[common, source], formatter_class=fmt, help="decide a single pair")
    p.add_argument("--x", required=True, help="first point (hex, or bit string with coordinate 1 first)")
    p.add_argument("--y", required=True, help="second point")
    p.add_argument("--averaging", type=int, default=0, metavar="K_MAX",
                   help="also search for an averaging tuple with k <= K_MAX")
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("metrics", parents=[common, source], formatter_class=fmt, help="graph metrics as JSON")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("sweep", parents=[common], formatter_class=fmt, help="run a parameter sweep, CSV out")
    p.add_argument("--n", type=_int_list, required=True, help="dimensions, e.g. 16,20 or 10-14")
    p.add_argument("--rate", type=_rate, action="append", required=True, help="rate spec; repeatable")
    p.add_argument("--trials", type=int, default=1, help="trials per cell")
    p.add_argument("--metrics", default="density,min_degree,clique", help=f"comma list from {','.join(METRICS)}")
    p.add_argument("--pair-budget", type=int, default=DEFAULT_PAIR_BUDGET, help="pairs per sampled trial")
    p.add_argument("--auto-sample-pairs", type=int, default=AUTO_SAMPLE_PAIRS,
                   help="switch density to pair sampling above this many pairs")
    p.add_argument("--no-auto-sample", action="store_true", help="always build the full graph")
    p.add_argument("--workers", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", parents=[common], formatter_class=fmt, help="cross-check all deciders")
    p.add_argument("--n-max", type=int, default=6, help="largest dimension (<= 6)")
    p.add_argument("--n-min", type=int, default=3, help="smallest dimension")
    p.add_argument("--trials", type=int, default=200, help="random instances")
    p.add_argument("--full-cube", action="store_true", help="use the full cube of dimension n-max")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("delta", parents=[common], formatter_class=fmt, help="print the threshold constants")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("count-tuples", parents=[common], formatter_class=fmt, help="count averaging tuples")
    p.add_argument("--k", type=int, required=True, help="half tuple length")
    p.add_argument("--d", type=int, help="full interval of this dimension")
    p.add_argument("--input", help="vertex set file instead of a full interval")
    p.add_argument("--x", help="first endpoint with --input")
    p.add_argument("--y", help="second endpoint with --input")
    p.add_argument("--exclude", action="store_true", help="exclude the endpoints from the tuple")
    p.set_defaults(func=cmd_count_tuples)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage, which would collide with the disagreement code
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, ValueError, KeyError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
