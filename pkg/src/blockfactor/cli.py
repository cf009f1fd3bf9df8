"""Command-line entry point: ``blockfactor {sweep,fit,eval,verify}``."""

from __future__ import annotations

import argparse
import logging
import sys

from .graph import GraphDomainError, GraphFormatError, load_edge_list, read_labels, write_labels
from .metrics import PartitionMismatch, nmi
from .solvers import SolverConfig, SolverDomainError, fit
from .sweep import ExperimentSpec, SweepError, run_sweep
from .verify import check_all

log = logging.getLogger("blockfactor")


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def _algorithms(text: str) -> tuple[str, ...]:
    return ("kl", "lse") if text == "both" else (text,)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="blockfactor", description="NMF community detection and block-model benchmarks")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sweep", help="generate, fit and score a benchmark sweep")
    s.add_argument("--benchmark", choices=("gn", "lfr"), default="gn")
    s.add_argument("--param-values", type=_floats, default=(), help="z_out (gn) or mu (lfr) values")
    s.add_argument("--algorithms", choices=("kl", "lse", "both"), default="both")
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--iterations", type=int, default=500)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--communities", type=int, default=None, help="override the planted community count")
    s.add_argument("--out", required=True, help="output directory for rows.csv and agg.csv")

    f = sub.add_parser("fit", help="fit one edge list and write hard labels")
    f.add_argument("edges")
    f.add_argument("--communities", type=int, required=True)
    f.add_argument("--algorithm", choices=("kl", "lse"), default="kl")
    f.add_argument("--iterations", type=int, default=500)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--out", required=True, help="label file to write")

    e = sub.add_parser("eval", help="NMI between two label files")
    e.add_argument("labels_a")
    e.add_argument("labels_b")

    v = sub.add_parser("verify", help="check objective/likelihood equivalences on random instances")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=20, help="random (G, W) draws per instance")
    v.add_argument("--instances", type=int, default=100)
    return p


def cmd_sweep(args) -> int:
    spec = ExperimentSpec(
        benchmark=args.benchmark,
        values=args.param_values,
        algorithms=_algorithms(args.algorithms),
        trials=args.trials,
        iterations=args.iterations,
        base_seed=args.seed,
        communities=args.communities,
    )
    total = len(spec.values) * spec.trials

    def progress(job):
        log.info("point %s trial %d done (%d jobs)", job[1], job[2], total)

    result = run_sweep(spec, progress=progress)
    rows_path, agg_path = result.write(args.out)
    for r in result.aggregate():
        print(f"{r['benchmark']} {r['param']:g} {r['algorithm']}: nmi {r['nmi_mean']:.4f} +/- {r['nmi_std']:.4f}")
    print(f"wrote {rows_path} and {agg_path}")
    return 0


def cmd_fit(args) -> int:
    g = load_edge_list(args.edges)
    res = fit(g.matrix, SolverConfig(args.communities, args.algorithm, args.iterations, args.seed))
    write_labels(res.labels, args.out)
    print(repr(float(res.objective_trace[-1])))
    return 0


def cmd_eval(args) -> int:
    print(f"{nmi(read_labels(args.labels_a), read_labels(args.labels_b)):.6f}")
    return 0


def cmd_verify(args) -> int:
    if args.trials < 1 or args.instances < 1:
        raise ValueError("trials and instances must be >= 1")
    reports = check_all(args.seed, args.instances, args.trials)
    print(f"{'model':<18}{'max deviation':>16}{'max |offset|':>16}")
    for r in reports:
        flag = "" if r.ok() else "  FAIL"
        print(f"{r.model:<18}{r.max_spread:>16.3e}{r.max_offset:>16.3e}{flag}")
    return 0 if all(r.ok() for r in reports) else 1


COMMANDS = {"sweep": cmd_sweep, "fit": cmd_fit, "eval": cmd_eval, "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (OSError, GraphFormatError, GraphDomainError, PartitionMismatch, SolverDomainError, SweepError, ValueError) as exc:
        print(f"blockfactor {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
