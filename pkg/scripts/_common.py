"""Shared argument handling for the sweep scripts."""

import argparse
import logging
import time

from blockfactor.sweep import ExperimentSpec, run_sweep, thread_count


def sweep_main(benchmark: str, default_out: str) -> None:
    p = argparse.ArgumentParser(description=f"{benchmark.upper()} benchmark sweep with both solvers")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--iterations", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=default_out)
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    spec = ExperimentSpec(benchmark, trials=args.trials, iterations=args.iterations, base_seed=args.seed)
    t0 = time.perf_counter()
    result = run_sweep(spec, threads=thread_count(),
                       progress=lambda job: logging.info("param %s trial %d done", job[1], job[2]))
    rows, agg = result.write(args.out)
    print(f"{'param':>6} {'alg':>4} {'mean':>7} {'std':>7}")
    for r in result.aggregate():
        print(f"{r['param']:>6g} {r['algorithm']:>4} {r['nmi_mean']:>7.3f} {r['nmi_std']:>7.3f}")
    print(f"{time.perf_counter() - t0:.0f}s; wrote {rows} and {agg}")
