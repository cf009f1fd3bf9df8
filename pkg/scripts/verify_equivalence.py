"""Brute-force check that objective + log-likelihood is constant for all six models."""

import argparse
import sys
import time

from blockfactor.verify import check_all

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--seed", type=int, default=0)
p.add_argument("--instances", type=int, default=100)
p.add_argument("--draws", type=int, default=20)
args = p.parse_args()

t0 = time.perf_counter()
reports = check_all(args.seed, args.instances, args.draws)
for r in reports:
    print(f"{r.model:<18} spread {r.max_spread:.2e}  offset from closed form {r.max_offset:.2e}")
print(f"{time.perf_counter() - t0:.1f}s")
sys.exit(0 if all(r.ok() for r in reports) else 1)
