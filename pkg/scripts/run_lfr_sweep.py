"""LFR benchmark at n = 1000: mu = 0.1..0.9, KL and LSE.  Takes about 25 minutes on one core."""

from _common import sweep_main

if __name__ == "__main__":
    sweep_main("lfr", "results/lfr")
