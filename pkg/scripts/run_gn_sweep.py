"""GN benchmark: z_out = 0..8, KL and LSE, mean NMI with standard deviation."""

from _common import sweep_main

if __name__ == "__main__":
    sweep_main("gn", "results/gn")
