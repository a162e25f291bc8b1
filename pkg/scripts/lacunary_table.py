"""Modulus and tail slopes of lacunary series over a grid of alpha."""

import argparse
import csv
import sys

import numpy as np

from hhft import theorems as TH
from hhft import zoo as Z


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alphas", default="0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0")
    ap.add_argument("--band", type=int, default=2 ** 14)
    ap.add_argument("--directions", type=int, default=16)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    fit = TH.FitProfile(directions=args.directions)
    w = csv.writer(sys.stdout)
    w.writerow(["alpha", "alpha_hat", "tail_slope", "coupling", "verdict"])
    for a in (float(v) for v in args.alphas.split(",")):
        r = TH.check_titchmarsh_b(Z.lacunary(a, args.band), a, fit=fit, seed=args.seed)
        o = r.observed
        w.writerow([a, f"{o['alpha_hat']:.4f}", f"{o['tail_slope']:.4f}",
                    f"{o['tail_slope'] + 2 * o['alpha_hat']:.4f}", r.verdict])


if __name__ == "__main__":
    main()
