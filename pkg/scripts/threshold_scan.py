"""Convergence class of the partial l^beta sums of <xi> fhat across beta.

Synthesizes a prescribed tail law and reports, for each beta, the class
found on dyadic bands next to the predicted threshold beta0.
"""

import argparse

import numpy as np

from hhft import groups as G
from hhft import theorems as TH
from hhft import zoo as Z


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--group", default="su2")
    ap.add_argument("--alpha", type=float, default=0.6)
    ap.add_argument("--d", type=float, default=0.0)
    ap.add_argument("--label-max", type=int, default=128)
    ap.add_argument("--steps", type=int, default=9)
    args = ap.parse_args()
    g = G.parse_group(args.group)
    s = Z.prescribed_tail(g, args.alpha, args.d, G.band_for_label(g, args.label_max))
    b0 = TH.beta0(args.alpha, 2.0, g.counting_dimension)
    print(f"{g.name}: alpha={args.alpha} d={args.d} beta0={b0:.4f}")
    betas = np.linspace(0.8 * b0, 1.3 * b0, args.steps)
    classes = TH.partial_norm_classes(s, betas, TH.TolerancesProfile())
    for b in betas:
        c = classes[float(b)]
        print(f"beta={b:.3f}  {c['class']:<12}  increment slope={c.get('increment_slope', float('nan')):+.3f}")


if __name__ == "__main__":
    main()
