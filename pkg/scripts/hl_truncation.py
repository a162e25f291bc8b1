"""Tail slope of the Hardy-Littlewood witness against the truncation band.

The coefficient sequence stops at the band, so the tail over [N, band] is
close to (N^(-2a) - band^(-2a)) / (2a) and its log-log slope on a fixed
window drifts below -2a as the band shrinks.  Each row compares the fitted
slope with the same fit on the closed-form truncated tail.
"""

import argparse

import numpy as np

from hhft import lipschitz as L
from hhft import spaces as S
from hhft import zoo as Z


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=0.25)
    ap.add_argument("--window", default="64,4096", help="lo,hi of the N window")
    ap.add_argument("--bands", default="16,18,20,22", help="log2 of the bands to try")
    args = ap.parse_args()
    lo, hi = (float(v) for v in args.window.split(","))
    Ns = np.geomspace(lo, hi, 25)
    a = args.alpha
    print(f"alpha={a} window=[{lo:g}, {hi:g}] target slope={-2 * a:.3f}")
    print("log2(band)  fitted   closed-form")
    for k in (int(v) for v in args.bands.split(",")):
        band = 2 ** k
        closed = (Ns ** (-2 * a) - band ** (-2 * a)) / (2 * a)
        cf = L.fit_decay(np.stack([Ns, closed], 1)).exponent_b
        if k <= 20:
            s = Z.hardy_littlewood(a, band)
            fitted = L.fit_decay(np.stack([Ns, S.tail_sums(s, Ns)], 1)).exponent_b
            print(f"{k:10d}  {fitted:7.4f}  {cf:7.4f}")
        else:
            print(f"{k:10d}  {'-':>7}  {cf:7.4f}")


if __name__ == "__main__":
    main()
