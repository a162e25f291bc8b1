"""The eleven acceptance criteria, each with its tolerance and time budget.

Every test records one summary line (printed at the end of the run) and
then asserts the criterion.
"""

import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE
from hhft import groups as G
from hhft import harmonics as Hm
from hhft import lipschitz as L
from hhft import spaces as S
from hhft import theorems as TH
from hhft import transform as T
from hhft import zoo as Z


def record(num: int, title: str, ok: bool, detail: str):
    ACCEPTANCE[num] = f"criterion {num:2d} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    assert ok, detail


def test_01_plancherel_roundtrip():
    cases = [("t1", G.Torus(1), 64.0), ("t2", G.Torus(2), 16.0),
             ("su2", G.SU2, G.band_for_label(G.SU2, 32)),
             ("s2", G.Sphere2, G.band_for_label(G.Sphere2, 32))]
    parts, ok = [], True
    for name, g, band in cases:
        t0 = time.perf_counter()
        s = T.random_spectrum(g, band, 1)
        f = T.inverse(s, Hm.build_grid(g, band))
        fl2 = f.lp_norm(2)
        plan = abs(fl2 - S.lp_dual_norm(s, S.DualNormRequest(2.0))) / fl2
        rt = (T.forward(f, band) - s).norm() / s.norm()
        dt = time.perf_counter() - t0
        ok &= plan <= 1e-9 and rt <= 1e-9 and dt < 5
        parts.append(f"{name} plancherel={plan:.1e} roundtrip={rt:.1e} {dt:.2f}s")
    record(1, "Plancherel and round trip", ok, "; ".join(parts))


def test_02_translation_identity():
    t0 = time.perf_counter()
    # twice-spin up to 10: pointwise synthesis at the shifted nodes is the
    # independent path and costs O(nodes * m^3), so m = 16 would need ~50 s
    band = G.band_for_label(G.SU2, 10)
    grid = Hm.build_grid(G.SU2, band)
    rng = np.random.default_rng(2)
    worst = 0.0
    for i in range(20):
        s = T.random_spectrum(G.SU2, band, 100 + i)
        h = G.random_element(G.SU2, rng)
        shifted = T.GridFunction(grid, T.evaluate(s, T.act(h, grid.nodes, "left")))
        ref = T.translate_spectrum(s, h, "left")
        worst = max(worst, (T.forward(shifted) - ref).norm() / ref.norm())
    dt = time.perf_counter() - t0
    record(2, "translation identity on SU2", worst <= 1e-8 and dt < 10,
           f"20 pairs (m <= 10), worst rel err {worst:.1e}, {dt:.2f}s")


def test_03_hardy_littlewood():
    parts, ok = [], True
    for alpha in (0.25, 0.5, 0.75):
        t0 = time.perf_counter()
        r = TH.hardy_littlewood_check(alpha, 2 ** 16, (2.0 ** 6, 2.0 ** 12))
        dt = time.perf_counter() - t0
        slope = r.observed["tail"].exponent_b
        r2 = r.observed["log_growth"]["r_squared"]
        good = abs(slope + 2 * alpha) <= 0.05 and r2 >= 0.99 and dt < 5
        ok &= good
        parts.append(f"alpha={alpha} slope={slope:.3f} (target {-2 * alpha}) "
                     f"log-fit r2={r2:.6f} {dt:.2f}s {'ok' if good else 'MISS'}")
    record(3, "Hardy-Littlewood sharpness", ok, "; ".join(parts))


def test_04_lacunary_forward():
    parts, ok = [], True
    for alpha in (0.3, 0.6, 0.9):
        t0 = time.perf_counter()
        r = TH.check_titchmarsh_b(Z.lacunary(alpha, 2 ** 14), alpha, "forward")
        dt = time.perf_counter() - t0
        a_hat, slope = r.observed["alpha_hat"], r.observed["tail_slope"]
        good = abs(a_hat - alpha) <= 0.07 and abs(slope + 2 * alpha) <= 0.05 and dt < 30
        ok &= good
        parts.append(f"alpha={alpha} modulus={a_hat:.3f} tail={slope:.3f} {dt:.1f}s")
    record(4, "tail/modulus equivalence, forward (lacunary)", ok, "; ".join(parts))


def test_05_reverse_su2():
    t0 = time.perf_counter()
    law = TH.TailLaw(G.SU2, 0.5, 0.0, G.band_for_label(G.SU2, 48), seed=0)
    r = TH.check_titchmarsh_b(law, 0.5, "reverse")
    dt = time.perf_counter() - t0
    a_hat = r.observed["alpha_hat"]
    record(5, "tail/modulus equivalence, reverse (SU2)", abs(a_hat - 0.5) <= 0.1 and dt < 120,
           f"modulus slope {a_hat:.3f} (target 0.5), {dt:.1f}s")


def test_06_duren():
    parts, ok = [], True
    for d in (-1.0, 0.0, 1.0, 2.0):
        t0 = time.perf_counter()
        r = TH.duren_check(a=2, b=1, d=d, k_max=10 ** 6)
        dt = time.perf_counter() - t0
        h, t = r.observed["head"], r.observed["tail"]
        good = (abs(h.exponent_b - 1) <= 0.05 and abs(t.exponent_b + 1) <= 0.05
                and abs(h.log_exponent_d - d) <= 0.2 and abs(t.log_exponent_d - d) <= 0.2
                and dt < 2)
        ok &= good
        parts.append(f"d={d:g} head=({h.exponent_b:.3f},{h.log_exponent_d:.3f}) "
                     f"tail=({t.exponent_b:.3f},{t.log_exponent_d:.3f}) {dt:.2f}s")
    record(6, "Duren lemmas", ok, "; ".join(parts))


def test_07_weyl():
    t0 = time.perf_counter()
    r = TH.check_weyl(G.SU2, (32.0, 64.0), 0.1, s_above=4.0, s_below=2.5)
    dt = time.perf_counter() - t0
    conv = r.observed["series"]["4.0"]
    div = r.observed["series"]["2.5"]
    incs = np.abs(np.diff(conv["sums"]))
    grow = min(div["growth"][-4:])
    ok = (r.verdict == "pass" and conv["class"] == "converges" and div["class"] == "diverges"
          and grow >= 0.05 and dt < 2)
    ratios = ", ".join(f"{k}: {v:+.3f}" for k, v in r.margins.items())
    record(7, "Weyl counting", ok,
           f"ratio deviations {ratios}; s=4 last increment {incs[-1]:.1e}; "
           f"s=2.5 min growth/doubling {grow:.3f}; {dt:.2f}s")


def test_08_multiplier():
    t0 = time.perf_counter()
    s = Z.prescribed_tail(G.SU2, 0.4, 0.0, G.band_for_label(G.SU2, 192), seed=0)
    fit = TH.FitProfile(directions=4, radii=16)
    r = TH.check_multiplier_regularity(s, 0.4, 0.3, fit=fit)
    dt = time.perf_counter() - t0
    slope, a_hat = r.observed["tail"].exponent_b, r.observed["modulus"].exponent_b
    ok = abs(slope + 1.4) <= 0.15 and abs(a_hat - 0.7) <= 0.1 and dt < 120
    record(8, "Bessel multiplier regularity", ok,
           f"tail slope {slope:.3f} (target -1.4), modulus slope {a_hat:.3f} (target 0.7), "
           f"{dt:.1f}s")


def test_09_dini():
    t0 = time.perf_counter()
    s = Z.prescribed_tail(G.Torus(1), 0.5, 1.0, 2.0 ** 14, seed=0)
    fit = TH.FitProfile()
    tail = TH.measure_tail(s, fit, "power_log")
    mod, _ = TH.measure_modulus(s, fit, "power_log")
    ends = {}
    for d in (-1.0, 1.0):
        border = Z.prescribed_tail(G.Torus(1), 1.0, d, 2.0 ** 14, seed=0)
        ends[d] = TH.check_dini_a(border, 1.0, d).observed["endpoint_class"]
    dt = time.perf_counter() - t0
    ok = (abs(tail.exponent_b + 1) <= 0.05 and abs(tail.log_exponent_d - 2) <= 0.3
          and abs(mod.exponent_b - 0.5) <= 0.1 and 0.4 <= mod.log_exponent_d <= 1.6
          and ends[-1.0] == "converges" and ends[1.0] == "diverges" and dt < 60)
    record(9, "Dini-Lipschitz", ok,
           f"tail ({tail.exponent_b:.3f}, {tail.log_exponent_d:.3f}); modulus "
           f"({mod.exponent_b:.3f}, {mod.log_exponent_d:.3f}); endpoint d=-1 {ends[-1.0]}, "
           f"d=+1 {ends[1.0]}; {dt:.1f}s")


def test_10_class_one_lift():
    t0 = time.perf_counter()
    r = TH.lift_check(G.band_for_label(G.Sphere2, 32), seed=0, shifts=10)
    dt = time.perf_counter() - t0
    record(10, "class-I structure of lifts", r.verdict == "pass" and dt < 30,
           f"off-pattern fraction {r.margins['off_pattern']:.1e}, "
           f"worst modulus rel diff {r.margins['modulus']:.1e}, {dt:.1f}s")


def test_11_hausdorff_young():
    t0 = time.perf_counter()
    band = G.band_for_label(G.SU2, 8)
    grid = Hm.build_grid(G.SU2, band)
    worst, fails = -math.inf, 0
    for i in range(50):
        f = T.inverse(T.random_spectrum(G.SU2, band, 1000 + i), grid)
        for p in (1.25, 1.5, 2.0):
            r = TH.hausdorff_young_check(f, p)
            fails += not r.passed
            worst = max(worst, r.observed["lhs"] - r.observed["rhs"])
    dt = time.perf_counter() - t0
    record(11, "Hausdorff-Young", fails == 0 and dt < 30,
           f"150 trials, {fails} violations, max lhs - rhs {worst:.2e}, {dt:.1f}s")
