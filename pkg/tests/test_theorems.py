import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hhft import groups as G
from hhft import harmonics as Hm
from hhft import spaces as S
from hhft import theorems as TH
from hhft import transform as T
from hhft import zoo as Z
from hhft.errors import ArgumentError


# ---------------------------------------------------------------- thresholds

def test_threshold_formulas():
    assert TH.gamma_threshold(0.5, 2.0, 1) == 1.0
    assert TH.beta0(1.0, 2.0, 1) == 2.0 == TH.conjugate_exponent(2.0)
    assert math.isclose(TH.beta0(0.6, 2.0, 3), 3 / 1.1)
    assert TH.beta0(0.1, 1.1, 1) == math.inf
    assert math.isclose(TH.reduction_threshold(2.0, 3), 1.2)
    # at beta = q the head exponent reduces to (1 - alpha) q
    assert math.isclose(TH.head_exponent(0.3, 2.0, 3, 2.0), 1.4)


# ---------------------------------------------------------------- classifier

def test_classifier_geometric_converges():
    bands = 2.0 ** np.arange(12)
    sums = np.cumsum(0.5 ** np.arange(12))
    assert TH.classify_partial_sums(bands, sums)["class"] == "converges"


def test_classifier_power_growth_diverges():
    bands = 2.0 ** np.arange(12)
    assert TH.classify_partial_sums(bands, bands ** 0.3)["class"] == "diverges"


def test_classifier_log_growth_diverges():
    bands = 2.0 ** np.arange(1, 16)
    out = TH.classify_partial_sums(bands, np.log(bands))
    assert out["class"] == "diverges" and out["sustained_growth"]


def test_classifier_constant_and_short():
    bands = 2.0 ** np.arange(8)
    assert TH.classify_partial_sums(bands, np.ones(8))["class"] == "converges"
    assert TH.classify_partial_sums(bands[:3], [1, 2, 3])["class"] == "inconclusive"


def test_dyadic_bands():
    assert TH.dyadic_bands(20.0).tolist() == [1, 2, 4, 8, 16]
    assert TH.dyadic_bands(64.0, 4.0).tolist() == [4, 8, 16, 32, 64]


# ---------------------------------------------------------------- Duren

def test_duren_power():
    r = TH.duren_check(a=2, b=1, d=0, k_max=10 ** 6)
    assert r.verdict == "pass"
    assert abs(r.observed["head"].exponent_b - 1) <= 0.05
    assert abs(r.observed["tail"].exponent_b + 1) <= 0.05


def test_duren_log_factor():
    r = TH.duren_check(a=2, b=1, d=2, k_max=10 ** 6)
    assert abs(r.observed["head"].log_exponent_d - 2) <= 0.2
    assert abs(r.observed["tail"].log_exponent_d - 2) <= 0.2
    assert r.passed


def test_duren_zero_sequence():
    r = TH.duren_check(lambda k: np.zeros_like(k), a=2, b=1, k_max=1000)
    assert r.verdict == "pass" and "zero" in r.notes


def test_duren_errors():
    with pytest.raises(ArgumentError):
        TH.duren_check(a=1, b=2)
    with pytest.raises(ArgumentError):
        TH.duren_check(a=2, b=2)
    with pytest.raises(ArgumentError):
        TH.duren_check(a=2, b=1, k_max=999)
    with pytest.raises(ArgumentError):
        TH.duren_check(lambda k: -np.ones_like(k), a=2, b=1, k_max=1000)


@settings(max_examples=10)
@given(st.floats(0.3, 2.5), st.floats(0.2, 0.8), st.sampled_from([-1.0, 0.0, 1.0]))
def test_duren_head_minus_tail_is_a(a, frac, d):
    b = frac * a
    r = TH.duren_check(a=a, b=b, d=d, k_max=10 ** 5)
    diff = r.observed["head"].exponent_b - r.observed["tail"].exponent_b
    assert abs(diff - a) <= 0.1


# ---------------------------------------------------------------- Titchmarsh A

def test_titchmarsh_a_su2_threshold():
    s = Z.prescribed_tail(G.SU2, 0.6, 0.0, G.band_for_label(G.SU2, 128), seed=0)
    r = TH.check_titchmarsh_a(s, 0.6, betas=[2.4, 2.8])
    assert math.isclose(r.predicted["beta0"], 3 / 1.1)
    assert r.observed["classes"] == {"2.4": "diverges", "2.8": "converges"}
    assert r.verdict == "pass"


def test_titchmarsh_a_argument_errors():
    s = Z.constant(G.Torus(1))
    for alpha, p in ((0.0, 2.0), (1.5, 2.0), (0.5, 1.0), (0.5, 2.5)):
        with pytest.raises(ArgumentError):
            TH.check_titchmarsh_a(s, alpha, p)


# ---------------------------------------------------------------- Titchmarsh B

def test_titchmarsh_b_lacunary():
    r = TH.check_titchmarsh_b(Z.lacunary(0.5, 2 ** 14), 0.5)
    assert abs(r.observed["tail_slope"] + 1) <= 0.05
    assert abs(r.observed["alpha_hat"] - 0.5) <= 0.07
    assert r.verdict == "pass"


def test_titchmarsh_b_constant():
    r = TH.check_titchmarsh_b(Z.constant(G.SU2), 0.5)
    assert r.verdict == "pass" and "all-zero" in r.notes


def test_titchmarsh_b_reverse_su2():
    law = TH.TailLaw(G.SU2, 0.5, band=G.band_for_label(G.SU2, 48))
    r = TH.check_titchmarsh_b(law, 0.5, mode="reverse", fit=TH.FitProfile(directions=4, radii=16))
    assert abs(r.observed["alpha_hat"] - 0.5) <= 0.1
    assert r.verdict == "pass"


@settings(max_examples=4)
@given(st.floats(0.3, 0.9))
def test_coupling_on_lacunary(alpha):
    r = TH.check_titchmarsh_b(Z.lacunary(alpha, 2 ** 14), alpha,
                              fit=TH.FitProfile(directions=4, radii=16))
    assert abs(r.observed["tail_slope"] + 2 * r.observed["alpha_hat"]) <= 0.2


def test_titchmarsh_b_errors():
    with pytest.raises(ArgumentError):
        TH.check_titchmarsh_b(Z.constant(G.Torus(1)), 0.0)
    with pytest.raises(ArgumentError):
        TH.check_titchmarsh_b(Z.constant(G.Torus(1)), 0.5, mode="sideways")
    with pytest.raises(ArgumentError):
        TH.check_titchmarsh_b("not a spectrum", 0.5)


# ---------------------------------------------------------------- Dini

def test_dini_tail_log_law():
    s = Z.prescribed_tail(G.Torus(1), 0.5, 1.0, 2.0 ** 16)
    rep = TH.measure_tail(s, TH.FitProfile(), "power_log")
    assert abs(rep.exponent_b + 1) <= 0.05
    assert abs(rep.log_exponent_d - 2) <= 0.2


def test_dini_with_zero_log_matches_titchmarsh_b():
    s = Z.lacunary(0.5, 2 ** 12)
    fit = TH.FitProfile(directions=4, radii=16)
    assert TH.check_dini(s, 0.5, 0.0, fit=fit).verdict == TH.check_titchmarsh_b(s, 0.5, fit=fit).verdict


def test_dini_constant_and_errors():
    assert TH.check_dini(Z.constant(G.Torus(1)), 0.5, 1.0).verdict == "pass"
    with pytest.raises(ArgumentError):
        TH.check_dini(Z.constant(G.Torus(1)), -0.5, 1.0)


@pytest.mark.parametrize("d", [-1.0, 1.0])
def test_dini_a_torus_endpoint(d):
    s = Z.prescribed_tail(G.Torus(1), 1.0, d, 2.0 ** 14)
    r = TH.check_dini_a(s, 1.0, d)
    assert r.predicted["beta0"] == 2.0
    assert r.observed["strict_class"] == "converges"
    expected = "converges" if d < 0 else "diverges"
    assert r.observed["endpoint_class"] == expected
    assert r.verdict == "pass"


def _shell_partial_sums(alpha, d, beta, shells):
    # l^beta sums of <xi> fhat for the circle shell law, evaluated shell by shell:
    # shell s holds 2^(s+1) frequencies sharing energy 2^(-2 alpha s) log(e + 2^s)^(2d)
    s = np.arange(shells, dtype=float)
    count = 2.0 ** (s + 1)
    log_energy = -2 * alpha * s * math.log(2) + 2 * d * np.log(np.log(math.e + 2.0 ** s))
    log_term = (np.log(count) + beta * (s * math.log(2) + 0.5 * (log_energy - np.log(count))))
    return 2.0 ** (s + 1), np.cumsum(np.exp(log_term))


def test_strict_regime_positive_log_power_converges_eventually():
    # beta0 + 0.2 with d = +1: the increments keep rising for dozens of doublings
    # before the power gap wins, so the law is extended far beyond any grid band
    b0 = TH.beta0(1.0, 2.0, 1)
    bands, sums = _shell_partial_sums(1.0, 1.0, b0 + 0.2, 400)
    assert TH.classify_partial_sums(bands, sums)["class"] == "converges"
    # the endpoint is read at grid-scale bands, where log growth is still resolvable
    bands, sums = _shell_partial_sums(1.0, 1.0, b0, 40)
    assert TH.classify_partial_sums(bands, sums)["class"] == "diverges"
    bands, sums = _shell_partial_sums(1.0, -1.0, b0, 40)
    assert TH.classify_partial_sums(bands, sums)["class"] == "converges"


# ---------------------------------------------------------------- Hausdorff-Young

def test_hausdorff_young_equality_at_two():
    band = G.band_for_label(G.SU2, 6)
    f = T.inverse(T.random_spectrum(G.SU2, band, 0), Hm.build_grid(G.SU2, band))
    r = TH.hausdorff_young_check(f, 2.0)
    assert r.verdict == "pass"
    assert abs(r.observed["slack"]) <= 1e-9 * r.observed["rhs"]


def test_hausdorff_young_character():
    f = T.sample(lambda x: np.exp(1j * x[:, 0]), Hm.build_grid(G.Torus(1), 4.0))
    r = TH.hausdorff_young_check(f, 1.5)
    assert abs(r.observed["lhs"] - 1) <= 1e-12 and abs(r.observed["rhs"] - 1) <= 1e-12
    assert r.verdict == "pass"


@settings(max_examples=10)
@given(st.sampled_from(["t1", "t2", "su2", "s2"]), st.floats(1.05, 2.0), st.integers(0, 100))
def test_hausdorff_young_holds(group, p, seed):
    g = G.parse_group(group)
    f = T.inverse(T.random_spectrum(g, 6.0, seed), Hm.build_grid(g, 6.0))
    assert TH.hausdorff_young_check(f, p).verdict == "pass"


def test_hausdorff_young_errors():
    f = T.sample(lambda x: np.cos(x[:, 0]), Hm.build_grid(G.Torus(1), 4.0))
    for p in (1.0, 2.5):
        with pytest.raises(ArgumentError):
            TH.hausdorff_young_check(f, p)


# ---------------------------------------------------------------- multipliers

def test_gamma_zero_is_identity():
    s = T.random_spectrum(G.SU2, 5.0, 1)
    sym = TH.MultiplierSymbol(0.0)
    assert TH.apply_multiplier(s, sym).dumps() == s.dumps()
    assert sym.constant == 1.0


def test_bessel_commutes_with_translation(rng):
    s = T.random_spectrum(G.SU2, 6.0, 2)
    h = G.random_element(G.SU2, rng)
    sym = TH.MultiplierSymbol(0.4)
    for side in ("left", "right"):
        a = TH.apply_multiplier(T.translate_spectrum(s, h, side), sym)
        b = T.translate_spectrum(TH.apply_multiplier(s, sym), h, side)
        assert (a - b).norm() <= 1e-12 * s.norm()


def test_custom_diagonal_symbol_tail_bound(rng):
    gamma = 0.3
    diag = {}

    def rule(p):
        if p.label not in diag:
            diag[p.label] = rng.uniform(-1, 1, p.dim) * p.weight ** -gamma
        return np.diag(diag[p.label])

    s = Z.prescribed_tail(G.SU2, 0.4, 0.0, G.band_for_label(G.SU2, 40), seed=1)
    sym = TH.MultiplierSymbol(gamma, rule)
    out = TH.apply_multiplier(s, sym)
    assert 0 < sym.constant <= 1.0
    Ns = np.geomspace(1, 20, 10)
    lhs = S.tail_sums(out, Ns)
    rhs = sym.constant ** 2 * Ns ** (-2 * gamma) * S.tail_sums(s, Ns)
    assert np.all(lhs <= rhs * (1 + 1e-12))


def test_multiplier_symbol_validation():
    with pytest.raises(ArgumentError):
        TH.MultiplierSymbol(-0.1)
    bad = TH.MultiplierSymbol(0.1, lambda p: np.eye(p.dim + 1))
    with pytest.raises(ArgumentError):
        TH.apply_multiplier(T.random_spectrum(G.SU2, 3.0, 0), bad)
    with pytest.raises(ArgumentError):
        TH.check_multiplier_regularity(Z.lacunary(0.6, 64), 0.6, 0.4)


def test_multiplier_regularity_hardy_littlewood_tail():
    r = TH.check_multiplier_regularity(Z.hardy_littlewood(0.25, 2 ** 16), 0.25, 0.25,
                                       tail_only=True)
    assert r.verdict == "pass"
    assert r.observed["symbol_constant"] == 1.0


def test_multiplier_regularity_lacunary():
    r = TH.check_multiplier_regularity(Z.lacunary(0.3, 2 ** 14), 0.3, 0.3,
                                       fit=TH.FitProfile(directions=4, radii=16))
    assert r.verdict == "pass"
    assert 0 < r.observed["norm_chain_constant"] < math.inf


# ---------------------------------------------------------------- lemma on l^beta0 reduction

def test_reduction_inside_boundary():
    H = Z.borderline_dual(G.SU2, 2.0, G.band_for_label(G.SU2, 128), log_power=1)
    r = TH.reduction_check(H, 2.0)
    assert math.isclose(r.predicted["threshold"], 1.2)
    assert r.observed["precondition"] == "converges"
    assert r.observed["classes"]["1.08"] == "diverges"
    assert r.verdict == "pass"


def test_reduction_on_boundary_is_inconclusive():
    H = Z.borderline_dual(G.SU2, 2.0, G.band_for_label(G.SU2, 128), log_power=0)
    assert TH.reduction_check(H, 2.0).verdict == "inconclusive"


def test_reduction_single_entry_and_errors():
    assert TH.reduction_check(Z.single_mode(G.SU2, 3), 2.0).verdict == "pass"
    with pytest.raises(ArgumentError):
        TH.reduction_check(Z.single_mode(G.SU2, 3), 0.5)


# ---------------------------------------------------------------- Hardy-Littlewood, Weyl, lift

def test_hardy_littlewood_half():
    r = TH.hardy_littlewood_check(0.5)
    assert r.verdict == "pass"
    assert r.observed["log_growth"]["r_squared"] >= 0.99


@pytest.mark.parametrize("g", [G.Torus(2), G.SU2])
def test_weyl(g):
    r = TH.check_weyl(g)
    assert r.verdict == "pass"
    assert set(r.observed["classes"].values()) == {"converges", "diverges"}


def test_weyl_constants():
    assert math.isclose(TH.weyl_constant(G.Torus(1)), 2.0)
    assert math.isclose(TH.weyl_constant(G.Torus(2)), math.pi)
    assert TH.weyl_constant(G.SU2) == 8 / 3


def test_lift_check_small_band():
    r = TH.lift_check(G.band_for_label(G.Sphere2, 8), shifts=4)
    assert r.verdict == "pass"
    assert r.margins["off_pattern"] <= 1e-10


# ---------------------------------------------------------------- reports

def test_report_json_and_verdict_rule():
    r = TH.duren_check(a=2, b=1, d=0, k_max=10 ** 4)
    doc = json.loads(r.dumps())
    assert doc["verdict"] == r.verdict and doc["name"] == "duren"
    assert set(doc["observed"]) == {"head", "tail"}
    verdict, margin = TH._verdict({"x": 0.04, "y": -0.2}, {"x": 0.05, "y": 0.1})
    assert verdict == "fail" and margin == -0.2
    assert TH._verdict({"x": 0.04}, {"x": 0.05})[0] == "pass"
    assert TH._verdict({"x": 0.0}, {"x": 0.05}, reliable=False)[0] == "inconclusive"
