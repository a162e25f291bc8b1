import math
import warnings

import numpy as np
import pytest

from hhft import groups as G
from hhft import harmonics as Hm
from hhft import lipschitz as L
from hhft import spaces as S
from hhft import transform as T
from hhft import zoo as Z
from hhft.errors import ArgumentError, ConfigurationError


def tail_fit(s, Ns):
    return L.fit_decay(np.stack([Ns, S.tail_sums(s, Ns)], 1))


def test_hardy_littlewood_coefficients():
    s = Z.hardy_littlewood(0.25, 8)
    assert s.entry(1)[0, 0] == 1.0
    assert math.isclose(abs(s.entry(2)[0, 0]), 2 ** -0.75, rel_tol=1e-15)
    assert np.all(s.hs_sq()[s.labels[:, 0] <= 0] == 0)


@pytest.mark.parametrize("alpha", [0.5, 0.75])
def test_hardy_littlewood_tail_law(alpha):
    s = Z.hardy_littlewood(alpha, 2 ** 16)
    for N in 2.0 ** np.arange(6, 13):
        scaled = S.tail_sum(s, N) * N ** (2 * alpha)
        assert abs(scaled * 2 * alpha - 1) <= 0.1


def test_hardy_littlewood_validation():
    for a in (0.0, 1.0, -0.2):
        with pytest.raises(ArgumentError):
            Z.hardy_littlewood(a, 16)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 1.0])
def test_lacunary_geometric_tail(alpha):
    s = Z.lacunary(alpha, 2 ** 16)
    for m in range(0, 17):
        exact = 2 ** (-2 * alpha * m) * (1 - 2 ** (-2 * alpha * (17 - m))) / (1 - 2 ** (-2 * alpha))
        assert math.isclose(S.tail_sum(s, 2 ** m), exact, rel_tol=1e-12)


def test_lacunary_alpha_one_tail_slope():
    s = Z.lacunary(1.0, 2 ** 16)
    Ns = 2.0 ** np.arange(2, 12) * 1.5
    assert abs(tail_fit(s, Ns).exponent_b + 2) <= 0.05


def test_lacunary_modulus_slope():
    s = Z.lacunary(0.5, 2 ** 14)
    radii = np.geomspace(2 / 2 ** 14, 0.5, 24)
    rep = L.fit_modulus(L.modulus(s, h_radii=radii), drop=0)
    assert abs(rep.exponent_b - 0.5) <= 0.07


def test_prescribed_tail_su2():
    band = G.band_for_label(G.SU2, 256)
    s = Z.prescribed_tail(G.SU2, 0.5, 0.0, band, seed=4)
    Ns = np.geomspace(2, band / 2, 24)
    assert abs(tail_fit(s, Ns).exponent_b + 1) <= 0.05


def test_prescribed_tail_alpha_zero_warns():
    with pytest.warns(Z.NonSquareSummableWarning):
        s = Z.prescribed_tail(G.Torus(1), 0.0, 0.0, 64.0)
    # constant shell energy: every complete dyadic shell carries unit energy
    assert math.isclose(S.tail_sum(s, 2.0) - S.tail_sum(s, 4.0), 1.0, rel_tol=1e-12)
    with pytest.raises(ArgumentError):
        Z.prescribed_tail(G.Torus(1), 0.0, -1.0, 64.0)


@pytest.mark.parametrize("g", [G.Torus(2), G.SU2, G.Sphere2])
def test_prescribed_tail_deterministic(g):
    a = Z.prescribed_tail(g, 0.4, 1.0, 12.0, seed=9)
    b = Z.prescribed_tail(g, 0.4, 1.0, 12.0, seed=9)
    assert a.dumps() == b.dumps()
    c = Z.prescribed_tail(g, 0.4, 1.0, 12.0, seed=10)
    assert a.dumps() != c.dumps()


@pytest.mark.parametrize("g", [G.Torus(1), G.SU2, G.Sphere2])
def test_heat_kernel_plancherel(g):
    band, t = 16.0, 0.05
    s = Z.heat_kernel(g, t, band)
    assert s.blocks[0][0, 0] == 1.0
    k = s.ks
    ref = math.fsum(d * kk * math.exp(-2 * t * p.lambda_sq) for d, kk, p in zip(s.dims, k, s.points))
    f = T.inverse(s, Hm.build_grid(g, band))
    assert abs(f.lp_norm(2) ** 2 - ref) <= 1e-9 * ref


@pytest.mark.parametrize("g", [G.Torus(1), G.SU2])
def test_heat_kernel_is_smooth(g):
    s = Z.heat_kernel(g, 0.1, 40.0)
    rep = L.fit_modulus(L.modulus(s))
    assert rep.exponent_b >= 0.95


def test_zonal_examples():
    s = Z.zonal(0.0, 3.0)
    assert [p.label[0] for p in s.points] == [0, 1, 2]
    assert all(b[0, 0] == 1.0 and np.count_nonzero(b) == 1 for b in s.blocks)
    s = Z.zonal(1.5, 30.0)
    assert all(np.count_nonzero(b[1:]) == 0 for b in s.blocks)
    _, lifted = T.lift_to_group(T.inverse(s, Hm.build_grid(G.Sphere2, 30.0)))
    out, total = T.off_pattern_mass(lifted)
    assert out <= 1e-10 * total


def test_zonal_tail_against_shell_sum():
    s, band = 1.5, 200.0
    sp = Z.zonal(s, band)
    top = G.max_label(G.Sphere2, band)
    Ns = np.geomspace(4, 50, 12)
    direct = []
    for N in Ns:
        ls = [l for l in range(top + 1) if math.sqrt(1 + l * (l + 1)) >= N]
        direct.append(math.fsum((2 * l + 1) * (1 + l * (l + 1)) ** -s for l in ls))
    assert np.allclose(S.tail_sums(sp, Ns), direct, rtol=1e-12)
    # shells of 2l+1 points turn l^(-2s) into an N^(2 - 2s) tail, cut by the band
    slope = tail_fit(sp, Ns).exponent_b
    assert abs(slope - L.fit_decay(np.stack([Ns, direct], 1)).exponent_b) <= 1e-12
    assert -1.4 <= slope <= -0.9


FAMILIES = [
    ("t1", "hardy:alpha=0.3", 32.0),
    ("t1", "lacunary:alpha=0.5", 32.0),
    ("su2", "tail:alpha=0.4,d=1", 6.0),
    ("s2", "tail:alpha=0.4", 6.0),
    ("t2", "heat:t=0.1", 6.0),
    ("s2", "zonal:s=1", 6.0),
    ("su2", "constant:value=2", 6.0),
    ("su2", "single:label=3", 6.0),
    ("s2", "random", 6.0),
]


@pytest.mark.parametrize("group,text,band", FAMILIES)
def test_every_family_roundtrips(group, text, band):
    g = G.parse_group(group)
    s = Z.FunctionSpec.parse(text, band=band, seed=1).build(g)
    grid = Hm.build_grid(g, s.band)
    back = T.forward(T.inverse(s, grid))
    assert (back - s).norm() <= 1e-9 * s.norm()
    again = Z.FunctionSpec.parse(text, band=band, seed=1).build(g)
    assert again.dumps() == s.dumps()


def test_function_spec_parsing():
    spec = Z.FunctionSpec.parse("tail:alpha=0.5,d=-1,band=20,seed=3")
    assert spec.family == "prescribed_tail"
    assert spec.parameters == {"alpha": 0.5, "d": -1.0}
    assert spec.band == 20.0 and spec.seed == 3
    assert Z.FunctionSpec.parse("single:label=1;-2").parameters["label"] == (1, -2)


@pytest.mark.parametrize("text", ["nope", "tail:alpha", "tail:beta=1", "tail:alpha=x", "heat:=1"])
def test_function_spec_errors(text):
    with pytest.raises(ConfigurationError):
        Z.FunctionSpec.parse(text)


def test_function_spec_build_errors():
    with pytest.raises(ConfigurationError):
        Z.FunctionSpec.parse("lacunary:alpha=0.5", band=8).build(G.SU2)
    with pytest.raises(ConfigurationError):
        Z.FunctionSpec.parse("tail:d=1", band=8).build(G.SU2)
    with pytest.raises(ConfigurationError):
        Z.FunctionSpec.parse("heat:t=1").build(G.SU2)
