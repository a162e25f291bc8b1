"""Test functions and synthetic spectra with known regularity."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import groups as G
from .errors import ArgumentError, ConfigurationError
from .transform import Spectrum, random_spectrum


class NonSquareSummableWarning(UserWarning):
    """The requested law has a divergent tail; only the truncation is finite."""


def _torus_band(top: int) -> float:
    """Band containing every frequency |n| <= top on the circle."""
    return math.sqrt(1.0 + float(top) ** 2)


def hardy_littlewood(alpha: float, band: int) -> Spectrum:
    """One-sided series with coefficients exp(i n log n) n^-(1/2 + alpha), 1 <= n <= band."""
    if not 0 < alpha < 1:
        raise ArgumentError(f"alpha must lie in (0, 1), got {alpha}")
    top = int(band)
    if top < 1:
        raise ArgumentError("band must be >= 1")
    n = np.arange(1, top + 1, dtype=float)
    coef = np.exp(1j * n * np.log(n)) * n ** -(0.5 + alpha)
    return Spectrum.from_entries(G.Torus(1), _torus_band(top),
                                 {(int(k),): c for k, c in zip(n, coef)})


def lacunary(alpha: float, band: int) -> Spectrum:
    """Coefficients 2^(-alpha k) at frequency 2^k, 2^k <= band."""
    if not 0 < alpha <= 1:
        raise ArgumentError(f"alpha must lie in (0, 1], got {alpha}")
    top = int(band)
    if top < 1:
        raise ArgumentError("band must be >= 1")
    entries = {}
    k = 0
    while 2 ** k <= top:
        entries[(2 ** k,)] = 2.0 ** (-alpha * k)
        k += 1
    return Spectrum.from_entries(G.Torus(1), _torus_band(top), entries)


def shell_energy(s: int, alpha: float, d: float) -> float:
    N = 2.0 ** s
    return N ** (-2 * alpha) * math.log(math.e + N) ** (2 * d)


def _remainder(first: int, alpha: float, d: float) -> float:
    """sum_{s >= first} shell_energy(s) for alpha > 0."""
    total, s = 0.0, first
    while True:
        e = shell_energy(s, alpha, d)
        total += e
        if e < 1e-18 * total or s > first + 5000:
            return total
        s += 1


def _random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph


def prescribed_tail(g: G.GroupDescriptor, alpha: float, d: float, band: float,
                    seed: int = 0) -> Spectrum:
    """Spectrum whose dyadic-shell energies follow N^(-2 alpha) (log(e + N))^(2 d).

    Shell s collects the nontrivial dual points with 2^s <= <xi> < 2^(s+1);
    its energy sum d_xi ||fhat||_HS^2 is split equally among them.  For
    alpha > 0 the energy of the shells beyond the band is added to the last
    (possibly partial) shell so that tails near the band match the infinite
    law.  Each block is a scaled Haar-random unitary (sphere: a random unit
    row in the invariant position) with seeded phases.
    """
    if alpha < 0:
        raise ArgumentError(f"alpha must be >= 0, got {alpha}")
    if alpha == 0 and d < 0:
        raise ArgumentError("alpha = 0 requires d >= 0")
    if alpha == 0:
        warnings.warn("alpha = 0: the shell law is not square-summable; "
                      "only the band truncation is finite", NonSquareSummableWarning,
                      stacklevel=2)
    rng = np.random.default_rng(seed)
    G.require_dense(g, band)
    pts = G.enumerate_dual(g, band)
    shells: dict[int, list[int]] = {}
    for i, p in enumerate(pts):
        if p.lambda_sq == 0:
            continue
        s = int(math.floor(math.log2(p.weight) + 1e-12))
        shells.setdefault(s, []).append(i)
    energy = np.zeros(len(pts))
    if shells:
        top = max(shells)
        for s, idx in shells.items():
            e = shell_energy(s, alpha, d)
            if s == top and alpha > 0:
                e += _remainder(top + 1, alpha, d)
            energy[idx] = e / len(idx)
    blocks = []
    for p, e in zip(pts, energy):
        if e == 0:
            blocks.append(np.zeros((p.dim, p.dim), complex))
            continue
        hs = math.sqrt(e / p.dim)
        if g.kind == "s2":
            v = rng.standard_normal(p.dim) + 1j * rng.standard_normal(p.dim)
            b = np.zeros((p.dim, p.dim), complex)
            b[0, :] = hs * v / np.linalg.norm(v)
        else:
            b = hs / math.sqrt(p.dim) * _random_unitary(rng, p.dim)
        blocks.append(b)
    return Spectrum(g, float(band), tuple(pts), tuple(blocks))


def borderline_dual(g: G.GroupDescriptor, b0: float, band: float, log_power: float = 0.0,
                    seed: int = 0) -> Spectrum:
    """Dual field with ||H(xi)||_HS = sqrt(d) <xi>^(-1 - n/beta0) log(e + <xi>)^(-log_power).

    With log_power = 0, <xi> H sits exactly on the l^beta0 boundary (log
    divergent); log_power = 1 puts it just inside.
    """
    n = g.counting_dimension
    rng = np.random.default_rng(seed)
    G.require_dense(g, band)
    pts = G.enumerate_dual(g, band)
    blocks = []
    for p in pts:
        hs = math.sqrt(p.dim) * p.weight ** (-1 - n / b0) * math.log(math.e + p.weight) ** (-log_power)
        if g.kind == "s2":
            v = rng.standard_normal(p.dim) + 1j * rng.standard_normal(p.dim)
            b = np.zeros((p.dim, p.dim), complex)
            b[0] = hs * v / np.linalg.norm(v)
        else:
            b = hs / math.sqrt(p.dim) * _random_unitary(rng, p.dim)
        blocks.append(b)
    return Spectrum(g, float(band), tuple(pts), tuple(blocks))


def heat_kernel(g: G.GroupDescriptor, t: float, band: float) -> Spectrum:
    """exp(-t lambda^2) times the identity (sphere: the invariant entry only)."""
    if not t > 0:
        raise ArgumentError(f"t must be positive, got {t}")

    def block(p):
        c = math.exp(-t * p.lambda_sq)
        if g.kind == "s2":
            b = np.zeros((p.dim, p.dim), complex)
            b[0, 0] = c
            return b
        return c * np.eye(p.dim, dtype=complex)

    G.require_dense(g, band)
    pts = G.enumerate_dual(g, band)
    return Spectrum(g, float(band), tuple(pts), tuple(block(p) for p in pts))


def zonal(s: float, band: float) -> Spectrum:
    """Sphere spectrum (1 + l(l+1))^(-s/2) in the invariant entry of degree l."""
    G.require_dense(G.Sphere2, band)
    pts = G.enumerate_dual(G.Sphere2, band)
    blocks = []
    for p in pts:
        b = np.zeros((p.dim, p.dim), complex)
        b[0, 0] = p.weight ** (-s)
        blocks.append(b)
    return Spectrum(G.Sphere2, float(band), tuple(pts), tuple(blocks))


def constant(g: G.GroupDescriptor, band: float = 1.0, value: complex = 1.0) -> Spectrum:
    label = (0,) * g.n if g.kind == "torus" else (0,)
    return Spectrum.from_entries(g, band, {label: [[value]]})


def single_mode(g: G.GroupDescriptor, label, band: Optional[float] = None,
                seed: Optional[int] = None) -> Spectrum:
    """One nonzero block: the identity (seed None) or a seeded Gaussian matrix."""
    p = G.dual_point(g, label)
    band = p.weight if band is None else band
    if seed is None:
        mat = np.eye(p.dim, dtype=complex)
    else:
        rng = np.random.default_rng(seed)
        mat = rng.standard_normal((p.dim, p.dim)) + 1j * rng.standard_normal((p.dim, p.dim))
    if g.kind == "s2":
        mat[1:, :] = 0.0
    return Spectrum.from_entries(g, band, {p.label: mat})


# ---------------------------------------------------------------------------
# FunctionSpec grammar: family:key=value,key=value

ALIASES = {
    "hardy": "hardy_littlewood",
    "hardy_littlewood": "hardy_littlewood",
    "lacunary": "lacunary",
    "tail": "prescribed_tail",
    "prescribed_tail": "prescribed_tail",
    "heat": "heat_kernel",
    "heat_kernel": "heat_kernel",
    "zonal": "zonal",
    "constant": "constant",
    "single": "single_mode",
    "single_mode": "single_mode",
    "random": "random",
}

KEYS = {
    "hardy_littlewood": {"alpha"},
    "lacunary": {"alpha"},
    "prescribed_tail": {"alpha", "d"},
    "heat_kernel": {"t"},
    "zonal": {"s"},
    "constant": {"value"},
    "single_mode": {"label"},
    "random": set(),
}


@dataclass
class FunctionSpec:
    family: str
    parameters: dict = field(default_factory=dict)
    band: Optional[float] = None
    seed: int = 0

    @classmethod
    def parse(cls, text: str, band: Optional[float] = None, seed: int = 0) -> "FunctionSpec":
        head, _, rest = text.strip().partition(":")
        fam = ALIASES.get(head.strip().lower())
        if fam is None:
            raise ConfigurationError(f"unknown function family {head!r}")
        params = {}
        if rest.strip():
            for tok in rest.split(","):
                key, eq, val = tok.partition("=")
                key = key.strip()
                if not eq or not key:
                    raise ConfigurationError(f"malformed parameter token {tok!r}")
                if key not in KEYS[fam] and key not in ("band", "seed"):
                    raise ConfigurationError(f"unknown parameter {key!r} for {fam}")
                try:
                    if key == "label":
                        params[key] = tuple(int(v) for v in val.split(";"))
                    else:
                        params[key] = float(val)
                except ValueError:
                    raise ConfigurationError(f"bad value in token {tok!r}") from None
        if "band" in params:
            band = params.pop("band")
        if "seed" in params:
            seed = int(params.pop("seed"))
        return cls(fam, params, band, seed)

    def build(self, g: G.GroupDescriptor) -> Spectrum:
        p, band = self.parameters, self.band
        fam = self.family
        if band is None and fam not in ("constant", "single_mode"):
            raise ConfigurationError(f"{fam} needs a band")
        if fam in ("hardy_littlewood", "lacunary"):
            if g != G.Torus(1):
                raise ConfigurationError(f"{fam} lives on t1, not {g}")
            if "alpha" not in p:
                raise ConfigurationError(f"{fam} needs alpha")
            fn = hardy_littlewood if fam == "hardy_littlewood" else lacunary
            return fn(p["alpha"], int(band))
        if fam == "prescribed_tail":
            if "alpha" not in p:
                raise ConfigurationError("tail needs alpha")
            return prescribed_tail(g, p["alpha"], p.get("d", 0.0), band, self.seed)
        if fam == "heat_kernel":
            if "t" not in p:
                raise ConfigurationError("heat needs t")
            return heat_kernel(g, p["t"], band)
        if fam == "zonal":
            if g != G.Sphere2:
                raise ConfigurationError("zonal lives on s2")
            return zonal(p.get("s", 0.0), band)
        if fam == "random":
            return random_spectrum(g, band, self.seed)
        if fam == "constant":
            return constant(g, band or 1.0, p.get("value", 1.0))
        label = p.get("label")
        if label is None:
            raise ConfigurationError("single_mode needs label")
        return single_mode(g, label, band, self.seed)
