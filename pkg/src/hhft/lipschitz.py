"""Moduli of continuity under translation, Lipschitz seminorms, decay fits."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, asdict
from typing import Optional, Sequence, Union

import numpy as np

from . import groups as G
from . import transform as T
from .errors import ArgumentError

DEFAULT_RADII = 24
DEFAULT_DIRECTIONS = 16
DEFAULT_DROP = 3


def default_radii(count: int = DEFAULT_RADII, r_max: float = 0.5, r_min: float = 1e-3) -> np.ndarray:
    """Geometric radius schedule, descending."""
    return np.geomspace(r_max, r_min, count)


@dataclass
class ModulusCurve:
    radii: np.ndarray
    values: np.ndarray
    p: float
    side: str = "left"
    directions_per_radius: int = DEFAULT_DIRECTIONS
    # radii where omega dropped by more than 5% when the radius grew
    monotonicity_flags: list = field(default_factory=list)

    def rows(self, alpha: Optional[float] = None):
        for r, w in zip(self.radii, self.values):
            ratio = w / r ** alpha if alpha is not None else float("nan")
            yield float(r), float(w), float(ratio)


@dataclass
class DecayReport:
    """y ~ C x^b (log x)^d on ``window``; ``reliable`` is False on degenerate input."""

    exponent_b: float
    log_exponent_d: float
    constant_C: float
    r_squared: float
    window: tuple
    reliable: bool = True
    model: str = "power"
    n_points: int = 0

    def to_json(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------------------
# fitting


def _lstsq(A: np.ndarray, y: np.ndarray):
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(resid @ resid) / ss_tot if ss_tot > 0 else 1.0
    return coef, r2


def fit_decay(points, model: str = "power", cumulative: bool = False,
              iterations: int = 8) -> DecayReport:
    """Least squares on log y against {1, log x} or {1, log x, log log x}.

    With ``cumulative=True`` the power_log regressor becomes
    log(log x - 1/b), iterated from the plain fit.  That is the leading
    correction for partial sums or tails of a power-log density and removes
    most of the bias of the plain regressor on such data.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ArgumentError("points must be a sequence of (x, y) pairs")
    x, y = pts[:, 0], pts[:, 1]
    if np.any(x <= 0) or np.any(y <= 0):
        raise ArgumentError("fit_decay needs positive x and y")
    if model not in ("power", "power_log"):
        raise ArgumentError(f"unknown model {model!r}")
    dx = np.diff(x)
    if len(x) >= 2 and not (np.all(dx > 0) or np.all(dx < 0)):
        raise ArgumentError("x must be strictly monotone")
    window = (float(x.min()), float(x.max())) if len(x) else (float("nan"),) * 2
    nparams = 2 if model == "power" else 3
    if len(x) < max(4, nparams + 1):
        return DecayReport(float("nan"), 0.0, float("nan"), float("nan"), window, False, model, len(x))
    lx, ly = np.log(x), np.log(y)
    if model == "power":
        A = np.stack([np.ones_like(lx), lx], axis=1)
    else:
        if np.any(lx <= 0):
            raise ArgumentError("power_log model needs x > 1")
        A = np.stack([np.ones_like(lx), lx, np.log(lx)], axis=1)
    reliable = np.linalg.matrix_rank(A) == A.shape[1] and np.linalg.cond(A) < 1e12
    if not reliable:
        return DecayReport(float("nan"), 0.0, float("nan"), float("nan"), window, False, model, len(x))
    coef, r2 = _lstsq(A, ly)
    if model == "power_log" and cumulative:
        for _ in range(iterations):
            b = coef[1]
            if abs(b) < 1e-3:
                break
            shifted = lx - 1.0 / b
            if np.any(shifted <= 0):
                break
            A2 = np.stack([np.ones_like(lx), lx, np.log(shifted)], axis=1)
            coef, r2 = _lstsq(A2, ly)
    d = float(coef[2]) if model == "power_log" else 0.0
    return DecayReport(float(coef[1]), d, float(math.exp(coef[0])), float(r2), window, True,
                       model, len(x))


def fit_window(x: np.ndarray, y: np.ndarray, drop: int = DEFAULT_DROP):
    """Drop ``drop`` points from each end (sorted by x) when enough remain."""
    order = np.argsort(x)
    x, y = np.asarray(x)[order], np.asarray(y)[order]
    if drop and len(x) - 2 * drop >= 4:
        x, y = x[drop:-drop], y[drop:-drop]
    return x, y


def fit_modulus(curve: ModulusCurve, model: str = "power", drop: int = DEFAULT_DROP,
                r_range: Optional[tuple] = None) -> DecayReport:
    """Fit omega ~ C h^alpha (log 1/h)^d.

    The returned report is expressed in h: ``exponent_b`` is alpha-hat and
    ``window`` is the range of radii used.
    """
    r, w = np.asarray(curve.radii, float), np.asarray(curve.values, float)
    keep = w > 0
    if r_range is not None:
        keep &= (r >= r_range[0]) & (r <= r_range[1])
    r, w = r[keep], w[keep]
    x, y = fit_window(1.0 / r, w, drop if r_range is None else 0)
    rep = fit_decay(np.stack([x, y], axis=1), model)
    rep.exponent_b = -rep.exponent_b
    rep.window = (float(1.0 / x.max()), float(1.0 / x.min())) if len(x) else rep.window
    return rep


# ---------------------------------------------------------------------------
# moduli


def translation_difference(s: T.Spectrum, h: G.GroupElement, side: str = "left") -> np.ndarray:
    """Per dual point ||fhat(xi)(xi(h) - I)||_HS (left) or ||(xi(h) - I) fhat(xi)||_HS."""
    if s.group.kind == "s2" and side == "right":
        raise ArgumentError("the sphere has no right translation")
    if s.group.kind == "torus":
        ph = s.labels.reshape(len(s), s.group.n) @ h.coords
        return np.sqrt(s.hs_sq()) * np.abs(np.exp(1j * ph) - 1.0)
    out = np.empty(len(s))
    for i, (blk, rep) in enumerate(zip(s.blocks, T.rep_matrices(s, h))):
        diff = rep - np.eye(rep.shape[0])
        prod = blk @ diff if side == "left" else diff @ blk
        out[i] = math.sqrt(float(np.vdot(prod, prod).real))
    return out


def _nonzero(s: T.Spectrum) -> T.Spectrum:
    keep = [i for i, b in enumerate(s.blocks) if np.any(b)]
    if len(keep) == len(s):
        return s
    return T.Spectrum(s.group, s.band, tuple(s.points[i] for i in keep),
                      tuple(s.blocks[i] for i in keep))


class _SpectralModulus:
    """Plancherel form of the L^2 modulus with per-block Gram matrices.

    ||B (U - I)||_HS^2 = -2 Re Tr(B^* B (U - I)), so after one Gram product
    per block each shift costs O(d^2) per dual point instead of O(d^3).
    """

    def __init__(self, s: T.Spectrum, side: str):
        self.s, self.side = s, side
        if s.group.kind == "torus":
            self.energy = s.dims * s.hs_sq()
            self.phase = s.labels.reshape(len(s), s.group.n)
        else:
            grams = [b.conj().T @ b if side == "left" else b @ b.conj().T for b in s.blocks]
            self.grams_t = [gm.T for gm in grams]

    def __call__(self, h: G.GroupElement) -> float:
        s = self.s
        if s.group.kind == "torus":
            amp = np.abs(np.exp(1j * (self.phase @ h.coords)) - 1.0)
            return math.sqrt(float(np.sum(self.energy * amp ** 2)))
        total = 0.0
        for p, gt, rep in zip(s.points, self.grams_t, T.rep_matrices(s, h)):
            diff = rep - np.eye(rep.shape[0])
            total += p.dim * -2.0 * float(np.sum(gt * diff).real)
        return math.sqrt(max(total, 0.0))


def difference_norm(f: T.GridFunction, spec: T.Spectrum, h: G.GroupElement, side: str = "left",
                    p: float = 2.0, method: str = "synthesis") -> float:
    """||f(h.) - f||_{L^p} by quadrature on the grid of ``f`` (``spec`` = forward(f))."""
    if method == "synthesis":
        shifted = T.inverse(T.translate_spectrum(spec, h, side), f.grid).samples
    else:
        shifted = T.evaluate(spec, T.act(h, f.grid.nodes, side))
    diff = np.abs(shifted - f.samples)
    if math.isinf(p):
        return float(diff.max())
    return float(np.sum(f.grid.weights * diff ** p) ** (1.0 / p))


def shifts(g: G.GroupDescriptor, radii: Sequence[float], directions: int, seed) -> list:
    """The seeded shift sample: one list of elements per radius."""
    rng = np.random.default_rng(seed)
    return [[G.random_element(g, rng, float(r)) for _ in range(directions)] for r in radii]


def modulus(f: Union[T.GridFunction, T.Spectrum], p: float = 2.0, h_radii=None,
            side: str = "left", directions: int = DEFAULT_DIRECTIONS, seed=0,
            method: str = "synthesis") -> ModulusCurve:
    """omega_p(f; r) = max over sampled |h| = r of ||f(h.) - f||_{L^p}.

    Spectrum input uses the Plancherel identity (p = 2 only).  GridFunction
    input measures the difference by quadrature; the shifted samples are
    synthesized from the translated spectrum (``method="synthesis"``) or by
    direct evaluation at the shifted nodes (``method="pointwise"``).
    """
    if not p >= 1:
        raise ArgumentError(f"p must be >= 1, got {p}")
    if side not in ("left", "right"):
        raise ArgumentError(f"side must be 'left' or 'right', got {side!r}")
    if method not in ("synthesis", "pointwise"):
        raise ArgumentError(f"unknown method {method!r}")
    radii = default_radii() if h_radii is None else np.asarray(h_radii, dtype=float)
    if isinstance(f, T.Spectrum):
        g = f.group
        if p != 2:
            raise ArgumentError("spectral modulus needs p = 2")
        if g.kind == "s2" and side == "right":
            raise ArgumentError("the sphere has no right translation")
        value = _SpectralModulus(_nonzero(f), side)
    else:
        g = f.grid.group
        spec = T.forward(f)
        value = lambda h: difference_norm(f, spec, h, side, p, method)
    if g.kind == "s2" and side == "right":
        raise ArgumentError("the sphere has no right translation")
    sample = shifts(g, radii, directions, seed)
    vals = np.array([max(value(h) for h in row) for row in sample])
    curve = ModulusCurve(radii, vals, float(p), side, directions)
    curve.monotonicity_flags = monotonicity_flags(curve)
    return curve


def monotonicity_flags(curve: ModulusCurve, tol: float = 0.05) -> list:
    """Radii r at which omega(r) < (1 - tol) * omega(r') for some smaller r'."""
    order = np.argsort(curve.radii)
    r, w = curve.radii[order], curve.values[order]
    running = np.maximum.accumulate(w)
    return [float(ri) for ri, wi, mi in zip(r, w, running) if wi < (1 - tol) * mi]


def lip_seminorm(curve: ModulusCurve, alpha: float) -> float:
    """max over sampled radii of r^(-alpha) omega(r): a sampled lower bound of the sup."""
    if len(curve.radii) == 0:
        raise ArgumentError("empty modulus curve")
    return float(np.max(np.asarray(curve.values) / np.asarray(curve.radii) ** alpha))


def write_modulus_csv(curve: ModulusCurve, path, alpha: Optional[float] = None):
    order = np.argsort(-np.asarray(curve.radii))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["h", "omega", "ratio_alpha"])
        rows = list(curve.rows(alpha))
        for i in order:
            w.writerow(["%.17g" % v for v in rows[i]])
