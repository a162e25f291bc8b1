"""Executable checkers for the Titchmarsh, Duren, Dini-Lipschitz and multiplier statements.

Each checker returns a :class:`CheckReport`.  Fits follow a single
:class:`FitProfile` and verdicts a single :class:`TolerancesProfile`; both are
recorded in every report.

Series membership is decided from partial sums on dyadic bands (see
:func:`classify_partial_sums`): finite data cannot prove convergence, so the
rule is a documented, reproducible proxy.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict
from typing import Callable, Optional, Union

import numpy as np

from . import groups as G
from . import harmonics as Hm
from . import lipschitz as L
from . import spaces as S
from . import transform as T
from . import zoo as Z
from .errors import ArgumentError


@dataclass
class TolerancesProfile:
    sequence_exponent: float = 0.05  # Duren head/tail exponents, sequence tails
    spectral_slope: float = 0.15  # tail slope of spectra vs the modulus coupling
    modulus_slope: float = 0.1
    duren_log: float = 0.2
    log_exponent: float = 0.3
    head_bound: float = 0.1
    coupling: float = 0.2
    growth_per_doubling: float = 0.05
    min_doublings: int = 4
    flat_slope: float = 0.02  # |b| below this counts as "no power trend"

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class FitProfile:
    """Windows for the asymptotic fits, relative to the spectrum band."""

    tail_lo: float = 2.0
    tail_lo_log: float = 16.0  # power-log fits need log N well away from 0
    tail_hi_fraction: float = 0.5
    tail_points: int = 24
    r_hi: float = 0.5
    r_hi_log: float = 1.0 / 16.0
    r_lo_factor: float = 2.0  # smallest radius = r_lo_factor / band
    r_floor: float = 1e-4
    radii: int = 24
    directions: int = 16

    def tail_grid(self, band: float, model: str = "power") -> np.ndarray:
        lo = self.tail_lo_log if model == "power_log" else self.tail_lo
        hi = max(lo * 4, band * self.tail_hi_fraction)
        return np.geomspace(lo, hi, self.tail_points)

    def radius_grid(self, band: float, model: str = "power") -> np.ndarray:
        hi = self.r_hi_log if model == "power_log" else self.r_hi
        lo = max(self.r_lo_factor / band, self.r_floor)
        return np.geomspace(hi, min(lo, hi / 4), self.radii)

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class CheckReport:
    name: str
    predicted: dict
    observed: dict
    margin: float
    verdict: str
    notes: str = ""
    tolerances: dict = field(default_factory=dict)
    seed: Optional[int] = None
    margins: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "predicted": _plain(self.predicted),
            "observed": _plain(self.observed),
            "margin": _plain(self.margin),
            "margins": _plain(self.margins),
            "verdict": self.verdict,
            "notes": self.notes,
            "tolerances": _plain(self.tolerances),
            "seed": self.seed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def _plain(v):
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, L.DecayReport):
        return _plain(v.to_json())
    if isinstance(v, np.ndarray):
        return _plain(v.tolist())
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (np.bool_,)):
        return bool(v)
    return v


def _verdict(margins: dict, tols: dict, reliable: bool = True, extra_ok: bool = True):
    """pass iff every |margin| <= its tolerance (and extra_ok); report the worst ratio."""
    if not reliable:
        return "inconclusive", float("nan")
    worst, worst_ratio = 0.0, -1.0
    ok = extra_ok
    for k, m in margins.items():
        t = tols[k]
        if not math.isfinite(m):
            return "inconclusive", float("nan")
        ratio = abs(m) / t if t > 0 else float("inf")
        if ratio > worst_ratio:
            worst, worst_ratio = m, ratio
        ok &= abs(m) <= t
    return ("pass" if ok else "fail"), float(worst)


# ---------------------------------------------------------------------------
# thresholds


def conjugate_exponent(p: float) -> float:
    return math.inf if p == 1 else p / (p - 1)


def beta0(alpha: float, p: float, n: int) -> float:
    """Smallest exponent beta with (I - L)^(1/2) f in l^beta for f in Lip(alpha; p)."""
    den = alpha + n - n / p - 1
    return math.inf if den <= 0 else n / den


def gamma_threshold(alpha: float, p: float, n: int) -> float:
    """fhat lies in l^gamma for gamma above n p / (alpha p + n p - n)."""
    return n * p / (alpha * p + n * p - n)


def reduction_threshold(b0: float, n: int) -> float:
    return n * b0 / (b0 + n)


def head_exponent(alpha: float, p: float, n: int, beta: float) -> float:
    q = conjugate_exponent(p)
    return (1 - alpha) * beta + n * (1 - beta / q)


# ---------------------------------------------------------------------------
# partial sums on dyadic bands


def dyadic_bands(band: float, start: float = 1.0) -> np.ndarray:
    top = int(math.floor(math.log2(band) + 1e-12))
    k0 = int(math.ceil(math.log2(start) - 1e-12))
    return 2.0 ** np.arange(k0, top + 1)


def complete_bands(s: T.Spectrum, start: float = 1.0) -> np.ndarray:
    """Dyadic bands 2^j that stop below the top dyadic shell of the data.

    The top shell may be partial and, for synthesized laws, carries the
    energy of everything beyond the band; it is left out of growth fits.
    """
    top = _signal_band(s)
    return dyadic_bands(2.0 ** math.floor(math.log2(top) + 1e-12), start)


def classify_partial_sums(bands, sums, tol: Optional[TolerancesProfile] = None) -> dict:
    """Decide convergence of a series from its partial sums at dyadic bands.

    increments = differences of consecutive partial sums, fitted over the
    trailing half of the doublings (at least ``min_doublings``).
    converges: increments fall off like a power of the band (slope < -flat),
               or show no power trend and a log exponent below -1.
    diverges:  increments grow like a power (slope > flat), or show no power
               trend with log exponent >= -1 while the sums keep growing by
               at least ``growth_per_doubling`` over ``min_doublings`` doublings.
    """
    tol = tol or TolerancesProfile()
    bands = np.asarray(bands, float)
    sums = np.asarray(sums, float)
    out = {"bands": bands.tolist(), "sums": sums.tolist()}
    inc = np.diff(sums)
    if len(inc) < tol.min_doublings:
        out["class"] = "inconclusive"
        out["reason"] = "too few doublings"
        return out
    growth = sums[1:] / np.where(sums[:-1] > 0, sums[:-1], np.nan) - 1.0
    out["growth"] = growth.tolist()
    if np.all(inc <= 0):
        out["class"] = "converges"
        out["reason"] = "partial sums constant"
        return out
    # asymptotics live at the end: fit the trailing half of the doublings
    tail_n = max(tol.min_doublings, len(inc) // 2)
    x, y = bands[1:][-tail_n:], inc[-tail_n:]
    pos = y > 0
    if pos.sum() < 4:
        out["class"] = "inconclusive"
        out["reason"] = "fewer than four positive increments"
        return out
    fit = L.fit_decay(np.stack([x[pos], y[pos]], 1), "power")
    out["increment_slope"] = fit.exponent_b
    sustained = bool(np.all(growth[-tol.min_doublings:] >= tol.growth_per_doubling))
    out["sustained_growth"] = sustained
    if fit.exponent_b < -tol.flat_slope:
        out["class"] = "converges"
        out["reason"] = "increments decay like a power of the band"
        return out
    if fit.exponent_b > tol.flat_slope:
        out["class"] = "diverges"
        out["reason"] = "increments grow like a power of the band"
        return out
    plog = L.fit_decay(np.stack([x[pos], y[pos]], 1), "power_log")
    out["increment_log_exponent"] = plog.log_exponent_d
    if plog.log_exponent_d < -1:
        out["class"] = "converges"
        out["reason"] = "flat increments with log exponent below -1"
    elif sustained:
        out["class"] = "diverges"
        out["reason"] = "flat increments, log exponent >= -1, sustained growth"
    else:
        out["class"] = "inconclusive"
        out["reason"] = "flat increments without sustained growth"
    return out


def partial_norm_classes(s: T.Spectrum, betas, tol: TolerancesProfile,
                         weighted: bool = True, class_one: bool = True) -> dict:
    """Classify the l^beta partial sums of <xi> fhat (or fhat) for each beta."""
    h = S.sobolev_weight(s, 1.0) if weighted else s
    bands = complete_bands(s)
    out = {}
    for b in betas:
        sums = S.partial_dual_sums(h, S.DualNormRequest(float(b), class_one), bands)
        out[float(b)] = classify_partial_sums(bands, sums, tol)
    return out


# ---------------------------------------------------------------------------
# Duren lemmas


def duren_sequence(a: float, b: float, d: float) -> Callable[[np.ndarray], np.ndarray]:
    """c_k = k^(b - a - 1) (log k)^d with c_1 = 0 when d < 0 (log 1 = 0)."""

    def c(k):
        k = np.asarray(k, float)
        with np.errstate(divide="ignore"):
            v = k ** (b - a - 1) * np.log(k) ** d if d != 0 else k ** (b - a - 1)
        if d < 0:
            v = np.where(k == 1, 0.0, v)
        return v

    return c


def duren_sums(c: Callable[[np.ndarray], np.ndarray], a: float, k_max: int):
    """Head sums H(N) = sum_{k<=N} k^a c_k and tails T(N) = sum_{N<=k<=k_max} c_k."""
    k = np.arange(1, k_max + 1, dtype=float)
    ck = np.asarray(c(k), float)
    if np.any(ck < 0):
        raise ArgumentError("Duren sequences must be nonnegative")
    head = np.cumsum(k ** a * ck)
    tail = np.cumsum(ck[::-1])[::-1]
    return head, tail


def duren_window(k_max: int, points: int = 30) -> np.ndarray:
    """Block starts N in [k_max^(1/3), k_max / 2], so every block [N, 2N) fits."""
    return np.unique(np.geomspace(k_max ** (1 / 3), k_max / 2, points).astype(int))


def _log_shift(b: float) -> float:
    """Mean of log t on [1, 2] under the density t^(b - 1).

    The block integral of x^(b-1) (log x)^d over [N, 2N] is
    N^b (log N + mu)^d to first order in d / log N, with mu = _log_shift(b).
    """
    if abs(b) < 1e-8:
        return math.log(2) / 2
    return 2 ** b * math.log(2) / (2 ** b - 1) - 1 / b


def fit_blocks(N: np.ndarray, blocks: np.ndarray, iterations: int = 8) -> L.DecayReport:
    """Fit dyadic block sums B(N) = sum_{N <= k < 2N} ~ N^b (log N)^d.

    Starts from the plain power_log fit and iterates the regressor
    log(log N + mu(b)), which removes the first-order log bias of blocks.
    """
    rep = L.fit_decay(np.stack([N, blocks], 1), "power_log")
    if not rep.reliable:
        return rep
    lx, ly = np.log(N.astype(float)), np.log(blocks)
    for _ in range(iterations):
        A = np.stack([np.ones_like(lx), lx, np.log(lx + _log_shift(rep.exponent_b))], 1)
        coef, r2 = L._lstsq(A, ly)
        rep.exponent_b, rep.log_exponent_d = float(coef[1]), float(coef[2])
        rep.constant_C, rep.r_squared = float(math.exp(coef[0])), r2
    return rep


def duren_check(c: Optional[Callable] = None, a: float = 2.0, b: float = 1.0, d: float = 0.0,
                k_max: int = 10 ** 6, tol: Optional[TolerancesProfile] = None) -> CheckReport:
    """Head sums ~ N^b (log N)^d and tails ~ N^(b-a) (log N)^d.

    ``c`` maps an array of k to c_k (default: k^(b-a-1) (log k)^d).  Both
    growth laws are read off the dyadic blocks H(2N) - H(N) and T(N) - T(2N),
    which share the exponents of H and T but carry neither the additive
    constant of the head nor the truncation at k_max of the tail.
    """
    tol = tol or TolerancesProfile()
    if not 0 < b < a:
        raise ArgumentError(f"need 0 < b < a, got a={a}, b={b}")
    if k_max < 1000:
        raise ArgumentError("k_max must be at least 1000")
    c = c or duren_sequence(a, b, d)
    head, tail = duren_sums(c, a, int(k_max))
    predicted = {"head_b": b, "head_d": d, "tail_b": b - a, "tail_d": d}
    tols = {"head_b": tol.sequence_exponent, "head_d": tol.duren_log,
            "tail_b": tol.sequence_exponent, "tail_d": tol.duren_log}
    if not np.any(head > 0):
        return CheckReport("duren", predicted, {"head": 0.0, "tail": 0.0}, 0.0, "pass",
                           "degenerate zero sequence: both sums vanish", tols)
    N = duren_window(int(k_max))
    hb = head[2 * N - 1] - head[N - 1]
    tb = tail[N - 1] - tail[2 * N - 1]
    hmask, tmask = hb > 0, tb > 0
    hfit = fit_blocks(N[hmask], hb[hmask])
    tfit = fit_blocks(N[tmask], tb[tmask])
    margins = {"head_b": hfit.exponent_b - b, "head_d": hfit.log_exponent_d - d,
               "tail_b": tfit.exponent_b - (b - a), "tail_d": tfit.log_exponent_d - d}
    verdict, margin = _verdict(margins, tols, hfit.reliable and tfit.reliable)
    notes = f"head - tail slope = {hfit.exponent_b - tfit.exponent_b:.4f} (a = {a})"
    return CheckReport("duren", predicted, {"head": hfit, "tail": tfit}, margin, verdict, notes,
                       tols, None, margins)


def duren_table(a: float, b: float, d: float, k_max: int, points: int = 40):
    """Rows (N, head, tail) on a geometric grid, for CSV output."""
    head, tail = duren_sums(duren_sequence(a, b, d), a, int(k_max))
    ns = np.unique(np.geomspace(1, k_max, points).astype(int))
    return [(int(n), float(head[n - 1]), float(tail[n - 1])) for n in ns]


# ---------------------------------------------------------------------------
# Titchmarsh A


def _check_alpha_p(alpha, p):
    if not 0 < alpha <= 1:
        raise ArgumentError(f"alpha must lie in (0, 1], got {alpha}")
    if not 1 < p <= 2:
        raise ArgumentError(f"p must lie in (1, 2], got {p}")


def _head_fit(s: T.Spectrum, beta: float, model: str = "power"):
    """Growth exponent of Phi(N) = partial l^beta sums of <xi> fhat.

    Fitted on the dyadic increments Phi(2N) - Phi(N): for positive exponents
    they grow like Phi itself, without the additive constant that biases a
    direct fit of Phi at small N.
    """
    h = S.sobolev_weight(s, 1.0)
    bands = complete_bands(s)
    sums = S.partial_dual_sums(h, S.DualNormRequest(beta), bands)
    x, y = bands[1:], np.diff(sums)
    keep = (y > 0) & (x > 1)
    return L.fit_decay(np.stack([x[keep], y[keep]], 1), model)


def check_titchmarsh_a(f: T.Spectrum, alpha: float, p: float = 2.0, n: Optional[int] = None,
                       betas=None, tol: Optional[TolerancesProfile] = None) -> CheckReport:
    """l^beta membership of <xi> fhat above beta0 and the head growth bound."""
    _check_alpha_p(alpha, p)
    tol = tol or TolerancesProfile()
    n = n or f.group.counting_dimension
    q = conjugate_exponent(p)
    b0 = beta0(alpha, p, n)
    gthr = gamma_threshold(alpha, p, n)
    predicted = {"beta0": b0, "q": q, "gamma_threshold": gthr,
                 "reduction_threshold": reduction_threshold(b0, n) if math.isfinite(b0) else None}
    if not math.isfinite(b0):
        return CheckReport("titchmarsh_a", predicted, {}, float("nan"), "inconclusive",
                           "beta0 is infinite for these parameters", tol.to_json())
    if betas is None:
        betas = [0.85 * b0, 0.95 * b0, b0, b0 + 0.05, b0 + 0.2]
    classes = partial_norm_classes(f, betas, tol)
    above = {b: c for b, c in classes.items() if b >= b0 + 0.05 - 1e-12}
    ok = all(c["class"] == "converges" for c in above.values())
    head_beta = min(q, max(betas))
    fit = _head_fit(f, head_beta)
    pred_head = head_exponent(alpha, p, n, head_beta)
    # an O-bound: the fitted growth may not exceed the prediction by more than the tolerance
    excess = fit.exponent_b - pred_head
    margins = {"head_exponent": max(excess, 0.0)}
    tols = {"head_exponent": tol.head_bound}
    verdict, margin = _verdict(margins, tols, fit.reliable, ok)
    observed = {"classes": {str(k): v["class"] for k, v in classes.items()},
                "details": {str(k): v for k, v in classes.items()},
                "head_beta": head_beta, "head_fit": fit, "predicted_head_exponent": pred_head}
    notes = ("membership asserted for beta >= beta0 + 0.05; values at or below beta0 "
             "are reported only")
    return CheckReport("titchmarsh_a", predicted, observed, margin, verdict, notes,
                       {**tol.to_json(), "head_excess": excess}, None, margins)


# ---------------------------------------------------------------------------
# Titchmarsh B (p = 2) and Dini-Lipschitz


@dataclass
class TailLaw:
    """Reverse-mode input: synthesize prescribed_tail(group, alpha, d, band, seed)."""

    group: G.GroupDescriptor
    alpha: float
    d: float = 0.0
    band: float = 16.0
    seed: int = 0

    def build(self) -> T.Spectrum:
        return Z.prescribed_tail(self.group, self.alpha, self.d, self.band, self.seed)


def _as_spectrum(x) -> tuple[T.Spectrum, Optional[T.GridFunction]]:
    if isinstance(x, T.Spectrum):
        return x, None
    if isinstance(x, T.GridFunction):
        return T.forward(x), x
    if isinstance(x, TailLaw):
        return x.build(), None
    raise ArgumentError(f"unsupported input {type(x).__name__}")


def _signal_band(s: T.Spectrum) -> float:
    w = [p.weight for p, b in zip(s.points, s.blocks) if np.any(b)]
    return max(w) if w else 1.0


def _is_trivial(s: T.Spectrum) -> bool:
    return all(p.lambda_sq == 0 or not np.any(b) for p, b in zip(s.points, s.blocks))


def measure_tail(s: T.Spectrum, fit: FitProfile, model: str = "power") -> L.DecayReport:
    Ns = fit.tail_grid(_signal_band(s), model)
    tails = S.tail_sums(s, Ns)
    keep = tails > 0
    return L.fit_decay(np.stack([Ns[keep], tails[keep]], 1), model,
                       cumulative=(model == "power_log"))


def measure_modulus(x, fit: FitProfile, model: str = "power", seed: int = 0,
                    side: str = "left") -> tuple[L.DecayReport, L.ModulusCurve]:
    spec, grid_fn = _as_spectrum(x)
    radii = fit.radius_grid(_signal_band(spec), model)
    src = grid_fn if grid_fn is not None else spec
    curve = L.modulus(src, 2.0, radii, side, fit.directions, seed)
    return L.fit_modulus(curve, model, drop=0), curve


def check_titchmarsh_b(x, alpha: float, mode: str = "forward",
                       tol: Optional[TolerancesProfile] = None,
                       fit: Optional[FitProfile] = None, seed: int = 0) -> CheckReport:
    """Tail N^(-2 alpha) versus L^2 modulus |h|^alpha.

    forward: measure both slopes; pass iff tail slope = -2 * modulus slope.
    reverse: ``x`` is a TailLaw (or a spectrum built from one); pass iff the
             modulus slope recovers ``alpha``.
    """
    if not 0 < alpha <= 1:
        raise ArgumentError(f"alpha must lie in (0, 1], got {alpha}")
    if mode not in ("forward", "reverse"):
        raise ArgumentError(f"mode must be forward or reverse, got {mode!r}")
    tol = tol or TolerancesProfile()
    fit = fit or FitProfile()
    spec, _ = _as_spectrum(x)
    tols_json = {**tol.to_json(), "fit": fit.to_json()}
    if _is_trivial(spec):
        return CheckReport("titchmarsh_b", {"alpha": alpha}, {"tail": 0.0}, 0.0, "pass",
                           "all-zero tail beyond the trivial representation", tols_json, seed)
    mrep, curve = measure_modulus(x, fit, "power", seed)
    trep = measure_tail(spec, fit, "power")
    observed = {"modulus": mrep, "tail": trep, "alpha_hat": mrep.exponent_b,
                "tail_slope": trep.exponent_b,
                "radii": curve.radii, "omega": curve.values}
    if mode == "forward":
        predicted = {"tail_slope": -2 * mrep.exponent_b, "alpha": alpha}
        margins = {"coupling": trep.exponent_b + 2 * mrep.exponent_b}
        tols = {"coupling": tol.spectral_slope}
        info = {"alpha_margin": mrep.exponent_b - alpha, "tail_margin": trep.exponent_b + 2 * alpha}
    else:
        predicted = {"alpha": alpha, "tail_slope": -2 * alpha}
        margins = {"alpha": mrep.exponent_b - alpha}
        tols = {"alpha": tol.modulus_slope}
        info = {"tail_margin": trep.exponent_b + 2 * alpha}
    observed.update(info)
    verdict, margin = _verdict(margins, tols, mrep.reliable and trep.reliable)
    return CheckReport("titchmarsh_b", predicted, observed, margin, verdict, f"mode={mode}",
                       tols_json, seed, margins)


def check_dini(x, alpha: float, d: float, mode: str = "forward",
               tol: Optional[TolerancesProfile] = None,
               fit: Optional[FitProfile] = None, seed: int = 0) -> CheckReport:
    """Tail N^(-2 alpha) (log N)^(2d) versus modulus |h|^alpha (log 1/|h|)^d (power-log fits)."""
    if alpha < 0:
        raise ArgumentError(f"alpha must be >= 0, got {alpha}")
    if mode not in ("forward", "reverse"):
        raise ArgumentError(f"mode must be forward or reverse, got {mode!r}")
    tol = tol or TolerancesProfile()
    fit = fit or FitProfile()
    if isinstance(x, TailLaw) and (x.alpha, x.d) != (alpha, d) and mode == "reverse":
        x = TailLaw(x.group, alpha, d, x.band, x.seed)
    spec, _ = _as_spectrum(x)
    tols_json = {**tol.to_json(), "fit": fit.to_json()}
    if _is_trivial(spec):
        return CheckReport("dini", {"alpha": alpha, "d": d}, {"tail": 0.0}, 0.0, "pass",
                           "all-zero tail beyond the trivial representation", tols_json, seed)
    model = "power_log" if d != 0 else "power"
    mrep, curve = measure_modulus(x, fit, model, seed)
    trep = measure_tail(spec, fit, model)
    predicted = {"tail_b": -2 * alpha, "tail_d": 2 * d, "alpha": alpha, "d": d}
    margins = {"tail_b": trep.exponent_b + 2 * alpha, "alpha": mrep.exponent_b - alpha}
    tols = {"tail_b": tol.modulus_slope, "alpha": tol.modulus_slope}
    if model == "power_log":
        margins.update({"tail_d": trep.log_exponent_d - 2 * d, "d": mrep.log_exponent_d - d})
        tols.update({"tail_d": tol.log_exponent, "d": tol.log_exponent})
    observed = {"modulus": mrep, "tail": trep, "radii": curve.radii, "omega": curve.values}
    verdict, margin = _verdict(margins, tols, mrep.reliable and trep.reliable)
    return CheckReport("dini", predicted, observed, margin, verdict, f"mode={mode}, model={model}",
                       tols_json, seed, margins)


def check_dini_a(f: T.Spectrum, alpha: float, d: float, p: float = 2.0, n: Optional[int] = None,
                 tol: Optional[TolerancesProfile] = None,
                 strict_factor: float = 1.5) -> CheckReport:
    """Strict regime beta > beta0 (any d) and endpoint beta = beta0 (needs d <= 0).

    The strict regime is probed at ``strict_factor * beta0``: just above
    beta0 a positive log power makes the increments rise for many more
    doublings than a band can hold.
    """
    _check_alpha_p(alpha, p)
    tol = tol or TolerancesProfile()
    n = n or f.group.counting_dimension
    b0 = beta0(alpha, p, n)
    q = conjugate_exponent(p)
    predicted = {"beta0": b0, "q": q, "endpoint_member": d <= 0}
    if not math.isfinite(b0):
        return CheckReport("dini_a", predicted, {}, float("nan"), "inconclusive",
                           "beta0 is infinite for these parameters", tol.to_json())
    strict = strict_factor * b0
    classes = partial_norm_classes(f, [b0, strict], tol)
    endpoint, above = classes[float(b0)], classes[float(strict)]
    ok = above["class"] == "converges"
    if d <= 0:
        ok &= endpoint["class"] == "converges"
    observed = {"endpoint_class": endpoint["class"], "strict_class": above["class"],
                "endpoint": endpoint, "strict": above}
    notes = "endpoint divergence for d > 0 is reported, not asserted"
    margins, tols, reliable = {}, {}, True
    if q > b0 + 0.05:
        # the log-corrected head bound is checked in the strict regime at beta = q
        fit = _head_fit(f, q, "power_log")
        pred_b = head_exponent(alpha, p, n, q)
        margins["head_exponent"] = max(fit.exponent_b - pred_b, 0.0)
        tols["head_exponent"] = tol.head_bound
        reliable = fit.reliable
        observed.update({"head_fit": fit, "predicted_head": {"b": pred_b, "d": d * q}})
    else:
        notes += "; head bound not checked since beta0 >= q leaves no strict range"
    verdict, margin = _verdict(margins, tols, reliable, ok)
    if not margins:
        margin = 0.0
    return CheckReport("dini_a", predicted, observed, margin, verdict, notes, tol.to_json(),
                       None, margins)


# ---------------------------------------------------------------------------
# Hausdorff-Young


def hausdorff_young_check(f: T.GridFunction, p: float, atol: float = 1e-9) -> CheckReport:
    """||fhat||_{l^q} <= ||f||_{L^p} with q the conjugate exponent."""
    if not 1 < p <= 2:
        raise ArgumentError(f"p must lie in (1, 2], got {p}")
    q = conjugate_exponent(p)
    spec = T.forward(f)
    lhs = S.lp_dual_norm(spec, S.DualNormRequest(q))
    rhs = f.lp_norm(p)
    slack = rhs - lhs
    verdict = "pass" if lhs <= rhs + atol else "fail"
    return CheckReport("hausdorff_young", {"inequality": "lhs <= rhs"},
                       {"lhs": lhs, "rhs": rhs, "slack": slack, "q": q}, -slack, verdict,
                       "", {"atol": atol})


# ---------------------------------------------------------------------------
# multipliers


@dataclass
class MultiplierSymbol:
    """a(xi) = <xi>^(-gamma) I by default, or ``rule(xi)`` for custom matrices."""

    gamma: float = 0.0
    rule: Optional[Callable[[G.DualPoint], np.ndarray]] = None
    constant: Optional[float] = None  # max ||a(xi)||_op <xi>^gamma, filled on use

    def __post_init__(self):
        if self.gamma < 0:
            raise ArgumentError("gamma must be >= 0")

    def matrix(self, xi: G.DualPoint) -> np.ndarray:
        if self.rule is None:
            return xi.weight ** (-self.gamma) * np.eye(xi.dim)
        m = np.asarray(self.rule(xi))
        if m.shape != (xi.dim, xi.dim):
            raise ArgumentError(f"symbol at {xi.label} has shape {m.shape}, need {xi.dim}")
        return m

    @property
    def is_bessel(self) -> bool:
        return self.rule is None


def apply_multiplier(s: T.Spectrum, a: MultiplierSymbol) -> T.Spectrum:
    """Entrywise a(xi) fhat(xi); records C = max ||a(xi)||_op <xi>^gamma on ``a``."""
    if a.is_bessel:
        a.constant = 1.0
        return S.sobolev_weight(s, -a.gamma)
    blocks, C = [], 0.0
    for p, b in zip(s.points, s.blocks):
        m = a.matrix(p)
        C = max(C, float(np.linalg.norm(m, 2)) * p.weight ** a.gamma)
        blocks.append(m @ b)
    a.constant = C
    return s.with_blocks(blocks)


def check_multiplier_regularity(f, alpha: float, gamma: float,
                                tol: Optional[TolerancesProfile] = None,
                                fit: Optional[FitProfile] = None, seed: int = 0,
                                tail_only: bool = False) -> CheckReport:
    """Bessel potential of order gamma lifts Lip(alpha) to Lip(alpha + gamma) (p = 2)."""
    if not 0 <= gamma < 1:
        raise ArgumentError(f"gamma must lie in [0, 1), got {gamma}")
    if not 0 < alpha:
        raise ArgumentError("alpha must be positive")
    if alpha + gamma >= 1:
        raise ArgumentError(f"need alpha + gamma < 1, got {alpha + gamma}")
    tol = tol or TolerancesProfile()
    fit = fit or FitProfile()
    spec, _ = _as_spectrum(f)
    sym = MultiplierSymbol(gamma)
    out = apply_multiplier(spec, sym)
    target = alpha + gamma
    trep = measure_tail(out, fit)
    margins = {"tail_slope": trep.exponent_b + 2 * target}
    tols = {"tail_slope": tol.spectral_slope}
    observed = {"tail": trep, "symbol_constant": sym.constant}
    reliable = trep.reliable
    if not tail_only:
        mrep, curve = measure_modulus(out, fit, "power", seed)
        _, curve_in = measure_modulus(spec, fit, "power", seed)
        margins["modulus_slope"] = mrep.exponent_b - target
        tols["modulus_slope"] = tol.modulus_slope
        semi_out = L.lip_seminorm(curve, target)
        semi_in = L.lip_seminorm(curve_in, alpha)
        chain = semi_out / semi_in if semi_in > 0 else float("inf")
        observed.update({"modulus": mrep, "seminorm_out": semi_out, "seminorm_in": semi_in,
                         "norm_chain_constant": chain})
        reliable &= mrep.reliable and math.isfinite(chain)
    verdict, margin = _verdict(margins, tols, reliable)
    predicted = {"alpha_out": target, "tail_slope": -2 * target}
    return CheckReport("multiplier_regularity", predicted, observed, margin, verdict,
                       "Bessel symbol <xi>^-gamma", {**tol.to_json(), "fit": fit.to_json()},
                       seed, margins)


# ---------------------------------------------------------------------------
# reduction: <xi> H in l^beta0 implies H in l^beta above n beta0 / (beta0 + n)


def reduction_check(H: T.Spectrum, b0: float, n: Optional[int] = None,
                  tol: Optional[TolerancesProfile] = None) -> CheckReport:
    if b0 < 1:
        raise ArgumentError(f"beta0 must be >= 1, got {b0}")
    tol = tol or TolerancesProfile()
    n = n or H.group.counting_dimension
    thr = reduction_threshold(b0, n)
    predicted = {"threshold": thr}
    if sum(1 for b in H.blocks if np.any(b)) <= 1:
        return CheckReport("reduction", predicted, {}, 0.0, "pass",
                           "single entry: every norm is finite", tol.to_json())
    pre = partial_norm_classes(H, [b0], tol, weighted=True)[float(b0)]
    betas = [thr * 1.05, thr * 1.2, thr * 0.9]
    classes = partial_norm_classes(H, betas, tol, weighted=False)
    observed = {"precondition": pre["class"],
                "classes": {str(k): v["class"] for k, v in classes.items()},
                "details": {str(k): v for k, v in classes.items()}}
    if pre["class"] != "converges":
        return CheckReport("reduction", predicted, observed, float("nan"), "inconclusive",
                           "precondition <xi> H in l^beta0 not observed", tol.to_json())
    ok = all(classes[float(b)]["class"] == "converges" for b in betas[:2])
    return CheckReport("reduction", predicted, observed, 0.0, "pass" if ok else "fail",
                       "below-threshold behaviour reported only", tol.to_json())


# ---------------------------------------------------------------------------
# Hardy-Littlewood witness


def log_growth_fit(s: T.Spectrum, beta: float, lo: float = 2.0 ** 6) -> dict:
    """Fit partial l^beta sums of fhat against C log N + c0 on dyadic bands."""
    bands = dyadic_bands(s.band, lo)
    sums = S.partial_dual_sums(s, S.DualNormRequest(beta), bands)
    A = np.stack([np.ones_like(bands), np.log(bands)], 1)
    coef, *_ = np.linalg.lstsq(A, sums, rcond=None)
    resid = sums - A @ coef
    ss = float(np.sum((sums - sums.mean()) ** 2))
    r2 = 1 - float(resid @ resid) / ss if ss > 0 else 1.0
    return {"C": float(coef[1]), "intercept": float(coef[0]), "r_squared": r2,
            "bands": bands.tolist(), "sums": sums.tolist()}


def hardy_littlewood_check(alpha: float, band: int = 2 ** 16, window=(2.0 ** 6, 2.0 ** 12),
                           tol: Optional[TolerancesProfile] = None) -> CheckReport:
    """Tail slope -2 alpha and harmonic divergence of the l^(2/(2 alpha+1)) sums."""
    tol = tol or TolerancesProfile()
    s = Z.hardy_littlewood(alpha, band)
    Ns = np.geomspace(window[0], window[1], 25)
    tails = S.tail_sums(s, Ns)
    trep = L.fit_decay(np.stack([Ns, tails], 1))
    crit = 2.0 / (2 * alpha + 1)
    growth = log_growth_fit(s, crit, window[0])
    margins = {"tail_slope": trep.exponent_b + 2 * alpha}
    tols = {"tail_slope": tol.sequence_exponent}
    verdict, margin = _verdict(margins, tols, trep.reliable, growth["r_squared"] >= 0.99)
    return CheckReport("hardy_littlewood", {"tail_slope": -2 * alpha, "critical_beta": crit},
                       {"tail": trep, "log_growth": growth}, margin, verdict,
                       "divergence signature: partial sums linear in log N",
                       tol.to_json(), None, margins)


# ---------------------------------------------------------------------------
# Weyl counting and the dimension series


def weyl_constant(g: G.GroupDescriptor) -> float:
    """lim S(lam) / lam^n for the counting sum sum_{<xi> <= lam} d_xi k_xi."""
    if g.kind == "torus":
        return math.pi ** (g.n / 2) / math.gamma(g.n / 2 + 1)
    if g.kind == "su2":
        return 8.0 / 3.0
    return 1.0


def check_weyl(g: G.GroupDescriptor, lambdas=(32.0, 64.0), rel_tol: float = 0.1,
               s_above: Optional[float] = None, s_below: Optional[float] = None,
               series_band: float = 256.0, tol: Optional[TolerancesProfile] = None) -> CheckReport:
    """Counting ratio S(lam)/lam^n against its limit, and the dimension series
    sum d_xi k_xi <xi>^(-s): convergent for s > n, divergent for s < n."""
    tol = tol or TolerancesProfile()
    n = g.counting_dimension
    s_above = n + 1.0 if s_above is None else s_above
    s_below = n - 0.5 if s_below is None else s_below
    const = weyl_constant(g)
    rows = G.weyl_partial_sums(g, lambdas, 0.0)
    rel = {str(lam): ratio / const - 1.0 for lam, _, ratio in rows}
    bands = dyadic_bands(series_band)
    series = {}
    for s in (s_above, s_below):
        sums = [v for _, v in G.dimension_series(g, bands, s)]
        series[str(s)] = classify_partial_sums(bands, sums, tol)
    ok = (series[str(s_above)]["class"] == "converges"
          and series[str(s_below)]["class"] == "diverges")
    margins = {f"ratio@{k}": v for k, v in rel.items()}
    verdict, margin = _verdict(margins, {k: rel_tol for k in margins}, True, ok)
    observed = {"rows": rows, "series": series,
                "classes": {k: v["class"] for k, v in series.items()}}
    return CheckReport("weyl", {"constant": const, "n": n, "s_above": s_above, "s_below": s_below},
                       observed, margin, verdict, "", {**tol.to_json(), "ratio": rel_tol}, None,
                       margins)


# ---------------------------------------------------------------------------
# class-I structure of lifted sphere functions


def lift_check(band: float, seed: int = 0, shifts: int = 10, mass_tol: float = 1e-10,
               rel_tol: float = 1e-8) -> CheckReport:
    """Lift a random class-I sphere function to SU(2): no coefficient mass off the
    invariant rows, and equal L^2 translation differences on both spaces."""
    g = G.Sphere2
    spec = T.random_spectrum(g, band, seed)
    f = T.inverse(spec, Hm.build_grid(g, band))
    lifted, lspec = T.lift_to_group(f)
    off, total = T.off_pattern_mass(lspec)
    rng = np.random.default_rng(seed + 1)
    diffs = []
    for _ in range(shifts):
        h = G.random_element(G.SU2, rng)
        a = L.difference_norm(f, spec, G.GroupElement(g, h.coords))
        b = L.difference_norm(lifted, lspec, h)
        diffs.append(abs(a - b) / max(a, 1e-300))
    margins = {"off_pattern": off / total, "modulus": max(diffs)}
    tols = {"off_pattern": mass_tol, "modulus": rel_tol}
    verdict, margin = _verdict(margins, tols)
    return CheckReport("lift", {"off_pattern": 0.0, "modulus_ratio": 1.0},
                       {"off_pattern_fraction": off / total, "relative_differences": diffs},
                       margin, verdict, "", tols, seed, margins)
