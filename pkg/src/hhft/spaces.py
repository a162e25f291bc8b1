"""Weighted sequence spaces on the unitary dual, tails, Bessel-potential weights."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError
from .transform import Spectrum


@dataclass(frozen=True)
class DualNormRequest:
    beta: float
    use_class_I_weighting: bool = True

    def __post_init__(self):
        if not self.beta > 0:
            raise ArgumentError(f"beta must be positive, got {self.beta}")


def pairwise_sum(values: np.ndarray) -> float:
    """Pairwise (cascade) summation of a 1-D float array."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        return 0.0
    while v.size > 1:
        if v.size % 2:
            v = np.append(v, 0.0)
        v = v[0::2] + v[1::2]
    return float(v[0])


def _descending(s: Spectrum) -> np.ndarray:
    # stable so ties keep enumeration order
    return np.argsort(-s.weights, kind="stable")


def dual_terms(s: Spectrum, req: DualNormRequest) -> np.ndarray:
    """Per-point summands of the beta-th power of the dual norm (enumeration order).

    class-I form: d k (||A||_HS / sqrt(k))^beta
    group form:   d^(2 - beta/2) ||A||_HS^beta
    """
    hs = np.sqrt(s.hs_sq())
    d, k, beta = s.dims, s.ks, req.beta
    if req.use_class_I_weighting:
        return d * k * (hs / np.sqrt(k)) ** beta
    return d ** (2.0 - beta / 2.0) * hs ** beta


def lp_dual_norm(s: Spectrum, req: DualNormRequest) -> float:
    """The l^beta norm on the dual (quasi-norm when beta < 1)."""
    if not math.isfinite(req.beta):
        return float(np.max(np.sqrt(s.hs_sq()) / np.sqrt(s.ks), initial=0.0))
    terms = dual_terms(s, req)
    total = pairwise_sum(terms[_descending(s)])
    return total ** (1.0 / req.beta)


def partial_dual_sums(s: Spectrum, req: DualNormRequest, bands) -> np.ndarray:
    """beta-th powers of the norm restricted to weight <= N, for each N in ``bands``."""
    terms = dual_terms(s, req)
    order = np.argsort(s.weights, kind="stable")
    w = s.weights[order]
    csum = np.concatenate([[0.0], np.cumsum(terms[order])])
    idx = np.searchsorted(w, np.asarray(bands, float) * (1 + 1e-12), side="right")
    return csum[idx]


def tail_sum(s: Spectrum, N: float) -> float:
    """sum over weight >= N of d ||fhat||_HS^2."""
    mask = s.weights >= N * (1 - 1e-12)
    order = _descending(s)
    terms = (s.dims * s.hs_sq())[order]
    return pairwise_sum(terms[mask[order]])


def tail_sums(s: Spectrum, Ns) -> np.ndarray:
    """Vectorized :func:`tail_sum` over several thresholds."""
    order = np.argsort(s.weights, kind="stable")
    w = s.weights[order]
    terms = (s.dims * s.hs_sq())[order]
    # suffix sums accumulated from the smallest (largest weight) end
    suffix = np.concatenate([np.cumsum(terms[::-1])[::-1], [0.0]])
    idx = np.searchsorted(w, np.asarray(Ns, float) * (1 - 1e-12), side="left")
    return suffix[idx]


def sobolev_weight(s: Spectrum, sigma: float) -> Spectrum:
    """Multiply every block by <xi>^sigma (the symbol of (I - Laplacian)^(sigma/2))."""
    if sigma == 0:
        return s
    return s.with_blocks(b * (p.weight ** sigma) for p, b in zip(s.points, s.blocks))
