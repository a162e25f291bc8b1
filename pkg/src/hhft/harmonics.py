"""Matrix coefficients of irreducible representations, an FFT kernel, grids.

Representation conventions
--------------------------
SU(2) acts on C^2 through the unit quaternion (w, x, y, z) as

    U = [[w - iz, -y - ix],
         [y - ix,  w + iz]],

which is a homomorphism for the Hamilton product.  The representation of
twice-spin ``m`` acts on the (m+1)-dimensional space with basis ordered by
descending magnetic number ``m/2, m/2 - 1, ..., -m/2``.  Its matrices are built
by repeatedly coupling a spin-1/2 factor (Clebsch-Gordan half-step); every
step is an isometry so unitarity holds to rounding at every size.

With Euler angles ``x = R_z(alpha) R_y(beta) R_z(gamma)`` the matrix entries are
``exp(-i m_a alpha) d_ab(beta) exp(-i m_b gamma)``.

For the sphere the degree-``l`` representation of SO(3) is the twice-spin
``2l`` representation, re-ordered so that the vector fixed by rotations about
the pole (magnetic number 0) comes first.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import groups as G
from .errors import ArgumentError, ResourceError

# cap on quadrature nodes per grid; raise it for bigger machines
MAX_GRID_NODES = 2 ** 24


# ---------------------------------------------------------------------------
# FFT kernel


@functools.lru_cache(maxsize=32)
def _bit_reversal(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def _check_direction(direction: str) -> int:
    if direction == "forward":
        return -1
    if direction == "inverse":
        return 1
    raise ArgumentError(f"direction must be 'forward' or 'inverse', got {direction!r}")


def fft(v, direction: str = "forward", axis: int = -1) -> np.ndarray:
    """Iterative radix-2 FFT along ``axis``; other axes are batched.

    forward: X_k = sum_n v_n exp(-2 pi i k n / N)
    inverse: x_n = (1/N) sum_k X_k exp(+2 pi i k n / N)
    """
    sign = _check_direction(direction)
    a = np.moveaxis(np.asarray(v, dtype=complex), axis, -1)
    n = a.shape[-1]
    if n < 1 or n & (n - 1):
        raise ArgumentError(f"fft length must be a power of two, got {n}")
    lead = a.shape[:-1]
    a = a[..., _bit_reversal(n)]
    size = 2
    while size <= n:
        half = size // 2
        tw = np.exp(sign * 2j * math.pi * np.arange(half) / size)
        a = a.reshape(*lead, n // size, size)
        even = a[..., :half]
        odd = a[..., half:] * tw
        a = np.concatenate([even + odd, even - odd], axis=-1)
        size *= 2
    a = a.reshape(*lead, n)
    if sign > 0:
        a = a / n
    return np.moveaxis(a, -1, axis)


def next_pow2(n: int) -> int:
    return 1 << max(0, int(n - 1).bit_length())


def dft(v, direction: str = "forward", axis: int = -1) -> np.ndarray:
    """DFT of any length (same conventions as :func:`fft`).

    Power-of-two lengths go straight to :func:`fft`; other lengths use
    Bluestein's chirp-z identity on top of it.
    """
    sign = _check_direction(direction)
    a = np.moveaxis(np.asarray(v, dtype=complex), axis, -1)
    n = a.shape[-1]
    if n & (n - 1) == 0:
        return fft(v, direction, axis)
    k = np.arange(n)
    # reduce k^2 mod 2n before scaling to keep the phase accurate
    chirp = np.exp(sign * 1j * math.pi * ((k * k) % (2 * n)) / n)
    m = next_pow2(2 * n - 1)
    pad = np.zeros(a.shape[:-1] + (m,), dtype=complex)
    pad[..., :n] = a * chirp
    kernel = np.zeros(m, dtype=complex)
    kernel[:n] = np.conj(chirp)
    kernel[m - n + 1:] = np.conj(chirp[1:])[::-1]
    conv = fft(fft(pad) * fft(kernel), "inverse")
    out = conv[..., :n] * chirp
    if sign > 0:
        out = out / n
    return np.moveaxis(out, -1, axis)


# ---------------------------------------------------------------------------
# Gauss-Legendre


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes (ascending) and weights on [-1, 1]; weights sum to 2."""
    if n < 1:
        raise ArgumentError("need at least one Gauss-Legendre node")
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


# ---------------------------------------------------------------------------
# SU(2) representation matrices


def su2_fundamental(q) -> np.ndarray:
    """The 2x2 matrices of unit quaternions ``q`` (shape (..., 4))."""
    q = np.asarray(q, dtype=float)
    w, x, y, z = np.moveaxis(q, -1, 0)
    u = np.empty(q.shape[:-1] + (2, 2), dtype=complex)
    u[..., 0, 0] = w - 1j * z
    u[..., 0, 1] = -y - 1j * x
    u[..., 1, 0] = y - 1j * x
    u[..., 1, 1] = w + 1j * z
    return u


def rep_stack(mmax: int, u: np.ndarray) -> list[np.ndarray]:
    """Matrices of twice-spin 0..mmax evaluated at 2x2 matrices ``u`` (..., 2, 2).

    Returns a list whose entry m has shape (..., m+1, m+1).
    """
    u = np.asarray(u)
    lead = u.shape[:-2]
    out = [np.ones(lead + (1, 1), dtype=u.dtype)]
    if mmax >= 1:
        out.append(u.copy())
    # broadcast helpers for u entries: shape lead + (1, 1)
    ub = u.reshape(lead + (1, 1, 2, 2))
    for M in range(2, mmax + 1):
        out.append(_half_step(out[-1], ub))
    # the identity maps to the identity exactly (the recursion rounds it)
    at_e = np.all(u == np.eye(2), axis=(-2, -1))
    if np.any(at_e):
        for M in range(1, mmax + 1):
            out[M][at_e] = np.eye(M + 1)
    return out


def _half_step(prev: np.ndarray, ub: np.ndarray) -> np.ndarray:
    M = prev.shape[-1]
    i = np.arange(M + 1)
    cp = np.sqrt((M - i) / M)
    cm = np.sqrt(i / M)
    lead = prev.shape[:-2]
    P = np.zeros(lead + (M + 2, M + 2), dtype=np.result_type(prev, ub))
    P[..., 1:-1, 1:-1] = prev
    return (
        np.multiply.outer(cp, cp) * P[..., 1:, 1:] * ub[..., 0, 0]
        + np.multiply.outer(cp, cm) * P[..., 1:, :-1] * ub[..., 0, 1]
        + np.multiply.outer(cm, cp) * P[..., :-1, 1:] * ub[..., 1, 0]
        + np.multiply.outer(cm, cm) * P[..., :-1, :-1] * ub[..., 1, 1]
    )


def su2_rep_stack(mmax: int, q) -> list[np.ndarray]:
    """Twice-spin 0..mmax matrices at unit quaternions ``q`` (..., 4)."""
    return rep_stack(mmax, su2_fundamental(q))


def wigner_d_stack(mmax: int, beta) -> list[np.ndarray]:
    """Real little-d matrices d(beta) for twice-spin 0..mmax; shape (..., m+1, m+1)."""
    beta = np.asarray(beta, dtype=float)
    c, s = np.cos(beta / 2), np.sin(beta / 2)
    u = np.empty(beta.shape + (2, 2))
    u[..., 0, 0] = c
    u[..., 0, 1] = -s
    u[..., 1, 0] = s
    u[..., 1, 1] = c
    return rep_stack(mmax, u)


@dataclass(frozen=True, eq=False)
class WignerBlock:
    m: int
    beta: float
    matrix: np.ndarray


def wigner_d(m: int, beta: float) -> WignerBlock:
    """Little-d matrix of twice-spin ``m`` at polar angle ``beta`` in [0, pi]."""
    if m < 0:
        raise ArgumentError("twice-spin must be nonnegative")
    if not 0.0 <= beta <= math.pi:
        raise ArgumentError("beta must lie in [0, pi]")
    mat = wigner_d_stack(m, np.float64(beta))[m]
    return WignerBlock(m, float(beta), mat)


@functools.lru_cache(maxsize=256)
def sphere_permutation(ell: int) -> np.ndarray:
    """Basis order for the sphere: magnetic number 0 first, then the rest."""
    return np.array([ell] + list(range(ell)) + list(range(ell + 1, 2 * ell + 1)))


def sphere_rep(D: np.ndarray, ell: int) -> np.ndarray:
    """Reorder a twice-spin 2*ell matrix (..., 2l+1, 2l+1) into sphere basis."""
    perm = sphere_permutation(ell)
    return D[..., perm, :][..., :, perm]


def magnetic_numbers(m: int) -> np.ndarray:
    """Magnetic numbers m/2, m/2 - 1, ..., -m/2 as floats (descending)."""
    return m / 2.0 - np.arange(m + 1)


def rep_matrix(g: G.GroupDescriptor, xi: G.DualPoint, x: G.GroupElement) -> np.ndarray:
    """The unitary matrix xi(x).

    For the sphere ``x`` is a rotation (unit quaternion) acting on S^2.
    """
    if x.group != g:
        raise ArgumentError("element and descriptor belong to different groups")
    check = G.dual_point(g, xi.label)
    if check.dim != xi.dim:
        raise ArgumentError(f"{xi} does not belong to {g}")
    if g.kind == "torus":
        phase = float(np.dot(xi.label, x.coords))
        return np.array([[np.exp(1j * phase)]])
    if g.kind == "su2":
        return su2_rep_stack(xi.label[0], x.coords)[xi.label[0]]
    ell = xi.label[0]
    return sphere_rep(su2_rep_stack(2 * ell, x.coords)[2 * ell], ell)


# ---------------------------------------------------------------------------
# quadrature grids


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """Nodes and Haar weights exact for products of two band-limited functions.

    ``nodes`` holds coordinates row by row: torus angles (N, n), unit
    quaternions (N, 4) for SU(2), unit vectors (N, 3) for the sphere.  ``shape``
    records the tensor layout used by the fast transforms.
    """

    group: G.GroupDescriptor
    band: float
    nodes: np.ndarray
    weights: np.ndarray
    shape: tuple
    axes: tuple  # per-axis 1-D node arrays (angles or cos(beta))
    mmax: int = 0  # highest twice-spin (su2) or degree (s2) resolved

    def __len__(self):
        return self.weights.size

    def node(self, k: int) -> G.GroupElement:
        if self.group.kind == "s2":
            raise ArgumentError("sphere nodes are points, not group elements")
        return G.GroupElement(self.group, self.nodes[k])


def _check_nodes(count: int, cap: Optional[int]):
    cap = MAX_GRID_NODES if cap is None else cap
    if count > cap:
        raise ResourceError(f"grid needs {count} nodes, cap is {cap}")


def torus_points(band: float) -> int:
    return 2 * int(math.ceil(band - 1e-12)) + 1


def su2_grid(n_alpha: int, n_beta: int, n_gamma: int, band: float, mmax: int,
             cap: Optional[int] = None) -> QuadratureGrid:
    """Euler ZYZ grid: alpha in [0, 2pi), Gauss-Legendre in cos(beta), gamma in [0, 4pi)."""
    _check_nodes(n_alpha * n_beta * n_gamma, cap)
    alpha = 2 * math.pi * np.arange(n_alpha) / n_alpha
    gamma = 4 * math.pi * np.arange(n_gamma) / n_gamma
    x, wb = gauss_legendre(n_beta)
    beta = np.arccos(x[::-1])  # ascending beta
    wb = wb[::-1]
    A, B, C = np.meshgrid(alpha, beta, gamma, indexing="ij")
    nodes = G.euler_to_quat(A, B, C).reshape(-1, 4)
    W = np.broadcast_to(wb[None, :, None] / (2.0 * n_alpha * n_gamma), A.shape)
    return QuadratureGrid(
        G.SU2, float(band), nodes, np.ascontiguousarray(W).reshape(-1),
        (n_alpha, n_beta, n_gamma), (alpha, beta, gamma), mmax,
    )


def build_grid(g: G.GroupDescriptor, band: float, cap: Optional[int] = None) -> QuadratureGrid:
    """Grid exact for products of two functions of band ``band`` on ``g``."""
    if band < 1:
        raise ArgumentError(f"band must be >= 1, got {band}")
    if g.kind == "torus":
        npts = torus_points(band)
        _check_nodes(npts ** g.n, cap)
        theta = 2 * math.pi * np.arange(npts) / npts
        mesh = np.meshgrid(*([theta] * g.n), indexing="ij")
        nodes = np.stack([m.reshape(-1) for m in mesh], axis=1)
        weights = np.full(npts ** g.n, 1.0 / npts ** g.n)
        return QuadratureGrid(g, float(band), nodes, weights, (npts,) * g.n, (theta,) * g.n)
    top = G.max_label(g, band)
    if g.kind == "su2":
        n_alpha = next_pow2(top + 1)
        return su2_grid(n_alpha, top + 1, 2 * n_alpha, band, top, cap)
    n_phi = next_pow2(2 * top + 2)
    n_theta = top + 1
    _check_nodes(n_phi * n_theta, cap)
    phi = 2 * math.pi * np.arange(n_phi) / n_phi
    x, wt = gauss_legendre(n_theta)
    theta = np.arccos(x[::-1])
    wt = wt[::-1]
    P, T = np.meshgrid(phi, theta, indexing="ij")
    nodes = np.stack([np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)], axis=-1)
    W = np.broadcast_to(wt[None, :] / (2.0 * n_phi), P.shape)
    return QuadratureGrid(
        g, float(band), nodes.reshape(-1, 3), np.ascontiguousarray(W).reshape(-1),
        (n_phi, n_theta), (phi, theta), top,
    )


def lift_grid(sphere_grid: QuadratureGrid) -> QuadratureGrid:
    """SU(2) grid whose (alpha, beta) axes coincide with the sphere grid's (phi, theta)."""
    if sphere_grid.group.kind != "s2":
        raise ArgumentError("lift_grid expects a sphere grid")
    n_phi, n_theta = sphere_grid.shape
    return su2_grid(n_phi, n_theta, 2 * n_phi, G.band_for_label(G.SU2, 2 * sphere_grid.mmax),
                    2 * sphere_grid.mmax)
