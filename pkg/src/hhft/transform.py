"""Global Fourier transform, inversion, translation on spectra, sphere lifting.

Conventions: ``fhat(xi) = integral f(x) xi(x)^* dx`` and
``f(x) = sum_xi d_xi Tr(xi(x) fhat(xi))``.  Translating by ``h`` on the left,
``f(h x)``, multiplies each coefficient on the right by ``xi(h)``; translating
on the right, ``f(x h)``, multiplies on the left.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Optional

import numpy as np

from . import groups as G
from . import harmonics as Hm
from .errors import ArgumentError, ConfigurationError

# points per chunk for direct (pointwise) synthesis
EVAL_CHUNK = 4096


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Band-limited matrix-valued Fourier data, one block per dual point.

    ``points`` lists every dual point with weight <= band (enumeration order);
    ``blocks[i]`` is the d x d complex matrix attached to ``points[i]``.
    """

    group: G.GroupDescriptor
    band: float
    points: tuple
    blocks: tuple

    def __post_init__(self):
        if len(self.points) != len(self.blocks):
            raise ArgumentError("points and blocks differ in length")
        for p, b in zip(self.points, self.blocks):
            if b.shape != (p.dim, p.dim):
                raise ArgumentError(f"block for {p.label} has shape {b.shape}")
            if not G.within_band(p.weight, self.band):
                raise ArgumentError(f"{p.label} lies outside band {self.band}")

    # ---- construction
    @classmethod
    def zeros(cls, g: G.GroupDescriptor, band: float) -> "Spectrum":
        G.require_dense(g, band)
        pts = tuple(G.enumerate_dual(g, band))
        return cls(g, float(band), pts, tuple(np.zeros((p.dim, p.dim), complex) for p in pts))

    @classmethod
    def from_entries(cls, g: G.GroupDescriptor, band: float, entries: dict) -> "Spectrum":
        """``entries`` maps labels (tuples or ints) to matrices; the rest are zero."""
        G.require_dense(g, band)
        pts = tuple(G.enumerate_dual(g, band))
        index = {p.label: i for i, p in enumerate(pts)}
        blocks = [np.zeros((p.dim, p.dim), complex) for p in pts]
        for lab, mat in entries.items():
            lab = tuple(np.atleast_1d(lab).tolist())
            if lab not in index:
                raise ArgumentError(f"label {lab} not in the band-{band} dual of {g}")
            blocks[index[lab]] = np.array(mat, dtype=complex).reshape(blocks[index[lab]].shape)
        return cls(g, float(band), pts, tuple(blocks))

    def with_blocks(self, blocks: Iterable[np.ndarray]) -> "Spectrum":
        return Spectrum(self.group, self.band, self.points, tuple(blocks))

    def map(self, fn: Callable[[G.DualPoint, np.ndarray], np.ndarray]) -> "Spectrum":
        return self.with_blocks(fn(p, b) for p, b in zip(self.points, self.blocks))

    # ---- access
    @cached_property
    def index(self) -> dict:
        return {p.label: i for i, p in enumerate(self.points)}

    def entry(self, label) -> np.ndarray:
        lab = label.label if isinstance(label, G.DualPoint) else tuple(np.atleast_1d(label).tolist())
        return self.blocks[self.index[lab]]

    @cached_property
    def weights(self) -> np.ndarray:
        return np.array([p.weight for p in self.points])

    @cached_property
    def dims(self) -> np.ndarray:
        return np.array([p.dim for p in self.points], dtype=float)

    @cached_property
    def ks(self) -> np.ndarray:
        return np.array([p.k for p in self.points], dtype=float)

    @cached_property
    def labels(self) -> np.ndarray:
        return np.array([p.label for p in self.points])

    @cached_property
    def _hs_sq(self) -> np.ndarray:
        return np.array([float(np.vdot(b, b).real) for b in self.blocks])

    def hs_sq(self) -> np.ndarray:
        """Squared Hilbert-Schmidt norm of each block."""
        return self._hs_sq.copy()

    def __len__(self):
        return len(self.points)

    def __add__(self, other: "Spectrum") -> "Spectrum":
        _same_layout(self, other)
        return self.with_blocks(a + b for a, b in zip(self.blocks, other.blocks))

    def __sub__(self, other: "Spectrum") -> "Spectrum":
        _same_layout(self, other)
        return self.with_blocks(a - b for a, b in zip(self.blocks, other.blocks))

    def __mul__(self, c) -> "Spectrum":
        return self.with_blocks(c * b for b in self.blocks)

    __rmul__ = __mul__

    def norm(self) -> float:
        """Plancherel norm (sum d ||block||_HS^2)^(1/2)."""
        return float(math.sqrt(np.sum(self.dims * self.hs_sq())))

    def truncate(self, band: float) -> "Spectrum":
        """Keep dual points with weight <= band."""
        keep = [i for i, p in enumerate(self.points) if G.within_band(p.weight, band)]
        return Spectrum(self.group, float(min(band, self.band)) if keep else float(band),
                        tuple(self.points[i] for i in keep), tuple(self.blocks[i] for i in keep))

    # ---- serialization
    def to_json(self) -> dict:
        entries = []
        for p, b in zip(self.points, self.blocks):
            entries.append({
                "label": list(p.label),
                "dim": p.dim,
                "k": p.k,
                "lambda_sq": p.lambda_sq,
                "matrix_re": b.real.tolist(),
                "matrix_im": b.imag.tolist(),
            })
        return {"group": self.group.name, "band": self.band, "entries": entries}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict) -> "Spectrum":
        try:
            g = G.parse_group(data["group"])
            band = float(data["band"])
            raw = data["entries"]
        except (KeyError, TypeError) as exc:
            raise ConfigurationError(f"malformed spectrum document: {exc}") from None
        entries = {}
        for e in raw:
            lab = tuple(int(v) for v in e["label"])
            expected = G.dual_point(g, lab)
            if int(e["dim"]) != expected.dim:
                raise ConfigurationError(
                    f"entry {lab}: dim {e['dim']} disagrees with {g} rule ({expected.dim})")
            if "k" in e and int(e["k"]) != expected.k:
                raise ConfigurationError(f"entry {lab}: k {e['k']} disagrees with {g} rule")
            mat = np.array(e["matrix_re"], float) + 1j * np.array(e["matrix_im"], float)
            if mat.shape != (expected.dim, expected.dim):
                raise ConfigurationError(f"entry {lab}: matrix shape {mat.shape}")
            entries[lab] = mat
        return cls.from_entries(g, band, entries)

    @classmethod
    def loads(cls, text: str) -> "Spectrum":
        return cls.from_json(json.loads(text))


def _same_layout(a: Spectrum, b: Spectrum):
    if a.group != b.group or len(a.points) != len(b.points):
        raise ArgumentError("spectra have different layouts")


@dataclass(frozen=True, eq=False)
class GridFunction:
    grid: Hm.QuadratureGrid
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex).reshape(-1)
        if s.size != len(self.grid):
            raise ArgumentError(f"{s.size} samples for {len(self.grid)} nodes")
        object.__setattr__(self, "samples", s)

    def lp_norm(self, p: float) -> float:
        a = np.abs(self.samples)
        if math.isinf(p):
            return float(a.max())
        return float(np.sum(self.grid.weights * a ** p) ** (1.0 / p))

    def tensor(self) -> np.ndarray:
        return self.samples.reshape(self.grid.shape)


def sample(fn: Callable[[np.ndarray], np.ndarray], grid: Hm.QuadratureGrid) -> GridFunction:
    """Evaluate a vectorized callable on the grid nodes."""
    return GridFunction(grid, fn(grid.nodes))


# ---------------------------------------------------------------------------
# forward / inverse


def forward(f: GridFunction, band: Optional[float] = None) -> Spectrum:
    """Fourier coefficients of grid samples up to ``band`` (default: grid band)."""
    grid = f.grid
    band = grid.band if band is None else float(band)
    if not G.within_band(band, grid.band):
        raise ArgumentError(f"grid band {grid.band} is smaller than requested band {band}")
    kind = grid.group.kind
    if kind == "torus":
        return _forward_torus(f, band)
    if kind == "su2":
        return _forward_su2(f, band)
    return _forward_sphere(f, band)


def inverse(s: Spectrum, grid: Hm.QuadratureGrid) -> GridFunction:
    """Samples of sum_xi d_xi Tr(xi(x) fhat(xi)) on the nodes of ``grid``."""
    if grid.group != s.group:
        raise ArgumentError("spectrum and grid belong to different groups")
    if not G.within_band(s.band, grid.band):
        raise ArgumentError(f"grid band {grid.band} is below spectrum band {s.band}")
    kind = grid.group.kind
    if kind == "torus":
        return _inverse_torus(s, grid)
    if kind == "su2":
        return _inverse_su2(s, grid)
    return _inverse_sphere(s, grid)


def _torus_index(labels: np.ndarray, npts: int) -> tuple:
    return tuple(np.mod(labels[:, i], npts) for i in range(labels.shape[1]))


def _forward_torus(f: GridFunction, band: float) -> Spectrum:
    grid = f.grid
    a = f.tensor()
    for ax in range(grid.group.n):
        a = Hm.dft(a, "forward", axis=ax)
    a = a / len(grid)
    pts = tuple(G.enumerate_dual(grid.group, band))
    labels = np.array([p.label for p in pts]).reshape(len(pts), grid.group.n)
    vals = a[_torus_index(labels, grid.shape[0])]
    return Spectrum(grid.group, band, pts, tuple(v.reshape(1, 1) for v in vals))


def _inverse_torus(s: Spectrum, grid: Hm.QuadratureGrid) -> GridFunction:
    a = np.zeros(grid.shape, dtype=complex)
    labels = s.labels.reshape(len(s), grid.group.n)
    vals = np.array([b[0, 0] for b in s.blocks])
    np.add.at(a, _torus_index(labels, grid.shape[0]), vals)
    for ax in range(grid.group.n):
        a = Hm.dft(a, "inverse", axis=ax) * grid.shape[ax]
    return GridFunction(grid, a.reshape(-1))


def _su2_layout(grid: Hm.QuadratureGrid):
    n_alpha, n_beta, n_gamma = grid.shape
    alpha, beta, _ = grid.axes
    wb = grid.weights.reshape(grid.shape)[0, :, 0] * (2.0 * n_alpha * n_gamma)
    return n_alpha, n_beta, n_gamma, alpha, beta, wb


def _forward_su2(f: GridFunction, band: float) -> Spectrum:
    grid = f.grid
    n_alpha, n_beta, n_gamma, alpha, beta, wb = _su2_layout(grid)
    pts = tuple(G.enumerate_dual(G.SU2, band))
    mmax = pts[-1].label[0]
    a = Hm.fft(f.tensor(), "inverse", axis=2)  # gamma: (1/Ng) sum f e^{+i k gamma}
    half = np.exp(0.5j * alpha)[:, None, None]
    g_int = Hm.fft(a, "inverse", axis=0)
    g_half = Hm.fft(a * half, "inverse", axis=0) if mmax >= 1 else None
    dstack = Hm.wigner_d_stack(mmax, beta)  # each (n_beta, m+1, m+1)
    wq = wb / 2.0
    blocks = []
    for p in pts:
        m = p.label[0]
        mags = Hm.magnetic_numbers(m)
        col = np.mod(np.rint(2 * mags).astype(int), n_gamma)  # gamma index for m_a
        if m % 2 == 0:
            row = np.mod(np.rint(mags).astype(int), n_alpha)
            src = g_int
        else:
            row = np.mod(np.rint(mags - 0.5).astype(int), n_alpha)
            src = g_half
        # Gsel[beta, b, a] = src[row_b, beta, col_a]
        gsel = src[row[:, None], :, col[None, :]]  # (b, a, beta)
        blk = np.einsum("k,kba,bak->ab", wq, dstack[m], gsel)
        blocks.append(blk)
    return Spectrum(G.SU2, band, pts, tuple(blocks))


def _inverse_su2(s: Spectrum, grid: Hm.QuadratureGrid) -> GridFunction:
    n_alpha, n_beta, n_gamma, alpha, beta, _ = _su2_layout(grid)
    mmax = s.points[-1].label[0] if len(s) else 0
    dstack = Hm.wigner_d_stack(mmax, beta)
    h_int = np.zeros((n_alpha, n_beta, n_gamma), dtype=complex)
    h_half = np.zeros_like(h_int)
    for p, blk in zip(s.points, s.blocks):
        m = p.label[0]
        if not np.any(blk):
            continue
        mags = Hm.magnetic_numbers(m)
        col = np.mod(np.rint(2 * mags).astype(int), n_gamma)
        # T[beta, a, b] = (m+1) d_ab(beta) fhat_ba
        t = (m + 1) * dstack[m] * blk.T[None, :, :]
        if m % 2 == 0:
            row = np.mod(np.rint(mags).astype(int), n_alpha)
            tgt = h_int
        else:
            row = np.mod(np.rint(mags - 0.5).astype(int), n_alpha)
            tgt = h_half
        np.add.at(tgt, (row[:, None, None], np.arange(n_beta)[None, None, :], col[None, :, None]),
                  np.transpose(t, (1, 2, 0)))
    out = Hm.fft(h_int, "forward", axis=0)
    if mmax >= 1:
        out = out + np.exp(-0.5j * alpha)[:, None, None] * Hm.fft(h_half, "forward", axis=0)
    out = Hm.fft(out, "forward", axis=2)
    return GridFunction(grid, out.reshape(-1))


def _forward_sphere(f: GridFunction, band: float) -> Spectrum:
    grid = f.grid
    n_phi, n_theta = grid.shape
    _, theta = grid.axes
    wt = grid.weights.reshape(grid.shape)[0, :] * (2.0 * n_phi)
    pts = tuple(G.enumerate_dual(G.Sphere2, band))
    lmax = pts[-1].label[0]
    a = Hm.fft(f.tensor(), "inverse", axis=0)  # (1/Nphi) sum f e^{+i m phi}
    dstack = Hm.wigner_d_stack(2 * lmax, theta)
    blocks = []
    for p in pts:
        ell = p.label[0]
        mags = Hm.magnetic_numbers(2 * ell).astype(int)
        d0 = dstack[2 * ell][:, :, ell]  # (theta, b) = d_{m_b 0}
        row = a[np.mod(mags, n_phi), :]  # (b, theta)
        vals = 0.5 * np.einsum("k,kb,bk->b", wt, d0, row)
        blk = np.zeros((p.dim, p.dim), dtype=complex)
        blk[0, :] = vals[Hm.sphere_permutation(ell)]
        blocks.append(blk)
    return Spectrum(G.Sphere2, band, pts, tuple(blocks))


def _inverse_sphere(s: Spectrum, grid: Hm.QuadratureGrid) -> GridFunction:
    n_phi, n_theta = grid.shape
    _, theta = grid.axes
    lmax = s.points[-1].label[0] if len(s) else 0
    dstack = Hm.wigner_d_stack(2 * lmax, theta)
    h = np.zeros((n_phi, n_theta), dtype=complex)
    for p, blk in zip(s.points, s.blocks):
        ell = p.label[0]
        if not np.any(blk):
            continue
        perm = Hm.sphere_permutation(ell)
        # f = sum_ell (2l+1) sum_{a,b} xi_{ab} fhat_{ba}; xi in sphere basis
        # uses the full block so off-pattern rows are synthesized too
        mags = Hm.magnetic_numbers(2 * ell)
        dfull = dstack[2 * ell]  # (theta, a', b') descending basis
        fb = np.zeros((p.dim, p.dim), dtype=complex)
        fb[np.ix_(perm, perm)] = blk  # back to descending basis
        # xi(g)_{a'b'} = e^{-i m_a' phi} d_{a'b'}(theta) e^{-i m_b' gamma}; gamma = 0
        t = (2 * ell + 1) * np.einsum("kab,ba->ak", dfull, fb)  # (a', theta)
        np.add.at(h, np.mod(mags.astype(int), n_phi), t)
    out = Hm.fft(h, "forward", axis=0)
    return GridFunction(grid, out.reshape(-1))


# ---------------------------------------------------------------------------
# pointwise synthesis


def evaluate(s: Spectrum, points: np.ndarray) -> np.ndarray:
    """Direct synthesis at arbitrary points, in the coordinates of the group grid."""
    pts = np.asarray(points, dtype=float)
    g = s.group
    if g.kind == "torus":
        pts = pts.reshape(-1, g.n)
        labels = s.labels.reshape(len(s), g.n).astype(float)
        coef = np.array([b[0, 0] for b in s.blocks])
        out = np.empty(len(pts), dtype=complex)
        for lo in range(0, len(pts), EVAL_CHUNK):
            ph = pts[lo:lo + EVAL_CHUNK] @ labels.T
            out[lo:lo + EVAL_CHUNK] = np.exp(1j * ph) @ coef
        return out
    if g.kind == "su2":
        quats = pts.reshape(-1, 4)
    else:
        quats = G.rotation_to_point(pts.reshape(-1, 3))
    top = s.points[-1].label[0] if len(s) else 0
    mtop = top if g.kind == "su2" else 2 * top
    out = np.zeros(len(quats), dtype=complex)
    for lo in range(0, len(quats), EVAL_CHUNK):
        stack = Hm.su2_rep_stack(mtop, quats[lo:lo + EVAL_CHUNK])
        acc = np.zeros(len(stack[0]), dtype=complex)
        for p, blk in zip(s.points, s.blocks):
            if not np.any(blk):
                continue
            if g.kind == "su2":
                D = stack[p.label[0]]
            else:
                D = Hm.sphere_rep(stack[2 * p.label[0]], p.label[0])
            acc += p.dim * np.einsum("pab,ba->p", D, blk)
        out[lo:lo + EVAL_CHUNK] = acc
    return out


def act(h: G.GroupElement, nodes: np.ndarray, side: str = "left") -> np.ndarray:
    """Coordinates of h*x (left) or x*h (right) for every node x."""
    g = h.group
    if g.kind == "torus":
        return np.mod(nodes + h.coords, G.TWO_PI)
    if g.kind == "su2":
        return G.quat_mul(h.coords, nodes) if side == "left" else G.quat_mul(nodes, h.coords)
    if side != "left":
        raise ArgumentError("the sphere has no right translation")
    return G.rotate_points(h.coords, nodes)


# ---------------------------------------------------------------------------
# translation


def translate_spectrum(s: Spectrum, h: G.GroupElement, side: str = "left") -> Spectrum:
    """Coefficients of f(h x) (left: fhat xi(h)) or f(x h) (right: xi(h) fhat)."""
    if side not in ("left", "right"):
        raise ArgumentError(f"side must be 'left' or 'right', got {side!r}")
    if h.group != s.group:
        raise ArgumentError("element and spectrum belong to different groups")
    g = s.group
    if g.kind == "s2" and side == "right":
        raise ArgumentError("the sphere has no right translation")
    reps = rep_matrices(s, h)
    if side == "left":
        return s.with_blocks(b @ r for b, r in zip(s.blocks, reps))
    return s.with_blocks(r @ b for b, r in zip(s.blocks, reps))


def rep_matrices(s: Spectrum, h: G.GroupElement) -> list[np.ndarray]:
    """xi(h) for every dual point of ``s`` (one recursion for the whole stack)."""
    g = s.group
    if g.kind == "torus":
        ph = s.labels.reshape(len(s), g.n) @ h.coords
        return [np.array([[v]]) for v in np.exp(1j * ph)]
    top = s.points[-1].label[0] if len(s) else 0
    if g.kind == "su2":
        stack = Hm.su2_rep_stack(top, h.coords)
        return [stack[p.label[0]] for p in s.points]
    stack = Hm.su2_rep_stack(2 * top, h.coords)
    return [Hm.sphere_rep(stack[2 * p.label[0]], p.label[0]) for p in s.points]


# ---------------------------------------------------------------------------
# sphere lifting and class-I structure


def lift_to_group(f_sphere: GridFunction) -> tuple[GridFunction, Spectrum]:
    """Canonical lifting f~(x) = f(x . north pole) sampled on a matching SU(2) grid.

    Returns the lifted samples and their SU(2) spectrum (twice-spin labels).
    """
    grid = f_sphere.grid
    if grid.group.kind != "s2":
        raise ArgumentError("lift_to_group expects a function on the sphere")
    lg = Hm.lift_grid(grid)
    n_alpha, n_beta, n_gamma = lg.shape
    vals = f_sphere.tensor()[:, :, None]  # (phi, theta) -> (alpha, beta)
    lifted = GridFunction(lg, np.broadcast_to(vals, lg.shape).reshape(-1))
    return lifted, forward(lifted)


def invariant_mask(s: Spectrum) -> list[np.ndarray]:
    """Boolean masks of the entries allowed by the class-I support pattern.

    Sphere spectra: row 0 only.  SU(2) spectra of lifted functions: even
    twice-spin and the row of magnetic number 0.  Tori: everything.
    """
    masks = []
    for p in s.points:
        m = np.zeros((p.dim, p.dim), dtype=bool)
        if s.group.kind == "s2":
            m[0, :] = True
        elif s.group.kind == "su2":
            if p.label[0] % 2 == 0:
                m[p.label[0] // 2, :] = True
        else:
            m[:] = True
        masks.append(m)
    return masks


def off_pattern_mass(s: Spectrum) -> tuple[float, float]:
    """(weighted mass outside the class-I pattern, total weighted mass)."""
    out = total = 0.0
    for p, b, m in zip(s.points, s.blocks, invariant_mask(s)):
        a2 = np.abs(b) ** 2
        total += p.dim * float(a2.sum())
        out += p.dim * float(a2[~m].sum())
    return out, total


def random_spectrum(g: G.GroupDescriptor, band: float, seed, class_one: bool = True) -> Spectrum:
    """Gaussian coefficients on every entry (sphere: invariant row only)."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    G.require_dense(g, band)
    pts = G.enumerate_dual(g, band)
    blocks = []
    for p in pts:
        b = rng.standard_normal((p.dim, p.dim)) + 1j * rng.standard_normal((p.dim, p.dim))
        if g.kind == "s2" and class_one:
            b[1:, :] = 0.0
        blocks.append(b / p.dim)
    return Spectrum(g, float(band), tuple(pts), tuple(blocks))
