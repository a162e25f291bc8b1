"""Compact groups and homogeneous spaces with their unitary duals.

Supported spaces are the tori T^n (n <= 3) and SU(2), plus the sphere S^2
realised as SO(3)/SO(2).  Elements of SU(2) are unit quaternions ``(w, x, y, z)``; shifts
acting on S^2 are rotations, also stored as unit quaternions.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ArgumentError, ConfigurationError, ResourceError

TWO_PI = 2.0 * math.pi

# relative slack when comparing a computed weight against a band limit
BAND_RTOL = 1e-12
MAX_DUAL_POINTS = 2 ** 24
MAX_DENSE_ENTRIES = 2 ** 25  # complex entries of a dense spectrum (512 MiB)


@dataclass(frozen=True)
class GroupDescriptor:
    kind: str  # "torus" | "su2" | "s2"
    n: int = 1  # torus dimension; ignored otherwise

    def __post_init__(self):
        if self.kind not in ("torus", "su2", "s2"):
            raise ConfigurationError(f"unsupported group kind {self.kind!r}")
        if self.kind == "torus" and not 1 <= self.n <= 3:
            raise ConfigurationError(f"torus dimension must be 1..3, got {self.n}")
        if self.kind != "torus":
            object.__setattr__(self, "n", 3 if self.kind == "su2" else 2)

    @property
    def dimension(self) -> int:
        """Dimension of the group G (SO(3) for the sphere)."""
        return self.n if self.kind == "torus" else 3

    @property
    def manifold_dimension(self) -> int:
        return {"torus": self.n, "su2": 3, "s2": 2}[self.kind]

    @property
    def is_homogeneous(self) -> bool:
        return self.kind == "s2"

    @property
    def counting_dimension(self) -> int:
        """Exponent of the Weyl law for sum(d_xi * k_xi) over <xi> <= lambda."""
        return self.manifold_dimension

    @property
    def name(self) -> str:
        return f"t{self.n}" if self.kind == "torus" else self.kind

    def __str__(self):
        return self.name


def Torus(n: int = 1) -> GroupDescriptor:
    return GroupDescriptor("torus", n)


SU2 = GroupDescriptor("su2")
Sphere2 = GroupDescriptor("s2")


def parse_group(name: str) -> GroupDescriptor:
    name = name.strip().lower()
    if name in ("t1", "t2", "t3"):
        return Torus(int(name[1]))
    if name == "su2":
        return SU2
    if name in ("s2", "sphere2"):
        return Sphere2
    raise ConfigurationError(f"unknown group {name!r} (expected t1|t2|t3|su2|s2)")


@dataclass(frozen=True)
class DualPoint:
    """A representation label with its dimension data.

    Labels: integer vector j for tori, twice-spin m for SU(2), degree l for S^2.
    Equality and hashing use the label only.
    """

    label: tuple
    dim: int = field(compare=False)
    k: int = field(compare=False)
    lambda_sq: float = field(compare=False)
    weight: float = field(compare=False)


def dual_point(g: GroupDescriptor, label) -> DualPoint:
    """Build the DualPoint of ``g`` carrying ``label`` (validated)."""
    label = tuple(int(v) for v in np.atleast_1d(label))
    if g.kind == "torus":
        if len(label) != g.n:
            raise ArgumentError(f"label {label} does not belong to {g}")
        lam = float(sum(v * v for v in label))
        dim = k = 1
    elif g.kind == "su2":
        if len(label) != 1 or label[0] < 0:
            raise ArgumentError(f"label {label} does not belong to su2")
        m = label[0]
        lam = m * (m + 2) / 4.0
        dim = k = m + 1
    else:
        if len(label) != 1 or label[0] < 0:
            raise ArgumentError(f"label {label} does not belong to s2")
        ell = label[0]
        lam = float(ell * (ell + 1))
        dim, k = 2 * ell + 1, 1
    return DualPoint(label, dim, k, lam, math.sqrt(1.0 + lam))


def label_dimension(g: GroupDescriptor, label) -> int:
    return dual_point(g, label).dim


def _top_label(g: GroupDescriptor, band: float) -> int:
    lam_max = band * band * (1.0 + 2 * BAND_RTOL) - 1.0
    if lam_max < 0:
        return -1
    if g.kind == "torus":
        return int(math.floor(math.sqrt(lam_max)))
    if g.kind == "su2":
        return int(math.floor(-1.0 + math.sqrt(1.0 + 4.0 * lam_max)))
    return int(math.floor((-1.0 + math.sqrt(1.0 + 4.0 * lam_max)) / 2.0))


def dense_entries(g: GroupDescriptor, band: float) -> int:
    """Number of matrix entries of a dense spectrum on ``band`` (torus: a box bound)."""
    top = _top_label(g, band)
    if top < 0:
        return 0
    if g.kind == "torus":
        return (2 * top + 1) ** g.n
    if g.kind == "su2":
        return sum((m + 1) ** 2 for m in range(top + 1))
    return sum((2 * l + 1) ** 2 for l in range(top + 1))


def require_dense(g: GroupDescriptor, band: float, cap: int = MAX_DENSE_ENTRIES):
    n = dense_entries(g, band)
    if n > cap:
        raise ResourceError(f"a dense spectrum on {g.name} with band {band:g} needs {n} entries "
                            f"(cap {cap})")


def within_band(weight, band) -> np.ndarray:
    return np.asarray(weight) <= band * (1.0 + BAND_RTOL)


@functools.lru_cache(maxsize=64)
def _enumerate(g: GroupDescriptor, band: float) -> tuple:
    lam_max = band * band * (1.0 + 2 * BAND_RTOL) - 1.0
    if lam_max < 0:
        return ()
    if g.kind == "torus":
        r = int(math.floor(math.sqrt(lam_max)))
        axes = np.meshgrid(*([np.arange(-r, r + 1)] * g.n), indexing="ij")
        labels = np.stack([a.ravel() for a in axes], axis=1)
        sq = (labels ** 2).sum(axis=1)
        labels = labels[sq <= lam_max]
        sq = (labels ** 2).sum(axis=1)
        keys = [labels[:, i] for i in range(g.n - 1, -1, -1)] + [sq]
        labels = labels[np.lexsort(keys)]
        return tuple(dual_point(g, tuple(row)) for row in labels.tolist())
    if g.kind == "su2":
        # m(m+2)/4 <= lam_max
        m_max = int(math.floor(-1.0 + math.sqrt(1.0 + 4.0 * lam_max)))
        return tuple(dual_point(g, (m,)) for m in range(m_max + 1))
    l_max = int(math.floor((-1.0 + math.sqrt(1.0 + 4.0 * lam_max)) / 2.0))
    return tuple(dual_point(g, (l,)) for l in range(l_max + 1))


def enumerate_dual(g: GroupDescriptor, band: float) -> list[DualPoint]:
    """All (class-I for S^2) dual points with <xi> <= band.

    Sorted by weight, ties broken lexicographically on the label.
    """
    if not isinstance(g, GroupDescriptor):
        raise ConfigurationError(f"unsupported group {g!r}")
    if band < 1:
        raise ArgumentError(f"band must be >= 1, got {band}")
    top = _top_label(g, float(band))
    count = (2 * top + 1) ** g.n if g.kind == "torus" else top + 1
    if count > MAX_DUAL_POINTS:
        raise ResourceError(f"band {band:g} on {g.name} holds about {count} dual points "
                            f"(cap {MAX_DUAL_POINTS})")
    return list(_enumerate(g, float(band)))


def max_label(g: GroupDescriptor, band: float) -> int:
    """Largest twice-spin (su2) or degree (s2) inside ``band``."""
    pts = enumerate_dual(g, band)
    return pts[-1].label[0]


def band_for_label(g: GroupDescriptor, top: int) -> float:
    """The band whose last dual point is twice-spin/degree ``top`` (su2, s2)."""
    return dual_point(g, (top,)).weight


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True, eq=False)
class GroupElement:
    """Torus angles (n,) or a unit quaternion (4,) for su2 and s2 shifts.

    Torus angles are stored as IEEE remainders modulo 2 pi, i.e. in
    [-pi, pi]; the reduction is exact and odd, so inversion is exact.
    """

    group: GroupDescriptor
    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=float).reshape(-1)
        expected = self.group.n if self.group.kind == "torus" else 4
        if c.size != expected:
            raise ArgumentError(f"{self.group} element needs {expected} coordinates")
        if self.group.kind == "torus":
            c = np.array([math.remainder(v, TWO_PI) for v in c])
        else:
            c = c / np.linalg.norm(c)
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return compose(self, other)

    def inverse(self) -> "GroupElement":
        return inverse(self)


def identity(g: GroupDescriptor) -> GroupElement:
    if g.kind == "torus":
        return GroupElement(g, np.zeros(g.n))
    return GroupElement(g, np.array([1.0, 0.0, 0.0, 0.0]))


def quat_mul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Hamilton product, broadcasting over leading axes."""
    pw, px, py, pz = np.moveaxis(np.asarray(p, dtype=float), -1, 0)
    qw, qx, qy, qz = np.moveaxis(np.asarray(q, dtype=float), -1, 0)
    return np.stack(
        [
            pw * qw - px * qx - py * qy - pz * qz,
            pw * qx + px * qw + py * qz - pz * qy,
            pw * qy - px * qz + py * qw + pz * qx,
            pw * qz + px * qy - py * qx + pz * qw,
        ],
        axis=-1,
    )


def quat_conj(q: np.ndarray) -> np.ndarray:
    q = np.array(q, dtype=float)
    q[..., 1:] *= -1.0
    return q


def compose(x: GroupElement, y: GroupElement) -> GroupElement:
    if x.group != y.group:
        raise ArgumentError("cannot compose elements of different groups")
    if x.group.kind == "torus":
        return GroupElement(x.group, x.coords + y.coords)
    q = quat_mul(x.coords, y.coords)
    return GroupElement(x.group, q / np.linalg.norm(q))


def inverse(x: GroupElement) -> GroupElement:
    if x.group.kind == "torus":
        return GroupElement(x.group, -x.coords)
    return GroupElement(x.group, quat_conj(x.coords))


def wrap_angle(theta):
    """Signed representative in [-pi, pi)."""
    return np.mod(np.asarray(theta) + math.pi, TWO_PI) - math.pi


def rotation_angle(q) -> np.ndarray:
    """SO(3) rotation angle in [0, pi] of unit quaternions (sign quotiented)."""
    q = np.asarray(q, dtype=float)
    return 2.0 * np.arctan2(np.linalg.norm(q[..., 1:], axis=-1), np.abs(q[..., 0]))


def geodesic_distance(g: GroupDescriptor, h: GroupElement) -> float:
    """|h| = d(h, e) in the bi-invariant metric (see README for normalisation)."""
    if g.kind == "torus":
        return float(np.sqrt(np.sum(h.coords ** 2)))
    return float(rotation_angle(h.coords))


def injectivity_radius(g: GroupDescriptor) -> float:
    return math.pi


def _unit_vectors(rng: np.random.Generator, dim: int, count: Optional[int] = None):
    shape = (dim,) if count is None else (count, dim)
    v = rng.standard_normal(shape)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def random_element(
    g: GroupDescriptor, seed, radius: Optional[float] = None
) -> GroupElement:
    """Haar-uniform element, or uniform on the geodesic sphere |h| = radius.

    ``seed`` may be an int or a ``numpy.random.Generator``.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if radius is not None and not 0 < radius <= injectivity_radius(g):
        raise ArgumentError(f"radius must lie in (0, pi], got {radius}")
    if g.kind == "torus":
        if radius is None:
            return GroupElement(g, rng.uniform(0.0, TWO_PI, g.n))
        return GroupElement(g, radius * _unit_vectors(rng, g.n))
    if radius is None:
        return GroupElement(g, _unit_vectors(rng, 4))
    axis = _unit_vectors(rng, 3)
    half = 0.5 * radius
    return GroupElement(g, np.concatenate([[math.cos(half)], math.sin(half) * axis]))


def rotate_points(q, points: np.ndarray) -> np.ndarray:
    """Apply the rotation of unit quaternion ``q`` to 3-vectors (last axis)."""
    q = np.asarray(q, dtype=float)
    w, u = q[0], q[1:]
    p = np.asarray(points, dtype=float)
    t = 2.0 * np.cross(u, p)
    return p + w * t + np.cross(u, t)


def rotation_to_point(points: np.ndarray) -> np.ndarray:
    """Quaternions R(phi) about z times R(theta) about y mapping the pole to each point."""
    p = np.asarray(points, dtype=float)
    theta = np.arccos(np.clip(p[..., 2], -1.0, 1.0))
    phi = np.arctan2(p[..., 1], p[..., 0])
    return euler_to_quat(phi, theta, np.zeros_like(phi))


def euler_to_quat(alpha, beta, gamma) -> np.ndarray:
    """ZYZ Euler angles to unit quaternions: R_z(alpha) R_y(beta) R_z(gamma)."""
    alpha, beta, gamma = np.broadcast_arrays(
        np.asarray(alpha, float), np.asarray(beta, float), np.asarray(gamma, float)
    )
    zero = np.zeros_like(alpha)
    qa = np.stack([np.cos(alpha / 2), zero, zero, np.sin(alpha / 2)], axis=-1)
    qb = np.stack([np.cos(beta / 2), zero, np.sin(beta / 2), zero], axis=-1)
    qg = np.stack([np.cos(gamma / 2), zero, zero, np.sin(gamma / 2)], axis=-1)
    return quat_mul(quat_mul(qa, qb), qg)


# ---------------------------------------------------------------------------
# Weyl counting


def weyl_partial_sums(
    g: GroupDescriptor,
    lambdas: Sequence[float],
    r: float,
    form: Optional[str] = None,
    band: Optional[float] = None,
) -> list[tuple[float, float, float]]:
    """Rows ``(lam, S(lam), S(lam) / lam**((r+1) n))``.

    Head form sums d_xi k_xi <xi>^{r n} over <xi> <= lam (needs r > -1); tail
    form sums over lam <= <xi> <= band (needs r < -1).  For groups
    k_xi = d_xi, so the summand is d_xi^2 <xi>^{r n}; n is the counting
    dimension of ``g``.
    """
    if form is None:
        if r == -1:
            raise ArgumentError("r = -1 is neither the head nor the tail regime")
        form = "head" if r > -1 else "tail"
    if form == "head" and not r > -1:
        raise ArgumentError("head form needs r > -1")
    if form == "tail" and not r < -1:
        raise ArgumentError("tail form needs r < -1")
    lambdas = [float(v) for v in lambdas]
    n = g.counting_dimension
    top = max(lambdas) if form == "head" else (band or 16.0 * max(lambdas))
    pts = enumerate_dual(g, max(top, 1.0))
    w = np.array([p.weight for p in pts])
    terms = np.array([p.dim * p.k for p in pts], dtype=float) * w ** (r * n)
    rows = []
    for lam in lambdas:
        if form == "head":
            s = float(np.sum(terms[within_band(w, lam)]))
        else:
            s = float(np.sum(terms[w >= lam]))
        rows.append((lam, s, s / lam ** ((r + 1) * n)))
    return rows


def dimension_series(
    g: GroupDescriptor, lambdas: Sequence[float], s: float
) -> list[tuple[float, float]]:
    """Partial sums of sum d_xi k_xi <xi>^{-s} over <xi> <= lam, any real s."""
    lambdas = [float(v) for v in lambdas]
    pts = enumerate_dual(g, max(lambdas))
    w = np.array([p.weight for p in pts])
    terms = np.array([p.dim * p.k for p in pts], dtype=float) * w ** (-s)
    order = np.argsort(w, kind="stable")
    csum = np.cumsum(terms[order])
    ws = w[order]
    out = []
    for lam in lambdas:
        idx = np.searchsorted(ws, lam * (1 + BAND_RTOL), side="right")
        out.append((lam, float(csum[idx - 1]) if idx else 0.0))
    return out
