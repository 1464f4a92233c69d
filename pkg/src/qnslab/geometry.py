"""Euclidean primitives: balls, similarity maps, and two-disk overlap areas.

Everything here is immutable and pure; dimensions 2 and 3 are supported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ORTHOGONALITY_TOL = 1e-12

_UNIT_BALL_VOLUME = {2: math.pi, 3: 4.0 * math.pi / 3.0}


def unit_ball_volume(n: int) -> float:
    """Volume of the unit ball in dimension n (pi for n=2, 4*pi/3 for n=3)."""
    try:
        return _UNIT_BALL_VOLUME[n]
    except KeyError:
        raise ValueError(f"unsupported dimension {n}; expected 2 or 3") from None


def ball_volume(n: int, radius: float) -> float:
    """Volume of an n-ball of the given radius."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    return unit_ball_volume(n) * radius**n


def as_point(p, dim: int | None = None) -> np.ndarray:
    """Coerce a point-like value to a float64 vector, optionally checking its dimension."""
    q = np.asarray(p, dtype=np.float64)
    if q.ndim != 1 or q.size not in (2, 3):
        raise ValueError(f"expected a 2-D or 3-D point, got shape {q.shape}")
    if dim is not None and q.size != dim:
        raise ValueError(f"dimension mismatch: point has {q.size} coordinates, expected {dim}")
    return q


@dataclass(frozen=True)
class Ball:
    """An open (default) or closed ball."""

    center: tuple[float, ...]
    radius: float
    closed: bool = False

    def __post_init__(self):
        center = tuple(float(c) for c in self.center)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))
        if len(center) not in (2, 3):
            raise ValueError("balls are supported in dimensions 2 and 3 only")
        if not all(math.isfinite(c) for c in center):
            raise ValueError("ball center must be finite")
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError("ball radius must be positive and finite")

    @property
    def dim(self) -> int:
        return len(self.center)

    def contains(self, p) -> bool:
        q = as_point(p, self.dim)
        s = 0.0
        for i in range(self.dim):
            d = q[i] - self.center[i]
            s += d * d
        r2 = self.radius * self.radius
        return s <= r2 if self.closed else s < r2


@dataclass(frozen=True, eq=False)
class Similarity:
    """The map x -> scale * orthogonal @ x + translation.

    The orthogonal part must satisfy ``T.T @ T = I`` to within
    ``ORTHOGONALITY_TOL`` in max norm; distances then scale by exactly
    ``scale``.
    """

    scale: float
    orthogonal: np.ndarray
    translation: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "scale", float(self.scale))
        T = np.array(self.orthogonal, dtype=np.float64)
        T.setflags(write=False)
        object.__setattr__(self, "orthogonal", T)
        object.__setattr__(self, "translation", tuple(float(t) for t in self.translation))
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ValueError("similarity scale must be positive and finite")
        n = len(self.translation)
        if T.shape != (n, n) or n not in (2, 3):
            raise ValueError("orthogonal part must be a 2x2 or 3x3 matrix matching the translation")
        residual = np.max(np.abs(T.T @ T - np.eye(n)))
        if residual > ORTHOGONALITY_TOL:
            raise ValueError(f"orthogonality residual {residual:.3e} exceeds {ORTHOGONALITY_TOL}")

    @property
    def dim(self) -> int:
        return len(self.translation)

    def __call__(self, p) -> np.ndarray:
        q = as_point(p, self.dim)
        return self.scale * (self.orthogonal @ q) + np.asarray(self.translation)

    def apply_many(self, pts: np.ndarray) -> np.ndarray:
        """Apply to an (N, dim) array of points."""
        pts = np.asarray(pts, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise ValueError(f"expected points of shape (N, {self.dim})")
        return self.scale * (pts @ self.orthogonal.T) + np.asarray(self.translation)

    def inverse(self) -> "Similarity":
        Tinv = self.orthogonal.T
        a = np.asarray(self.translation)
        return Similarity(1.0 / self.scale, Tinv, tuple((-1.0 / self.scale) * (Tinv @ a)))

    @staticmethod
    def identity(dim: int = 2) -> "Similarity":
        return Similarity(1.0, np.eye(dim), (0.0,) * dim)

    @staticmethod
    def rotation(theta: float, scale: float = 1.0, translation=(0.0, 0.0)) -> "Similarity":
        """Planar rotation by ``theta`` composed with scaling and translation."""
        c, s = math.cos(theta), math.sin(theta)
        return Similarity(scale, np.array([[c, -s], [s, c]]), tuple(translation))

    @staticmethod
    def reflection_x(scale: float = 1.0, translation=(0.0, 0.0)) -> "Similarity":
        return Similarity(scale, np.array([[1.0, 0.0], [0.0, -1.0]]), tuple(translation))


def apply_similarity(h: Similarity, p) -> np.ndarray:
    """Image of a point under a similarity; rejects dimension mismatches."""
    return h(as_point(p, h.dim))


def _clamped_acos(x: float) -> float:
    return math.acos(min(1.0, max(-1.0, x)))


def lens_area(r1: float, r2: float, d: float) -> float:
    """Exact area of the intersection of two planar disks.

    ``r1`` and ``r2`` are the radii, ``d`` the distance between centers.
    Returns 0 for disjoint disks and the smaller disk's area when one disk
    contains the other.  The acos arguments are clamped to [-1, 1] so the
    formula stays finite at tangency.
    """
    if r1 <= 0 or r2 <= 0:
        raise ValueError("disk radii must be positive")
    if d < 0:
        raise ValueError("center distance must be nonnegative")
    if r1 < r2:
        r1, r2 = r2, r1  # canonical order keeps the formula exactly symmetric
    # snap to the tangency limits: within 1e-12 relative of either limit the
    # true area is below 1e-17 * scale^2 while acos loses ~1e-8, so the limit
    # value is the accurate one
    scale = r1 + r2
    if d >= scale - 1e-12 * scale:
        return 0.0
    if d <= (r1 - r2) + 1e-12 * scale:
        return math.pi * r2 * r2
    d1 = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    d2 = d - d1
    a1 = r1 * r1 * _clamped_acos(d1 / r1) - d1 * math.sqrt(max(r1 * r1 - d1 * d1, 0.0))
    a2 = r2 * r2 * _clamped_acos(d2 / r2) - d2 * math.sqrt(max(r2 * r2 - d2 * d2, 0.0))
    return max(a1 + a2, 0.0)


def lens_constant() -> float:
    """Worst-case density of a disk inside a congruent disk centered on its boundary.

    Equals ``2/3 - sqrt(3)/(2*pi)``, i.e. ``lens_area(1, 1, 1) / pi``: the
    smallest fraction of a probe disk's area that an overlapping congruent
    disk whose boundary passes through the probe center can cover.
    """
    return 2.0 / 3.0 - math.sqrt(3.0) / (2.0 * math.pi)
