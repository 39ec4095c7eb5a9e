"""Geometry of (R^d, l-infinity).

In the max norm every intersection of closed balls is an axis-aligned box,
so all admissible sets are represented as :class:`Box`.  An empty
intersection is returned as ``None`` rather than raised, since the
iteration code has to branch on it.

Points are 1-d float arrays, finite sets are ``(n, d)`` float arrays.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .tolerances import GEOM_TOL


class DimensionError(ValueError):
    pass


class EmptySetError(ValueError):
    pass


def as_point(coords) -> np.ndarray:
    p = np.array(coords, dtype=float).reshape(-1)
    if p.size == 0:
        raise DimensionError("a point needs at least one coordinate")
    if not np.all(np.isfinite(p)):
        raise ValueError(f"non-finite coordinates: {p}")
    return p


def as_finite_set(points) -> np.ndarray:
    """Stack ``points`` into an ``(n, d)`` array; a bare point becomes n = 1."""
    k = np.array(points, dtype=float)
    if k.ndim == 1:
        k = k.reshape(1, -1)
    if k.ndim != 2 or k.shape[0] == 0 or k.shape[1] == 0:
        raise EmptySetError("finite set must be nonempty")
    if not np.all(np.isfinite(k)):
        raise ValueError("non-finite coordinates in finite set")
    return k


@dataclass(frozen=True, eq=False)
class Box:
    """Product of closed intervals ``[lo_i, hi_i]``; always nonempty."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = as_point(self.lo)
        hi = as_point(self.hi)
        if lo.shape != hi.shape:
            raise DimensionError(f"lo has {lo.size} coords, hi has {hi.size}")
        if np.any(lo > hi):
            raise ValueError(f"lo > hi in {lo} / {hi}; use None for the empty set")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return self.lo.size

    @property
    def widths(self) -> np.ndarray:
        return self.hi - self.lo

    def contains(self, p, tol: float = GEOM_TOL) -> bool:
        p = as_point(p)
        return bool(np.all(p >= self.lo - tol) and np.all(p <= self.hi + tol))

    def is_point(self, tol: float = GEOM_TOL) -> bool:
        return bool(np.all(self.widths <= tol))

    def __eq__(self, other):
        if not isinstance(other, Box):
            return NotImplemented
        return np.array_equal(self.lo, other.lo) and np.array_equal(self.hi, other.hi)

    def __hash__(self):
        return hash((self.lo.tobytes(), self.hi.tobytes()))

    def __repr__(self):
        return f"Box(lo={self.lo.tolist()}, hi={self.hi.tolist()})"


def _check_same_dim(*arrays):
    dims = {np.shape(a)[-1] for a in arrays}
    if len(dims) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")


def _collapsed_box(lo: np.ndarray, hi: np.ndarray) -> Box:
    """Box from bounds that may cross by rounding error; crossed coordinates become points."""
    crossed = lo > hi
    if np.any(crossed):
        mid = 0.5 * (lo + hi)
        lo = np.where(crossed, mid, lo)
        hi = np.where(crossed, mid, hi)
    return Box(lo, hi)


def linf_dist(p, q) -> float:
    p, q = as_point(p), as_point(q)
    _check_same_dim(p, q)
    return float(np.max(np.abs(p - q)))


def ball(c, r: float) -> Box:
    if r < 0:
        raise ValueError(f"negative radius {r}")
    c = as_point(c)
    return Box(c - r, c + r)


def point_box(p) -> Box:
    p = as_point(p)
    return Box(p, p)


def intersect(boxes: Iterable[Box | None], tol: float = GEOM_TOL) -> Box | None:
    """Intersection of boxes, or ``None`` when empty.

    Coordinates where ``max lo`` exceeds ``min hi`` by at most ``tol`` are
    collapsed to their midpoint, so tangent balls still meet.
    """
    boxes = list(boxes)
    if not boxes:
        raise ValueError("intersect needs at least one box")
    if any(b is None for b in boxes):
        return None
    _check_same_dim(*(b.lo for b in boxes))
    lo = np.max([b.lo for b in boxes], axis=0)
    hi = np.min([b.hi for b in boxes], axis=0)
    if np.any(lo - hi > tol):
        return None
    return _collapsed_box(lo, hi)


def intersect_balls(centers, r: float, tol: float = GEOM_TOL) -> Box | None:
    """``intersect(ball(c, r) for c in centers)`` without building each ball."""
    if r < 0:
        raise ValueError(f"negative radius {r}")
    k = as_finite_set(centers)
    lo = k.max(axis=0) - r
    hi = k.min(axis=0) + r
    if np.any(lo - hi > tol):
        return None
    return _collapsed_box(lo, hi)


def box_hausdorff(a: Box | None, b: Box | None) -> float:
    if a is None or b is None:
        raise EmptySetError("Hausdorff distance of an empty box")
    _check_same_dim(a.lo, b.lo)
    return float(max(np.max(np.abs(a.lo - b.lo)), np.max(np.abs(a.hi - b.hi))))


def pairwise_linf(k: np.ndarray, m: np.ndarray) -> np.ndarray:
    return np.max(np.abs(k[:, None, :] - m[None, :, :]), axis=2)


def set_hausdorff(k, m) -> float:
    k, m = as_finite_set(k), as_finite_set(m)
    _check_same_dim(k, m)
    d = pairwise_linf(k, m)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def diameter(k) -> float:
    k = as_finite_set(k)
    return float(np.max(k.max(axis=0) - k.min(axis=0)))


def bounding_box(k) -> Box:
    k = as_finite_set(k)
    return Box(k.min(axis=0), k.max(axis=0))


def chebyshev(k) -> tuple[float, Box]:
    """Chebyshev radius and the full center box of a finite set.

    Writing ``[lo, hi]`` for the bounding box, ``r = max_i (hi_i - lo_i)/2``
    and the center is ``[hi - r, lo + r]``: the points whose farthest
    member of ``k`` is exactly ``r`` away.
    """
    bb = bounding_box(k)
    r = float(np.max(bb.widths) / 2)
    return r, _collapsed_box(bb.hi - r, bb.lo + r)


def shrink_hull(c: Box, r: float, tol: float = GEOM_TOL) -> Box | None:
    """``Intersection of B(y, r) over y in c``: the box ``[c.hi - r, c.lo + r]``."""
    if r < 0:
        raise ValueError(f"negative radius {r}")
    lo = c.hi - r
    hi = c.lo + r
    if np.any(lo - hi > tol):
        return None
    return _collapsed_box(lo, hi)


def midpoint(b: Box | None) -> np.ndarray:
    if b is None:
        raise EmptySetError("midpoint of an empty box")
    return 0.5 * (b.lo + b.hi)


def dist_to_box(p, b: Box) -> float:
    """Distance from a point to a box (0 inside)."""
    p = as_point(p)
    return float(np.max(np.maximum(np.maximum(b.lo - p, p - b.hi), 0.0)))


def hyperconvex_family_ok(centers: Sequence, radii: Sequence[float], tol: float = GEOM_TOL) -> bool:
    """Whether the balls pairwise satisfy d(c_a, c_b) <= r_a + r_b."""
    c = as_finite_set(centers)
    r = np.asarray(radii, dtype=float)
    d = pairwise_linf(c, c)
    return bool(np.all(d <= r[:, None] + r[None, :] + tol))
