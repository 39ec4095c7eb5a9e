"""Brute-force grid oracles.

These deliberately avoid the closed forms they are checked against: sets
are replaced by lattices of step ``h`` and every sup/inf is taken by
enumeration.  Point-to-box distances use the coordinate clamp, which is
the definition of the max-norm distance to a product set.
"""
from __future__ import annotations

import math

import numpy as np

from . import box_space as bs
from . import circle_space as cs
from .tolerances import CIRCLE_GRID_STEP, GRID_STEP

MAX_GRID_POINTS = 5_000_000


def lattice(lo, hi, h: float = GRID_STEP, max_points: int = MAX_GRID_POINTS) -> np.ndarray:
    """All points of a step-``h`` lattice covering ``[lo, hi]``, endpoints included."""
    lo, hi = np.atleast_1d(np.asarray(lo, float)), np.atleast_1d(np.asarray(hi, float))
    axes = [np.linspace(a, b, max(int(math.ceil((b - a) / h)), 0) + 1) for a, b in zip(lo, hi)]
    count = math.prod(len(ax) for ax in axes)
    if count > max_points:
        raise ValueError(f"grid of {count} points exceeds the limit {max_points}")
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _dist_points_to_box(pts: np.ndarray, b: bs.Box) -> np.ndarray:
    excess = np.maximum(np.maximum(b.lo - pts, pts - b.hi), 0.0)
    return excess.max(axis=1)


def _sup_over_chunks(pts: np.ndarray, fn, chunk: int = 200_000) -> float:
    return max(float(fn(pts[i:i + chunk]).max()) for i in range(0, len(pts), chunk))


def grid_box_hausdorff(a: bs.Box, b: bs.Box, h: float = GRID_STEP) -> float:
    """``max(sup_{p in A_h} d(p, B), sup_{q in B_h} d(q, A))`` over step-h lattices."""
    ga = lattice(a.lo, a.hi, h)
    gb = lattice(b.lo, b.hi, h)
    return max(_sup_over_chunks(ga, lambda p: _dist_points_to_box(p, b)),
               _sup_over_chunks(gb, lambda q: _dist_points_to_box(q, a)))


def _radius_field(grid: np.ndarray, k: np.ndarray, chunk: int = 100_000) -> np.ndarray:
    out = np.empty(len(grid))
    for i in range(0, len(grid), chunk):
        g = grid[i:i + chunk]
        out[i:i + chunk] = np.max(np.abs(g[:, None, :] - k[None, :, :]), axis=(1, 2))
    return out


def grid_chebyshev(k, h: float = GRID_STEP, radius_hint: float | None = None) -> tuple[float, bs.Box]:
    """Minimize ``y -> max_x d(y, x)`` over a lattice.

    The lattice covers the bounding box of ``k`` inflated by ``radius_hint``
    (default: the diameter).  Returns the grid minimum and the bounding box of
    the lattice points within ``h`` of it.
    """
    k = bs.as_finite_set(k)
    lo, hi = k.min(axis=0), k.max(axis=0)
    pad = float(np.max(hi - lo)) if radius_hint is None else radius_hint
    grid = lattice(lo - pad, hi + pad, h)
    f = _radius_field(grid, k)
    r = float(f.min())
    near = grid[f <= r + h]
    return r, bs.Box(near.min(axis=0), near.max(axis=0))


def grid_centers(orbit_pts, h: float = GRID_STEP) -> tuple[float, bs.Box, bs.Box]:
    """Grid approximations of ``r(x)``, ``C(x)`` and ``CC(x)`` from an orbit.

    ``C`` is the set of lattice points whose farthest orbit point is within
    ``h`` of the grid minimum; ``CC`` keeps those points of it that lie within
    ``r + 2h`` of every point of that lattice set (the lattice copy of ``C``
    may overhang the true set by ``h`` on each side).
    """
    k = bs.as_finite_set(orbit_pts)
    lo, hi = k.min(axis=0), k.max(axis=0)
    # every minimizer is within r of each point, so a pad of diam/2 suffices
    pad = float(np.max(hi - lo)) / 2 + 2 * h
    grid = lattice(lo - pad, hi + pad, h)
    f = _radius_field(grid, k)
    r = float(f.min())
    c_pts = grid[f <= r + h]
    c_box = bs.Box(c_pts.min(axis=0), c_pts.max(axis=0))
    # the farthest point of the finite set c_pts from y, coordinate by coordinate
    g = np.max(np.maximum(np.abs(c_pts - c_pts.min(axis=0)), np.abs(c_pts - c_pts.max(axis=0))), axis=1)
    cc_pts = c_pts[g <= r + 2 * h + 1e-12]
    cc_box = bs.Box(cc_pts.min(axis=0), cc_pts.max(axis=0))
    return r, c_box, cc_box


def grid_shrink_hull(c: bs.Box, r: float, h: float = GRID_STEP) -> bs.Box | None:
    """Lattice points near ``c`` whose distance to every lattice point of ``c`` is at most ``r``.

    Cost is quadratic in the lattice size; meant for small boxes or coarse ``h``.
    """
    cand = lattice(c.lo - r, c.hi + r, h)
    pts = lattice(c.lo, c.hi, h)
    far = np.zeros(len(cand))
    for i in range(0, len(pts), 256):
        block = pts[i:i + 256]
        far = np.maximum(far, np.max(np.abs(cand[:, None, :] - block[None, :, :]), axis=2).max(axis=1))
    ok = cand[far <= r + 1e-12]
    if len(ok) == 0:
        return None
    return bs.Box(ok.min(axis=0), ok.max(axis=0))


# -- circle -----------------------------------------------------------------


def circle_grid(step: float = CIRCLE_GRID_STEP) -> np.ndarray:
    n = int(math.ceil(cs.TWO_PI / step))
    return np.arange(n) * (cs.TWO_PI / n)


def grid_circle_chebyshev(k, step: float = CIRCLE_GRID_STEP) -> tuple[float, np.ndarray]:
    """Grid minimum of ``y -> max_x d(y, x)`` and the grid points within ``step`` of it."""
    k = np.asarray(k, dtype=float)
    grid = circle_grid(step)
    f = cs.circle_dist_array(grid[:, None], k[None, :]).max(axis=1)
    r = float(f.min())
    return r, grid[f <= r + step]


def grid_arcset(s: cs.ArcSet, step: float = CIRCLE_GRID_STEP) -> np.ndarray:
    """Lattice points in ``s`` plus its arc endpoints (so degenerate arcs are kept)."""
    grid = circle_grid(step)
    mask = np.zeros(len(grid), dtype=bool)
    for arc in s.arcs:
        mask |= np.mod(grid - arc.start, cs.TWO_PI) <= arc.length
    inside = grid[mask]
    return np.concatenate([inside, np.array(s.endpoints(), dtype=float)])


def grid_arcset_hausdorff(a: cs.ArcSet, b: cs.ArcSet, step: float = CIRCLE_GRID_STEP) -> float:
    pa, pb = grid_arcset(a, step), grid_arcset(b, step)
    d = cs.circle_dist_array(pa[:, None], pb[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def grid_arc_double_center(a: cs.ArcSet, rho: float, step: float = CIRCLE_GRID_STEP) -> np.ndarray:
    """Points of ``a`` (sampled) within ``rho`` of every sampled point of ``a``."""
    pts = grid_arcset(a, step)
    far = np.zeros(len(pts))
    for i in range(0, len(pts), 2000):
        far = np.maximum(far, cs.circle_dist_array(pts[:, None], pts[None, i:i + 2000]).max(axis=1))
    return pts[far <= rho + 1e-12]
