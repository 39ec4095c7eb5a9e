"""The unit circle with its geodesic (arc-length) metric.

Balls of radius ``r < pi`` are closed arcs of length ``2r``; intersections
of balls are finite unions of arcs (:class:`ArcSet`) and can be
disconnected, which is what breaks continuity of centers on this space.

Angles are plain floats normalized to ``[0, 2*pi)``.  Internally arc sets
are cut at angle 0 into sorted closed intervals of ``[0, 2*pi]`` for the
set arithmetic and glued back when canonicalized.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .tolerances import GEOM_TOL

TWO_PI = 2.0 * math.pi


def normalize(theta: float) -> float:
    t = math.fmod(theta, TWO_PI)
    if t < 0:
        t += TWO_PI
    if t >= TWO_PI:
        t = 0.0
    return t


def circle_dist(a: float, b: float) -> float:
    diff = abs(normalize(a) - normalize(b))
    return min(diff, TWO_PI - diff)


def circle_dist_array(a, b) -> np.ndarray:
    diff = np.abs(np.mod(np.asarray(a, dtype=float) - np.asarray(b, dtype=float), TWO_PI))
    return np.minimum(diff, TWO_PI - diff)


@dataclass(frozen=True)
class Arc:
    """Closed arc traversed counterclockwise from ``start``."""

    start: float
    length: float

    def __post_init__(self):
        if not (0.0 <= self.length <= TWO_PI + GEOM_TOL):
            raise ValueError(f"arc length {self.length} outside [0, 2pi]")
        object.__setattr__(self, "start", normalize(self.start))
        object.__setattr__(self, "length", min(self.length, TWO_PI))

    @property
    def end(self) -> float:
        return normalize(self.start + self.length)

    @property
    def is_full(self) -> bool:
        return self.length >= TWO_PI

    def contains(self, theta: float, tol: float = GEOM_TOL) -> bool:
        if self.is_full:
            return True
        offset = normalize(theta - self.start)
        return offset <= self.length + tol or offset >= TWO_PI - tol

    def intervals(self) -> list[tuple[float, float]]:
        if self.is_full:
            return [(0.0, TWO_PI)]
        stop = self.start + self.length
        if stop <= TWO_PI:
            return [(self.start, stop)]
        return [(self.start, TWO_PI), (0.0, stop - TWO_PI)]


FULL_ARC = Arc(0.0, TWO_PI)


def _merge(intervals: list[tuple[float, float]], tol: float) -> list[tuple[float, float]]:
    merged: list[list[float]] = []
    for a, b in sorted(intervals):
        if merged and a <= merged[-1][1] + tol:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return [(a, b) for a, b in merged]


def _intervals_to_arcs(intervals: list[tuple[float, float]], tol: float) -> tuple[Arc, ...]:
    iv = _merge(intervals, tol)
    if not iv:
        return ()
    if len(iv) == 1 and iv[0][0] <= tol and iv[0][1] >= TWO_PI - tol:
        return (FULL_ARC,)
    arcs = []
    if len(iv) > 1 and iv[0][0] <= tol and iv[-1][1] >= TWO_PI - tol:
        # glue the piece ending at 2pi to the piece starting at 0
        first, last = iv[0], iv[-1]
        length = (TWO_PI - last[0]) + first[1]
        iv = iv[1:-1]
        arcs.append(Arc(last[0], min(length, TWO_PI)))
    arcs.extend(Arc(a, b - a) for a, b in iv)
    return tuple(sorted(arcs, key=lambda arc: arc.start))


@dataclass(frozen=True)
class ArcSet:
    """Finite union of pairwise disjoint closed arcs, kept in canonical order."""

    arcs: tuple[Arc, ...] = field(default=())

    @classmethod
    def from_intervals(cls, intervals, tol: float = GEOM_TOL) -> ArcSet:
        return cls(_intervals_to_arcs(list(intervals), tol))

    @classmethod
    def from_arcs(cls, arcs: Iterable[Arc], tol: float = GEOM_TOL) -> ArcSet:
        iv = [seg for arc in arcs for seg in arc.intervals()]
        return cls.from_intervals(iv, tol)

    @classmethod
    def from_points(cls, angles: Iterable[float], tol: float = GEOM_TOL) -> ArcSet:
        return cls.from_arcs((Arc(a, 0.0) for a in angles), tol)

    @classmethod
    def full(cls) -> ArcSet:
        return cls((FULL_ARC,))

    @property
    def is_empty(self) -> bool:
        return not self.arcs

    @property
    def is_full(self) -> bool:
        return len(self.arcs) == 1 and self.arcs[0].is_full

    def intervals(self) -> list[tuple[float, float]]:
        return sorted(seg for arc in self.arcs for seg in arc.intervals())

    def contains(self, theta: float, tol: float = GEOM_TOL) -> bool:
        return any(arc.contains(theta, tol) for arc in self.arcs)

    def endpoints(self) -> list[float]:
        pts = []
        for arc in self.arcs:
            if not arc.is_full:
                pts.append(arc.start)
                pts.append(arc.end)
        return pts

    def gaps(self) -> list[Arc]:
        """Closures of the components of the complement."""
        if self.is_empty:
            return [FULL_ARC]
        if self.is_full:
            return []
        out = []
        n = len(self.arcs)
        for i, arc in enumerate(self.arcs):
            nxt = self.arcs[(i + 1) % n]
            gap = normalize(nxt.start - arc.end)
            if n == 1:
                gap = TWO_PI - arc.length
            if gap > 0:
                out.append(Arc(arc.end, gap))
        return out

    def total_length(self) -> float:
        return sum(arc.length for arc in self.arcs)

    def sample(self, rng: np.random.Generator) -> float:
        """A point drawn uniformly by arc length (uniform over points if all arcs are degenerate)."""
        if self.is_empty:
            raise ValueError("cannot sample from an empty arc set")
        lengths = np.array([arc.length for arc in self.arcs])
        if lengths.sum() > 0:
            i = rng.choice(len(self.arcs), p=lengths / lengths.sum())
        else:
            i = rng.integers(len(self.arcs))
        arc = self.arcs[i]
        return normalize(arc.start + rng.uniform(0.0, arc.length))


def circle_ball(c: float, r: float) -> ArcSet:
    if r < 0:
        raise ValueError(f"negative radius {r}")
    if r >= math.pi:
        return ArcSet.full()
    return ArcSet((Arc(c - r, 2 * r),))


def _intersect_two(a: list[tuple[float, float]], b: list[tuple[float, float]], tol: float):
    out = []
    for a0, a1 in a:
        for b0, b1 in b:
            lo, hi = max(a0, b0), min(a1, b1)
            if lo <= hi:
                out.append((lo, hi))
            elif lo - hi <= tol:
                mid = 0.5 * (lo + hi)
                out.append((mid, mid))
    return out


def arcset_intersect(sets: Sequence[ArcSet], tol: float = GEOM_TOL) -> ArcSet:
    sets = list(sets)
    if not sets:
        raise ValueError("arcset_intersect needs at least one set")
    acc = sets[0].intervals()
    for s in sets[1:]:
        acc = _intersect_two(acc, s.intervals(), tol)
        if not acc:
            return ArcSet()
    return ArcSet.from_intervals(acc, tol)


def arcset_union(sets: Sequence[ArcSet], tol: float = GEOM_TOL) -> ArcSet:
    return ArcSet.from_intervals([seg for s in sets for seg in s.intervals()], tol)


def arc_hull_ball(arc: Arc, rho: float) -> ArcSet:
    """Points within ``rho`` of every point of ``arc``."""
    if rho >= math.pi:
        return ArcSet.full()
    if arc.length > 2 * rho:
        return ArcSet()
    return ArcSet((Arc(arc.start + arc.length - rho, 2 * rho - arc.length),))


def arcset_shrink_hull(s: ArcSet, rho: float, tol: float = GEOM_TOL) -> ArcSet:
    """``Intersection of B(y, rho) over y in s``; the circle analogue of ``shrink_hull``."""
    if s.is_empty:
        raise ValueError("shrink hull of an empty arc set")
    return arcset_intersect([arc_hull_ball(arc, rho) for arc in s.arcs], tol)


def dist_to_arcset(theta: float, s: ArcSet, tol: float = GEOM_TOL) -> float:
    if s.is_empty:
        raise ValueError("distance to an empty arc set")
    if s.contains(theta, tol):
        return 0.0
    return min(circle_dist(theta, e) for e in s.endpoints())


def _directed(a: ArcSet, b: ArcSet, tol: float) -> float:
    if b.is_full:
        return 0.0
    # dist(., b) restricted to a gap of b is a tent peaking at the gap midpoint,
    # so its sup over a is reached at an endpoint of a or at such a midpoint
    candidates = a.endpoints()
    for gap in b.gaps():
        m = normalize(gap.start + gap.length / 2)
        if a.contains(m, tol):
            candidates.append(m)
    return max((dist_to_arcset(c, b, tol) for c in candidates), default=0.0)


def arcset_hausdorff(a: ArcSet, b: ArcSet, tol: float = GEOM_TOL) -> float:
    if a.is_empty or b.is_empty:
        raise ValueError("Hausdorff distance of an empty arc set")
    return max(_directed(a, b, tol), _directed(b, a, tol))


def circle_set_hausdorff(k: Sequence[float], m: Sequence[float]) -> float:
    d = circle_dist_array(np.asarray(k, dtype=float)[:, None], np.asarray(m, dtype=float)[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def circle_diameter(k: Sequence[float]) -> float:
    k = np.asarray(k, dtype=float)
    return float(circle_dist_array(k[:, None], k[None, :]).max())


def circle_radius_at(y: float, k: Sequence[float]) -> float:
    """``r(y, K) = max over x in K of d(y, x)``."""
    return float(circle_dist_array(y, np.asarray(k, dtype=float)).max())


def circle_chebyshev(k: Sequence[float], tol: float = GEOM_TOL) -> tuple[float, ArcSet]:
    """Exact Chebyshev radius and center of a finite set of angles.

    ``y -> max_x d(y, x)`` is piecewise linear with slopes +-1, so it has no
    flat pieces and its minimizers are among the kinks: the points, their
    antipodes, and the two bisectors of every pair.
    """
    k = [normalize(float(x)) for x in k]
    if not k:
        raise ValueError("Chebyshev center of an empty set")
    cand = set()
    for x in k:
        cand.add(x)
        cand.add(normalize(x + math.pi))
    for x, y in combinations(k, 2):
        m = 0.5 * (x + y)
        cand.add(normalize(m))
        cand.add(normalize(m + math.pi))
    cand = np.array(sorted(cand))
    f = circle_dist_array(cand[:, None], np.array(k)[None, :]).max(axis=1)
    r = float(f.min())
    centers = cand[f <= r + tol]
    return r, ArcSet.from_points(centers.tolist(), tol)


def select_in(s: ArcSet, preference: float, tol: float = GEOM_TOL) -> float:
    """The point of ``s`` nearest to ``preference``; ties go to the smaller angle."""
    if s.is_empty:
        raise ValueError("select_in on an empty arc set")
    preference = normalize(preference)
    if s.contains(preference, tol):
        return preference
    ends = s.endpoints()
    dists = [circle_dist(preference, e) for e in ends]
    nearest = min(dists)
    return min(e for e, d in zip(ends, dists) if d <= nearest + tol)


@dataclass(frozen=True)
class BallFamily:
    """Balls ``B(center_i, radius_i)`` with centers drawn from the admissible set ``domain``."""

    domain: ArcSet
    centers: tuple[float, ...]
    radii: tuple[float, ...]


@dataclass
class LambdaReport:
    lam: float
    cases: int = 0
    violations: list[int] = field(default_factory=list)
    malformed: list[tuple[int, str]] = field(default_factory=list)
    witnesses: dict[int, BallFamily] = field(default_factory=dict)
    seed: int | None = None

    @property
    def n_violations(self) -> int:
        return len(self.violations)


def family_problem(fam: BallFamily, tol: float = GEOM_TOL) -> str | None:
    """Why ``fam`` is not a valid input for the lambda-hyperconvexity test, or None."""
    if fam.domain.is_empty:
        return "empty domain"
    if len(fam.centers) != len(fam.radii) or not fam.centers:
        return "centers and radii must be nonempty and of equal length"
    if any(r < 0 for r in fam.radii):
        return "negative radius"
    for i, c in enumerate(fam.centers):
        if not fam.domain.contains(c, 1e3 * tol):
            return f"center {i} outside the domain"
    for i, j in combinations(range(len(fam.centers)), 2):
        if circle_dist(fam.centers[i], fam.centers[j]) > fam.radii[i] + fam.radii[j] + 1e3 * tol:
            return f"balls {i} and {j} do not meet"
    return None


def check_lambda_hyperconvex(families: Sequence[BallFamily], lam: float, seed: int | None = None,
                             tol: float = GEOM_TOL) -> LambdaReport:
    """Count families for which ``D & (intersection of B(x_i, lam r_i))`` is empty."""
    rep = LambdaReport(lam=lam, seed=seed)
    for idx, fam in enumerate(families):
        problem = family_problem(fam, tol)
        if problem is not None:
            rep.malformed.append((idx, problem))
            continue
        rep.cases += 1
        balls = [circle_ball(c, lam * r) for c, r in zip(fam.centers, fam.radii)]
        if arcset_intersect([fam.domain, *balls], tol).is_empty:
            rep.violations.append(idx)
            rep.witnesses[idx] = fam
    return rep


def random_admissible(rng: np.random.Generator, max_balls: int = 3) -> ArcSet:
    """A nonempty intersection of a few random balls (possibly disconnected)."""
    while True:
        n = int(rng.integers(1, max_balls + 1))
        balls = [circle_ball(rng.uniform(0, TWO_PI), rng.uniform(0.3, math.pi)) for _ in range(n)]
        s = arcset_intersect(balls)
        if not s.is_empty:
            return s


def sample_ball_families(count: int, seed: int, max_balls: int = 4) -> list[BallFamily]:
    """Random valid families; radii are raised uniformly until the tightest pair just touches."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        domain = ArcSet.full() if rng.random() < 0.5 else random_admissible(rng)
        n = int(rng.integers(2, max_balls + 1))
        centers = [domain.sample(rng) for _ in range(n)]
        radii = rng.uniform(0.0, 1.0, size=n) * rng.uniform(0.0, math.pi / 2)
        slack = max(circle_dist(centers[i], centers[j]) - radii[i] - radii[j]
                    for i, j in combinations(range(n), 2))
        radii = radii + max(slack, 0.0) / 2
        out.append(BallFamily(domain, tuple(centers), tuple(float(r) for r in radii)))
    return out
