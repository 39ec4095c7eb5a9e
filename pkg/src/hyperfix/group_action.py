"""Finite groups acting on the box and circle models.

A group is an explicit Cayley table over element indices ``0..n-1``; an
:class:`Action` attaches one evaluable :class:`Mapping` to every element.
Sampling helpers take an explicit seed and record it in their reports.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Sequence

import numpy as np

from . import box_space as bs
from . import circle_space as cs
from .tolerances import DEDUP_TOL, HOMOMORPHISM_TOL


# -- groups -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    cayley: np.ndarray
    identity: int
    inverse: tuple[int, ...]

    def __post_init__(self):
        t = np.asarray(self.cayley)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise ValueError(f"Cayley table must be a nonempty square array, got shape {t.shape}")
        if not np.issubdtype(t.dtype, np.integer):
            if not np.all(t == np.round(t)):
                raise ValueError("Cayley table entries must be integers")
            t = t.astype(int)
        n = t.shape[0]
        if t.min() < 0 or t.max() >= n:
            raise ValueError("Cayley table entries out of range")
        if not 0 <= self.identity < n or len(self.inverse) != n:
            raise ValueError("identity/inverse do not match the table size")
        t = t.copy()
        t.setflags(write=False)
        object.__setattr__(self, "cayley", t)
        object.__setattr__(self, "inverse", tuple(int(i) for i in self.inverse))

    @property
    def n(self) -> int:
        return self.cayley.shape[0]

    def mul(self, a: int, b: int) -> int:
        return int(self.cayley[a, b])

    @classmethod
    def from_table(cls, table) -> FiniteGroup:
        """Build a group from a table alone, locating the identity and inverses."""
        t = np.asarray(table)
        n = t.shape[0] if t.ndim == 2 else 0
        if t.ndim != 2 or t.shape[1] != n or n == 0:
            raise ValueError(f"Cayley table must be a nonempty square array, got shape {t.shape}")
        ident = [e for e in range(n) if np.array_equal(t[e], np.arange(n)) and np.array_equal(t[:, e], np.arange(n))]
        if not ident:
            raise ValueError("table has no identity element")
        e = ident[0]
        inv = []
        for a in range(n):
            cand = [b for b in range(n) if t[a, b] == e and t[b, a] == e]
            if not cand:
                raise ValueError(f"element {a} has no inverse")
            inv.append(cand[0])
        return cls(t, e, tuple(inv))


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group order must be >= 1")
    idx = np.arange(n)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n, 0, tuple((-idx) % n))


@dataclass
class GroupReport:
    valid: bool
    associativity: list[tuple[int, int, int]]
    identity: list[int]
    inverse: list[int]


def verify_group(g: FiniteGroup, max_listed: int = 100) -> GroupReport:
    """Check associativity on every triple plus identity and inverse laws."""
    t = g.cayley
    n = g.n
    ar = np.arange(n)
    left = t[t[:, :, None], ar[None, None, :]]  # (ab)c
    right = t[ar[:, None, None], t[None, :, :]]  # a(bc)
    bad = np.argwhere(left != right)
    assoc = [tuple(int(v) for v in row) for row in bad[:max_listed]]
    e = g.identity
    ident = [int(a) for a in ar if t[e, a] != a or t[a, e] != a]
    inv = [int(a) for a in ar if t[a, g.inverse[a]] != e or t[g.inverse[a], a] != e]
    return GroupReport(not (len(bad) or ident or inv), assoc, ident, inv)


# -- mappings ---------------------------------------------------------------


class Mapping:
    """Evaluable self-map of one of the two spaces."""

    space = "box"
    declared_L: float | None = None

    def __call__(self, x):
        raise NotImplementedError

    def exact_lipschitz(self) -> float | None:
        """Lipschitz constant from slope analysis, or None when not available."""
        return None

    def inverse(self) -> Mapping:
        raise NotImplementedError(f"{type(self).__name__} has no inverse")


@dataclass(frozen=True, eq=False)
class AffineMap(Mapping):
    matrix: np.ndarray
    offset: np.ndarray
    declared_L: float | None = None

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        b = np.asarray(self.offset, dtype=float).reshape(-1)
        if a.shape[0] != a.shape[1] or a.shape[0] != b.size:
            raise bs.DimensionError(f"matrix {a.shape} and offset {b.shape} do not fit")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "offset", b)

    @property
    def dim(self) -> int:
        return self.offset.size

    def __call__(self, x):
        return np.asarray(x, dtype=float) @ self.matrix.T + self.offset

    def exact_lipschitz(self) -> float:
        # operator norm induced by the max norm = largest absolute row sum
        return float(np.max(np.sum(np.abs(self.matrix), axis=1)))

    def compose(self, inner: AffineMap) -> AffineMap:
        return AffineMap(self.matrix @ inner.matrix, self.matrix @ inner.offset + self.offset)

    def inverse(self) -> AffineMap:
        inv = np.linalg.inv(self.matrix)
        if np.all(self.matrix == np.round(self.matrix)):
            r = np.round(inv)
            if np.allclose(inv, r, atol=1e-12):
                inv = r
        return AffineMap(inv, -inv @ self.offset)

    def key(self, decimals: int = 9) -> bytes:
        # + 0.0 folds -0.0 into 0.0 so equal maps get equal keys
        return (np.round(np.concatenate([self.matrix.ravel(), self.offset]), decimals) + 0.0).tobytes()


def identity_map(d: int) -> AffineMap:
    return AffineMap(np.eye(d), np.zeros(d))


def rotation2d(quarter_turns: int | None = None, angle: float | None = None, center=(0.0, 0.0)) -> AffineMap:
    """Rotation of the plane about ``center``; quarter turns give exact integer matrices."""
    if quarter_turns is not None:
        c, s = [(1, 0), (0, 1), (-1, 0), (0, -1)][quarter_turns % 4]
    elif angle is not None:
        c, s = math.cos(angle), math.sin(angle)
    else:
        raise ValueError("give quarter_turns or angle")
    r = np.array([[c, -s], [s, c]], dtype=float)
    center = bs.as_point(center)
    return AffineMap(r, center - r @ center)


def permutation_map(perm: Sequence[int], signs: Sequence[int] | None = None, center=None) -> AffineMap:
    """``x -> P (x - center) + center`` with ``(P x)_{perm[i]} = signs[i] x_i``."""
    d = len(perm)
    if sorted(perm) != list(range(d)):
        raise ValueError(f"not a permutation: {perm}")
    signs = [1] * d if signs is None else list(signs)
    p = np.zeros((d, d))
    for i, (j, s) in enumerate(zip(perm, signs)):
        p[j, i] = s
    c = np.zeros(d) if center is None else bs.as_point(center)
    return AffineMap(p, c - p @ c)


@dataclass(frozen=True, eq=False)
class PiecewiseLinearMap(Mapping):
    """Coordinatewise continuous piecewise-linear map.

    ``knots`` holds one ``(xs, ys)`` pair per coordinate; a single pair is
    applied to every coordinate.  Beyond the outer knots the end pieces are
    extended linearly.
    """

    knots: tuple[tuple[tuple[float, ...], tuple[float, ...]], ...]
    declared_L: float | None = None

    def __post_init__(self):
        clean = []
        for xs, ys in self.knots:
            xs = tuple(float(v) for v in xs)
            ys = tuple(float(v) for v in ys)
            if len(xs) != len(ys) or len(xs) < 2:
                raise ValueError("each coordinate needs >= 2 knots with matching x and y lists")
            if any(b <= a for a, b in zip(xs, xs[1:])):
                raise ValueError(f"breakpoints must be strictly increasing: {xs}")
            clean.append((xs, ys))
        if not clean:
            raise ValueError("no knots")
        object.__setattr__(self, "knots", tuple(clean))

    def _coord(self, i: int):
        return self.knots[0] if len(self.knots) == 1 else self.knots[i]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        d = x.shape[-1]
        if len(self.knots) not in (1, d):
            raise bs.DimensionError(f"map has {len(self.knots)} coordinate knot lists, point has {d}")
        for i in range(d):
            xs, ys = (np.asarray(v) for v in self._coord(i))
            t = x[..., i]
            v = np.interp(t, xs, ys)
            s0 = (ys[1] - ys[0]) / (xs[1] - xs[0])
            s1 = (ys[-1] - ys[-2]) / (xs[-1] - xs[-2])
            v = np.where(t < xs[0], ys[0] + s0 * (t - xs[0]), v)
            v = np.where(t > xs[-1], ys[-1] + s1 * (t - xs[-1]), v)
            out[..., i] = v
        return out

    def slopes(self) -> list[np.ndarray]:
        return [np.diff(ys) / np.diff(xs) for xs, ys in (tuple(map(np.asarray, k)) for k in self.knots)]

    def exact_lipschitz(self) -> float:
        return float(max(np.max(np.abs(s)) for s in self.slopes()))

    def coordinate_fixed_points(self, i: int = 0, tol: float = 1e-12) -> list[float]:
        """Solutions of ``g(t) = t`` for the coordinate function ``g`` of coordinate ``i``.

        Each linear piece (the end pieces run to infinity) contributes at
        most one root; a piece lying on the diagonal would give a continuum
        and raises.
        """
        xs, ys = (np.asarray(v) for v in self._coord(i))
        roots: list[float] = []
        last = len(xs) - 2
        for k in range(last + 1):
            s = (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k])
            b = ys[k] - s * xs[k]
            if abs(s - 1) <= tol:
                if abs(b) <= tol:
                    raise ValueError(f"coordinate {i}: piece {k} lies on the diagonal")
                continue
            t = b / (1 - s)
            # knots on the diagonal are exact roots; prefer them over the rounded formula
            on_diag = [float(u) for u, v in zip(xs, ys) if u == v and abs(u - t) <= 1e3 * tol]
            if on_diag:
                t = on_diag[0]
            lo = -np.inf if k == 0 else xs[k]
            hi = np.inf if k == last else xs[k + 1]
            if lo - tol <= t <= hi + tol and not any(abs(t - u) <= tol for u in roots):
                roots.append(float(t))
        return sorted(roots)

    def inverse(self) -> PiecewiseLinearMap:
        out = []
        for (xs, ys), s in zip(self.knots, self.slopes()):
            if np.all(s > 0):
                out.append((ys, xs))
            elif np.all(s < 0):
                out.append((ys[::-1], xs[::-1]))
            else:
                raise ValueError("piecewise-linear map is not monotone, no inverse")
        return PiecewiseLinearMap(tuple(out))


def f_a_map(a: float) -> PiecewiseLinearMap:
    """``t -> (1+a)t + a`` on [-1, 0] and ``(1-a)t + a`` on (0, 1], in every coordinate."""
    if not 0 < a < 1:
        raise ValueError("a must lie in (0, 1)")
    return PiecewiseLinearMap((((-1.0, 0.0, 1.0), (-1.0, a, 1.0)),), declared_L=1 + a)


def kink_involution(c: float) -> PiecewiseLinearMap:
    """Decreasing involution of [0, 1] through (0, 1), (c, c), (1, 0)."""
    if not 0 < c < 1:
        raise ValueError("c must lie in (0, 1)")
    return PiecewiseLinearMap((((0.0, c, 1.0), (1.0, c, 0.0)),))


@dataclass(frozen=True)
class CircleIsometry(Mapping):
    """Rotation ``t -> t + angle`` or reflection ``t -> 2*angle - t``."""

    kind: str
    angle: float
    space = "circle"

    def __post_init__(self):
        if self.kind not in ("rotation", "reflection"):
            raise ValueError(f"unknown circle isometry {self.kind!r}")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        v = t + self.angle if self.kind == "rotation" else 2 * self.angle - t
        out = np.mod(v, cs.TWO_PI)
        return np.where(out >= cs.TWO_PI, 0.0, out)

    def exact_lipschitz(self) -> float:
        return 1.0

    def compose(self, inner: CircleIsometry) -> CircleIsometry:
        a, b = self.angle, inner.angle
        if self.kind == "rotation" and inner.kind == "rotation":
            return CircleIsometry("rotation", a + b)
        if self.kind == "rotation":
            return CircleIsometry("reflection", b + a / 2)
        if inner.kind == "rotation":
            return CircleIsometry("reflection", a - b / 2)
        return CircleIsometry("rotation", 2 * (a - b))

    def inverse(self) -> CircleIsometry:
        return CircleIsometry("rotation", -self.angle) if self.kind == "rotation" else self


@dataclass(frozen=True)
class CompositeMap(Mapping):
    """``maps[0] o maps[1] o ...`` (the last map is applied first)."""

    maps: tuple[Mapping, ...]
    declared_L: float | None = None

    @property
    def space(self):
        return self.maps[0].space

    def __call__(self, x):
        for m in reversed(self.maps):
            x = m(x)
        return x

    def exact_lipschitz(self) -> float | None:
        ls = [m.exact_lipschitz() for m in self.maps]
        if all(v == 1.0 for v in ls):
            return 1.0
        return None

    def inverse(self) -> CompositeMap:
        return CompositeMap(tuple(m.inverse() for m in reversed(self.maps)))


def compose(outer: Mapping, inner: Mapping) -> Mapping:
    if isinstance(outer, AffineMap) and isinstance(inner, AffineMap):
        return outer.compose(inner)
    if isinstance(outer, CircleIsometry) and isinstance(inner, CircleIsometry):
        return outer.compose(inner)
    return CompositeMap((outer, inner))


def power(m: Mapping, k: int, dim: int | None = None) -> Mapping:
    if k < 0:
        return power(m.inverse(), -k, dim)
    if k == 0:
        if m.space == "circle":
            return CircleIsometry("rotation", 0.0)
        if dim is None:
            dim = m.dim if isinstance(m, AffineMap) else None
        if dim is None:
            raise ValueError("dimension needed for the identity map")
        return identity_map(dim)
    out = m
    for _ in range(k - 1):
        out = compose(m, out)
    return out


# -- spaces and actions -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class BoxDomain:
    """``(R^d, max norm)``; ``lo``/``hi`` only bound where random points are drawn."""

    lo: np.ndarray
    hi: np.ndarray
    kind = "box"

    def __post_init__(self):
        object.__setattr__(self, "lo", bs.as_point(self.lo))
        object.__setattr__(self, "hi", bs.as_point(self.hi))
        if self.lo.shape != self.hi.shape or np.any(self.lo > self.hi):
            raise ValueError("bad sampling box")

    @classmethod
    def cube(cls, d: int, half_width: float = 1.0) -> BoxDomain:
        return cls(-half_width * np.ones(d), half_width * np.ones(d))

    @property
    def dim(self) -> int:
        return self.lo.size

    def sample(self, rng: np.random.Generator, n: int | None = None):
        size = (self.dim,) if n is None else (n, self.dim)
        return rng.uniform(self.lo, self.hi, size=size)

    @staticmethod
    def dist(p, q):
        return np.max(np.abs(np.asarray(p) - np.asarray(q)), axis=-1)

    @staticmethod
    def diameter(points) -> float:
        return bs.diameter(points)

    @staticmethod
    def chebyshev_radius(points) -> float:
        return bs.chebyshev(points)[0]

    @staticmethod
    def set_hausdorff(k, m) -> float:
        return bs.set_hausdorff(k, m)


@dataclass(frozen=True)
class CircleDomain:
    kind = "circle"
    dim = 1

    @staticmethod
    def sample(rng: np.random.Generator, n: int | None = None):
        return rng.uniform(0.0, cs.TWO_PI, size=n)

    @staticmethod
    def dist(p, q):
        return cs.circle_dist_array(p, q)

    @staticmethod
    def diameter(points) -> float:
        return cs.circle_diameter(points)

    @staticmethod
    def chebyshev_radius(points) -> float:
        return cs.circle_chebyshev(points)[0]

    @staticmethod
    def set_hausdorff(k, m) -> float:
        return cs.circle_set_hausdorff(k, m)


Domain = BoxDomain | CircleDomain


@dataclass(frozen=True, eq=False)
class Action:
    group: FiniteGroup
    maps: tuple[Mapping, ...]
    domain: Domain
    name: str = ""

    def __post_init__(self):
        maps = tuple(self.maps)
        if len(maps) != self.group.n:
            raise ValueError(f"group has {self.group.n} elements but {len(maps)} maps were given")
        for m in maps:
            if m.space != self.domain.kind:
                raise ValueError(f"{type(m).__name__} acts on {m.space}, domain is {self.domain.kind}")
        object.__setattr__(self, "maps", maps)
        stacked = None
        if all(isinstance(m, AffineMap) for m in maps):
            stacked = (np.stack([m.matrix for m in maps]), np.stack([m.offset for m in maps]))
        object.__setattr__(self, "_stacked", stacked)

    @property
    def order(self) -> int:
        return self.group.n

    @property
    def is_affine(self) -> bool:
        return self._stacked is not None

    @property
    def space(self) -> str:
        return self.domain.kind

    def apply(self, a: int, x):
        return self.maps[a](x)

    def orbit(self, x) -> np.ndarray:
        if self.space == "circle":
            return np.array([float(m(x)) for m in self.maps])
        x = bs.as_point(x)
        if self._stacked is not None:
            a, b = self._stacked
            return np.einsum("aij,j->ai", a, x) + b
        return np.stack([m(x) for m in self.maps])

    def dist(self, p, q) -> float:
        return float(self.domain.dist(p, q))


# -- orbit statistics -------------------------------------------------------


def dedup_points(points: np.ndarray, dist: Callable, tol: float = DEDUP_TOL) -> np.ndarray:
    kept = []
    for p in points:
        if not any(float(dist(p, q)) <= tol for q in kept):
            kept.append(p)
    return np.array(kept)


def orbit(act: Action, x) -> np.ndarray:
    return act.orbit(x)


@dataclass
class OrbitStats:
    delta: float
    r: float
    points: np.ndarray
    radius_at: Callable[[object], float]


def orbit_stats(act: Action, x) -> OrbitStats:
    """Diameter, Chebyshev radius and the relative radius ``y -> r(y, x)`` of an orbit."""
    pts = dedup_points(act.orbit(x), act.domain.dist)
    delta = act.domain.diameter(pts)
    r = act.domain.chebyshev_radius(pts)

    def radius_at(y, _pts=pts):
        return float(np.max(act.domain.dist(_pts, y)))

    return OrbitStats(delta, r, pts, radius_at)


def dG(act: Action, x, y) -> float:
    """``max over a of d(T_a x, T_a y)``."""
    return float(np.max(act.domain.dist(act.orbit(x), act.orbit(y))))


@dataclass
class ActionReport:
    max_deviation: float
    identity_deviation: float
    passed: bool
    worst: tuple | None
    samples: int
    seed: int


def verify_action(act: Action, samples: int = 1000, seed: int = 0,
                  tol: float = HOMOMORPHISM_TOL) -> ActionReport:
    """Sample ``(a, b, x)`` and measure ``d(T_a T_b x, T_{ab} x)``."""
    rng = np.random.default_rng(seed)
    g = act.group
    worst, worst_at = 0.0, None
    xs = act.domain.sample(rng, samples)
    a_s = rng.integers(g.n, size=samples)
    b_s = rng.integers(g.n, size=samples)
    for x, a, b in zip(xs, a_s, b_s):
        dev = act.dist(act.maps[a](act.maps[b](x)), act.maps[g.mul(a, b)](x))
        if dev > worst:
            worst, worst_at = dev, (int(a), int(b), np.asarray(x).tolist())
    e = act.maps[g.identity]
    ident = float(np.max(act.domain.dist(e(xs), xs)))
    return ActionReport(worst, ident, worst <= tol and ident <= tol, worst_at, samples, seed)


def _sample_pairs(domain: Domain, rng: np.random.Generator, samples: int):
    """Random pairs, half of them drawn close together so single linear pieces are resolved."""
    xs = domain.sample(rng, samples)
    ys = domain.sample(rng, samples)
    near = rng.random(samples) < 0.5
    if domain.kind == "circle":
        ys = np.where(near, np.mod(xs + rng.uniform(-1e-3, 1e-3, samples), cs.TWO_PI), ys)
    else:
        step = rng.uniform(-1e-3, 1e-3, size=xs.shape) * (domain.hi - domain.lo)
        ys = np.where(near[:, None], np.clip(xs + step, domain.lo, domain.hi), ys)
    return xs, ys


def _max_ratio(m: Mapping, domain: Domain, x, y) -> float:
    d = domain.dist(x, y)
    ok = d > 0
    if not np.any(ok):
        return 0.0
    return float(np.max(domain.dist(m(x[ok]), m(y[ok])) / d[ok]))


def estimate_L(act: Action, samples: int = 1000, seed: int = 0) -> float:
    """Largest sampled ``d(T_a x, T_a y) / d(x, y)``; a lower bound on the uniform constant."""
    rng = np.random.default_rng(seed)
    xs, ys = _sample_pairs(act.domain, rng, samples)
    a_s = rng.integers(act.order, size=samples)
    best = 0.0
    for a in range(act.order):
        sel = a_s == a
        if np.any(sel):
            best = max(best, _max_ratio(act.maps[a], act.domain, xs[sel], ys[sel]))
    return best


def estimate_map_L(m: Mapping, domain: Domain, samples: int = 1000, seed: int = 0) -> float:
    """Sampled Lipschitz constant of a single map over ``domain``."""
    rng = np.random.default_rng(seed)
    xs, ys = _sample_pairs(domain, rng, samples)
    return _max_ratio(m, domain, xs, ys)


def uniform_lipschitz(act: Action, samples: int = 1000, seed: int = 0) -> tuple[float, bool]:
    """``(L, exact)``: slope analysis when every map supports it, else the sampled estimate."""
    vals = [m.exact_lipschitz() for m in act.maps]
    if all(v is not None for v in vals):
        return float(max(vals)), True
    return estimate_L(act, samples, seed), False


def lemma_bounded_check(act: Action, x, y, L: float | None = None, slack: float = 1e-9) -> bool:
    """``delta(y) <= 2 L d(x, y) + delta(x)``."""
    if L is None:
        L = uniform_lipschitz(act)[0]
    dx = act.domain.diameter(act.orbit(x))
    dy = act.domain.diameter(act.orbit(y))
    return dy <= 2 * L * act.dist(x, y) + dx + slack


# -- generated groups -------------------------------------------------------


class WordBudgetExceeded(RuntimeError):
    pass


@dataclass
class WordBall:
    points: list[np.ndarray]  # points reachable by words of length <= k, k = 0..max_len
    diameters: list[float]


def word_ball_orbit(generators: Sequence[Mapping], max_len: int, x, cap: int = 1_000_000,
                    decimals: int = 9) -> WordBall:
    """Images of ``x`` under all words of length <= k in the generators and their inverses.

    Points are merged after rounding to ``decimals`` places, so the work is
    bounded by the number of distinct points rather than the number of words.
    """
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    letters = []
    for g in generators:
        letters.append(g)
        letters.append(g.inverse())
    x = bs.as_point(x)
    seen = {(np.round(x, decimals) + 0.0).tobytes()}
    frontier = [x]
    all_pts = [x]
    points, diameters = [np.array(all_pts)], [0.0]
    for _ in range(max_len):
        new = []
        if frontier:
            batch = np.array(frontier)
            for g in letters:
                for p in np.atleast_2d(g(batch)):
                    key = (np.round(p, decimals) + 0.0).tobytes()
                    if key not in seen:
                        seen.add(key)
                        new.append(p)
                        if len(seen) > cap:
                            raise WordBudgetExceeded(f"more than {cap} distinct points")
        all_pts.extend(new)
        frontier = new
        arr = np.array(all_pts)
        points.append(arr)
        diameters.append(bs.diameter(arr))
    return WordBall(points, diameters)


def affine_closure(generators: Sequence[AffineMap], max_order: int = 1000) -> tuple[FiniteGroup, list[AffineMap]]:
    """Finite group generated by affine maps, with its Cayley table."""
    d = generators[0].dim
    elems = [identity_map(d)]
    index = {elems[0].key(): 0}
    frontier = [elems[0]]
    while frontier:
        nxt = []
        for h in frontier:
            for g in generators:
                m = g.compose(h)
                k = m.key()
                if k not in index:
                    if len(elems) >= max_order:
                        raise ValueError(f"generated group has more than {max_order} elements")
                    index[k] = len(elems)
                    elems.append(m)
                    nxt.append(m)
        frontier = nxt
    n = len(elems)
    table = np.empty((n, n), dtype=int)
    for i, j in product(range(n), repeat=2):
        table[i, j] = index[elems[i].compose(elems[j]).key()]
    return FiniteGroup.from_table(table), elems


def cyclic_action(generator: Mapping, n: int, domain: Domain, name: str = "") -> Action:
    """``Z_n`` acting through powers of ``generator`` (assumed to have period n)."""
    dim = domain.dim if domain.kind == "box" else None
    maps = tuple(power(generator, k, dim) for k in range(n))
    return Action(cyclic(n), maps, domain, name)


def random_signed_permutation(rng: np.random.Generator, d: int) -> tuple[list[int], list[int]]:
    return rng.permutation(d).tolist(), rng.choice([-1, 1], size=d).tolist()


def random_isometry_action(rng: np.random.Generator, max_dim: int = 6, max_order: int = 48,
                           spread: float = 2.0) -> Action:
    """Group of signed permutations acting around a random center: every map is an isometry."""
    while True:
        d = int(rng.integers(1, max_dim + 1))
        center = rng.uniform(-spread / 2, spread / 2, size=d)
        gens = [permutation_map(*random_signed_permutation(rng, d), center=center)
                for _ in range(int(rng.integers(1, 3)))]
        try:
            group, maps = affine_closure(gens, max_order)
        except ValueError:
            continue
        if group.n > 1:
            return Action(group, tuple(maps), BoxDomain.cube(d, spread), name=f"random-isometry-d{d}-n{group.n}")
