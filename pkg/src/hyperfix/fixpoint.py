"""Center sets and the constructive common-fixed-point iterations.

Three iteration modes share one loop:

* ``theorem1`` -- hyperconvex (box) model, ``x_{n+1}`` picked in the double
  center ``CC(x_n)``; contraction ``delta_{n+1} <= L^2/2 delta_n``.
* ``theorem2`` -- lambda-hyperconvex model, ``x_{n+1}`` picked in
  ``AA(x_n)``; contraction ``L^2 lam^2 / 2``.
* ``theorem3`` -- a single involution ``T`` (orbits ``{x, Tx}``), picked in
  ``AA(x_n)``; contraction ``L lam^2 / 2``.

A run whose Lipschitz hypothesis fails is still carried out and labelled,
because the negative scenarios rely on observing what happens.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import box_space as bs
from . import circle_space as cs
from .group_action import (Action, BoxDomain, CircleDomain, CircleIsometry, Mapping, cyclic,
                           identity_map, uniform_lipschitz)
from .tolerances import AUDIT_SLACK, GEOM_TOL, HOMOMORPHISM_TOL, ITER_TOL, MAX_ITER

MODES = ("theorem1", "theorem2", "theorem3")
OUTCOMES = ("converged", "hypothesis_violated", "empty_center", "max_iter")


class InvolutionError(ValueError):
    pass


@dataclass
class IterationConfig:
    x1: object
    tol: float = ITER_TOL
    max_iter: int = MAX_ITER
    lam: float = 1.0
    mode: str = "theorem1"

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"tol must be > 0, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.lam < 1:
            raise ValueError(f"lambda must be >= 1, got {self.lam}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "theorem1" and self.lam != 1:
            raise ValueError("theorem1 runs on a hyperconvex space: lambda must be 1")


@dataclass
class Step:
    n: int
    x: object
    delta: float
    r: float
    residual: float
    step_dist: float | None = None
    ratio: float | None = None


@dataclass
class IterationTrace:
    steps: list[Step]
    outcome: str
    mode: str
    L: float
    L_exact: bool
    lam: float
    tol: float
    bound: float
    hypothesis_ok: bool
    seed: int | None = None
    audit_failures: list[str] = field(default_factory=list)
    limit_audit_ok: bool = True
    stalled: bool = False

    @property
    def final_point(self):
        return self.steps[-1].x

    @property
    def final_residual(self) -> float:
        return self.steps[-1].residual

    @property
    def deltas(self) -> list[float]:
        return [s.delta for s in self.steps]

    @property
    def ratios(self) -> list[float]:
        return [s.ratio for s in self.steps if s.ratio is not None]

    @property
    def points(self) -> list:
        return [s.x for s in self.steps]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "delta", "r", "step_dist", "ratio", "residual"])
        for s in self.steps:
            w.writerow([s.n, fmt(s.delta), fmt(s.r), fmt(s.step_dist), fmt(s.ratio), fmt(s.residual)])
        return buf.getvalue()

    def summary(self) -> dict[str, str]:
        return {
            "mode": self.mode,
            "outcome": self.outcome,
            "final_point": fmt_point(self.final_point),
            "final_residual": fmt(self.final_residual),
            "steps": str(len(self.steps)),
            "L": fmt(self.L),
            "L_source": "slope analysis" if self.L_exact else "estimate only",
            "lambda": fmt(self.lam),
            "contraction_bound": fmt(self.bound),
            "hypothesis_ok": str(self.hypothesis_ok).lower(),
            "tol": fmt(self.tol),
            "seed": "" if self.seed is None else str(self.seed),
            "audit_failures": str(len(self.audit_failures)),
            "limit_audit_ok": str(self.limit_audit_ok).lower(),
        }


def fmt(v) -> str:
    if v is None:
        return ""
    return format(float(v), ".17g")


def fmt_point(x) -> str:
    return " ".join(fmt(v) for v in np.atleast_1d(x))


# -- center sets ------------------------------------------------------------


def residual(act: Action, x) -> float:
    """``max_a d(T_a x, x)``; zero exactly on common fixed points."""
    return float(np.max(act.domain.dist(act.orbit(x), x)))


def _require_box(act: Action):
    if act.space != "box":
        raise ValueError("center_C / center_CC are defined for the box model only")


def center_C(act: Action, x) -> bs.Box | None:
    """``C(x) = intersection of B(T_a x, r(x))``."""
    _require_box(act)
    pts = act.orbit(x)
    r, _ = bs.chebyshev(pts)
    if r == 0:
        return bs.point_box(pts[0])
    return bs.intersect_balls(pts, r)


def center_CC(act: Action, x) -> bs.Box | None:
    """``CC(x) = C(x) & (intersection of B(y, r(x)) over y in C(x))``."""
    _require_box(act)
    c = center_C(act, x)
    if c is None:
        return None
    r, _ = bs.chebyshev(act.orbit(x))
    hull = bs.shrink_hull(c, r)
    return None if hull is None else bs.intersect([hull, c])


def set_A(act: Action, x, lam: float):
    """``A(x) = intersection of B(T_a x, lam delta(x) / 2)``: a Box (or None) or an ArcSet."""
    pts = act.orbit(x)
    delta = act.domain.diameter(pts)
    rad = lam * delta / 2
    if act.space == "circle":
        return cs.arcset_intersect([cs.circle_ball(float(p), rad) for p in pts])
    if delta == 0:
        return bs.point_box(pts[0])
    return bs.intersect_balls(pts, rad)


def set_AA(act: Action, x, lam: float):
    """``AA(x)``: the points of ``A(x)`` within ``lam^2 delta(x) / 2`` of all of ``A(x)``."""
    a = set_A(act, x, lam)
    delta = act.domain.diameter(act.orbit(x))
    rho = lam * lam * delta / 2
    if act.space == "circle":
        if a.is_empty:
            return a
        return cs.arcset_intersect([a, cs.arcset_shrink_hull(a, rho)])
    if a is None:
        return None
    hull = bs.shrink_hull(a, rho)
    return None if hull is None else bs.intersect([hull, a])


def _is_empty(s) -> bool:
    return s is None or (isinstance(s, cs.ArcSet) and s.is_empty)


def _select(s, prev):
    if isinstance(s, cs.ArcSet):
        return cs.select_in(s, float(prev))
    return bs.midpoint(s)


# -- the iteration loop -----------------------------------------------------


def _run(act: Action, cfg: IterationConfig, next_set, L: float, L_exact: bool,
         bound: float, hypothesis_ok: bool, seed=None) -> IterationTrace:
    dist = act.dist
    x = float(cs.normalize(float(cfg.x1))) if act.space == "circle" else bs.as_point(cfg.x1)
    steps: list[Step] = []
    failures: list[str] = []
    outcome = "max_iter"
    stalled = False
    for n in range(1, cfg.max_iter + 1):
        pts = act.orbit(x)
        delta = act.domain.diameter(pts)
        r = act.domain.chebyshev_radius(pts)
        step = Step(n, x, delta, r, residual(act, x))
        if steps:
            prev = steps[-1]
            if prev.delta > 0:
                prev.ratio = delta / prev.delta
            if delta > bound * prev.delta + cfg.tol:
                failures.append(f"step {prev.n}: delta {delta!r} > {bound!r} * {prev.delta!r}")
        steps.append(step)
        if delta <= cfg.tol:
            outcome = "converged"
            break
        if n == cfg.max_iter:
            break
        s = next_set(x)
        if _is_empty(s):
            outcome = "empty_center"
            break
        x_next = _select(s, x)
        step.step_dist = dist(x_next, x)
        if step.step_dist > cfg.lam * delta / 2 + GEOM_TOL:
            failures.append(f"step {n}: moved {step.step_dist!r} > lam*delta/2 = {cfg.lam * delta / 2!r}")
        if step.step_dist == 0:
            # stationary: every further step repeats this one
            stalled = True
            break
        x = x_next
    if outcome == "max_iter" and not hypothesis_ok:
        outcome = "hypothesis_violated"
    trace = IterationTrace(steps, outcome, cfg.mode, L, L_exact, cfg.lam, cfg.tol, bound,
                           hypothesis_ok, seed, failures, stalled=stalled)
    trace.limit_audit_ok = limit_audit(act, trace)
    return trace


def limit_audit(act: Action, trace: IterationTrace, last: int = 3, slack: float = AUDIT_SLACK) -> bool:
    """``delta(x_0) <= 2 L d(x_0, x_n) + delta(x_n)`` for the last iterates, ``x_0`` the final point."""
    x0 = trace.final_point
    d0 = trace.steps[-1].delta
    return all(d0 <= 2 * trace.L * act.dist(x0, s.x) + s.delta + slack for s in trace.steps[-last:])


def _lipschitz(act: Action, seed):
    L, exact = uniform_lipschitz(act, seed=0 if seed is None else seed)
    # a group contains the identity, so its uniform constant is at least 1
    return max(L, 1.0), exact


def iterate_theorem1(act: Action, cfg: IterationConfig, seed=None) -> IterationTrace:
    _require_box(act)
    if cfg.mode != "theorem1":
        raise ValueError("config mode must be theorem1")
    L, exact = _lipschitz(act, seed)
    return _run(act, cfg, lambda x: center_CC(act, x), L, exact, L * L / 2, L < math.sqrt(2), seed)


def iterate_theorem2(act: Action, cfg: IterationConfig, seed=None) -> IterationTrace:
    if cfg.mode != "theorem2":
        raise ValueError("config mode must be theorem2")
    L, exact = _lipschitz(act, seed)
    lam = cfg.lam
    return _run(act, cfg, lambda x: set_AA(act, x, lam), L, exact, L * L * lam * lam / 2,
                L < math.sqrt(2) / lam, seed)


def involution_action(t: Mapping, domain) -> Action:
    if domain.kind == "circle":
        ident = CircleIsometry("rotation", 0.0)
    else:
        ident = identity_map(domain.dim)
    return Action(cyclic(2), (ident, t), domain, name="involution")


def involution_deviation(t: Mapping, domain, samples: int = 1000, seed: int = 0) -> float:
    rng = np.random.default_rng(seed)
    xs = domain.sample(rng, samples)
    return float(np.max(domain.dist(t(t(xs)), xs)))


def iterate_involution(t: Mapping, cfg: IterationConfig, domain=None, seed=None,
                       check_samples: int = 1000) -> IterationTrace:
    if cfg.mode != "theorem3":
        raise ValueError("config mode must be theorem3")
    if domain is None:
        domain = CircleDomain() if t.space == "circle" else BoxDomain.cube(np.size(cfg.x1))
    dev = involution_deviation(t, domain, check_samples, 0 if seed is None else seed)
    if dev > HOMOMORPHISM_TOL:
        raise InvolutionError(f"T o T differs from the identity by {dev}")
    act = involution_action(t, domain)
    L, exact = _lipschitz(act, seed)
    lam = cfg.lam
    return _run(act, cfg, lambda x: set_AA(act, x, lam), L, exact, L * lam * lam / 2,
                L < 2 / (lam * lam), seed)


iterate_group = iterate_theorem1


def iterate(act: Action, cfg: IterationConfig, seed=None) -> IterationTrace:
    if cfg.mode == "theorem1":
        return iterate_theorem1(act, cfg, seed)
    if cfg.mode == "theorem2":
        return iterate_theorem2(act, cfg, seed)
    if act.order != 2:
        raise ValueError("theorem3 needs a two-element action (an involution)")
    return iterate_involution(act.maps[1 - act.group.identity], cfg, act.domain, seed)
