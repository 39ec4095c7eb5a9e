"""Property suites behind ``hyperfix verify``.

Every suite draws its own generator from ``(seed, crc32(name))`` so results
do not depend on which other suites ran.  A suite is a list of inequality
checks ``lhs <= rhs + slack``; the largest ``lhs - rhs`` seen is reported as
``max_slack``.  Suites marked ``expect_violations`` are negative controls:
they pass only when at least one violation is found.
"""
from __future__ import annotations

import math
import time
import zlib
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .. import box_space as bs
from .. import circle_space as cs
from .. import oracles as orc
from ..fixpoint import (IterationConfig, center_C, center_CC, iterate_involution, iterate_theorem1,
                        iterate_theorem2)
from ..group_action import (Action, BoxDomain, FiniteGroup, affine_closure, cyclic, dG, estimate_L,
                            estimate_map_L, f_a_map, kink_involution, lemma_bounded_check, orbit_stats,
                            permutation_map, random_isometry_action, rotation2d, uniform_lipschitz,
                            verify_action, verify_group)
from ..retraction import chain_check, holder_empirical, retraction_laws, selection_f
from ..tolerances import AUDIT_SLACK, CIRCLE_GRID_STEP, GEOM_TOL, GRID_STEP, HOMOMORPHISM_TOL
from .config import build_action
from .scenarios import load_scenario, piecewise_fixed_set, run_scenario

DEFAULT_SAMPLES = 10_000
# the center oracle enumerates a full planar lattice per case; a coarser step keeps it inside the budget
CENTER_GRID_STEP = 2e-3


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    violations: list = field(default_factory=list)
    max_slack: float = -math.inf
    seed: int = 0
    expect_violations: bool = False
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.violations) if self.expect_violations else not self.violations

    def check(self, lhs: float, rhs: float, inputs, slack: float = AUDIT_SLACK) -> bool:
        """Record one case of ``lhs <= rhs``; returns whether it held."""
        self.cases += 1
        gap = float(lhs) - float(rhs)
        self.max_slack = max(self.max_slack, gap)
        if gap > slack:
            self.violations.append({"inputs": inputs, "lhs": float(lhs), "rhs": float(rhs)})
            return False
        return True

    def report_line(self) -> str:
        slack = "" if self.max_slack == -math.inf else format(self.max_slack, ".6g")
        return f"{self.name},{self.cases},{len(self.violations)},{slack},{self.seed}"


@dataclass
class Context:
    seed: int
    samples: int
    _pool: list[Action] | None = None

    def rng(self, name: str) -> np.random.Generator:
        return np.random.default_rng([self.seed, zlib.crc32(name.encode())])

    def count(self, divisor: int = 1, floor: int = 1) -> int:
        return max(self.samples // divisor, floor)

    def isometry_pool(self) -> list[Action]:
        """100 random signed-permutation groups, d <= 6, |G| <= 48 (shared by several suites)."""
        if self._pool is None:
            rng = self.rng("isometry_pool")
            self._pool = [random_isometry_action(rng, max_dim=6, max_order=48) for _ in range(100)]
        return self._pool


def _lists(*arrays):
    return [np.asarray(a).tolist() for a in arrays]


def _random_set(rng: np.random.Generator, d: int, n: int | None = None) -> np.ndarray:
    n = int(rng.integers(1, 9)) if n is None else n
    return rng.uniform(-1, 1, size=(n, d)) * rng.choice([0.1, 1.0, 3.0])


def _random_pair(rng: np.random.Generator, d: int):
    k = _random_set(rng, d)
    if rng.random() < 0.5:
        m = _random_set(rng, d)
    else:
        # a perturbed copy, possibly with points dropped or added
        m = k + rng.normal(scale=rng.choice([1e-3, 0.1, 0.5]), size=k.shape)
        if len(m) > 1 and rng.random() < 0.3:
            m = m[: int(rng.integers(1, len(m)))]
        if rng.random() < 0.3:
            m = np.vstack([m, _random_set(rng, d, 1)])
    return k, m


def _random_box(rng: np.random.Generator, d: int) -> bs.Box:
    a, b = rng.uniform(-2, 2, size=(2, d))
    return bs.Box(np.minimum(a, b), np.maximum(a, b))


# -- box geometry -----------------------------------------------------------


def suite_box_metric(ctx: Context) -> list[SuiteResult]:
    rng = ctx.rng("box_metric")
    res = SuiteResult("box_metric_axioms", seed=ctx.seed)
    n = ctx.count()
    for d in range(1, 7):
        x, y, z = rng.uniform(-5, 5, size=(3, n // 6 + 1, d))
        dxy = np.max(np.abs(x - y), axis=1)
        dyx = np.max(np.abs(y - x), axis=1)
        dxz = np.max(np.abs(x - z), axis=1)
        dyz = np.max(np.abs(y - z), axis=1)
        dxx = np.max(np.abs(x - x), axis=1)
        for i in range(len(x)):
            inp = _lists(x[i], y[i], z[i])
            res.check(dxz[i], dxy[i] + dyz[i], inp, 1e-12)
            res.check(abs(dxy[i] - dyx[i]), 0, inp, 1e-12)
            res.check(dxx[i], 0, inp, 0)
            res.check(-dxy[i], 0, inp, 0)
            if dxy[i] == 0 and not np.array_equal(x[i], y[i]):
                res.violations.append({"inputs": inp, "lhs": 0.0, "rhs": 0.0})
        res.check(abs(bs.linf_dist(x[0], y[0]) - dxy[0]), 0, _lists(x[0], y[0]), 0)
    return [res]


def suite_box_hyperconvexity(ctx: Context) -> list[SuiteResult]:
    rng = ctx.rng("box_hyperconvexity")
    res = SuiteResult("box_hyperconvexity", seed=ctx.seed)
    for _ in range(ctx.count()):
        d = int(rng.integers(1, 7))
        k = int(rng.integers(2, 6))
        c = rng.uniform(-2, 2, size=(k, d))
        r = rng.uniform(0, 1, size=k)
        dist = bs.pairwise_linf(c, c)
        # smallest uniform increase of the radii that makes the family pairwise intersecting
        need = np.max((dist - r[:, None] - r[None, :])[~np.eye(k, dtype=bool)]) / 2
        r = r + max(need, 0.0)
        assert bs.hyperconvex_family_ok(c, r, tol=1e-12)
        box = bs.intersect(bs.ball(ci, ri) for ci, ri in zip(c, r))
        # empty counts as lhs 1 > rhs 0
        res.check(0.0 if box is not None else 1.0, 0.0, _lists(c, r), 0)
    return [res]


def suite_midpoint_lipschitz(ctx: Context) -> list[SuiteResult]:
    rng = ctx.rng("midpoint_lipschitz")
    res = SuiteResult("midpoint_lipschitz", seed=ctx.seed)
    for _ in range(ctx.count()):
        d = int(rng.integers(1, 7))
        a, b = _random_box(rng, d), _random_box(rng, d)
        res.check(bs.linf_dist(bs.midpoint(a), bs.midpoint(b)), bs.box_hausdorff(a, b),
                  _lists(a.lo, a.hi, b.lo, b.hi), 1e-12)
    return [res]


def suite_box_oracles(ctx: Context) -> list[SuiteResult]:
    rng = ctx.rng("box_oracles")
    h = GRID_STEP
    haus = SuiteResult("box_hausdorff_oracle", seed=ctx.seed)
    for _ in range(ctx.count(10)):
        d = int(rng.integers(1, 4))
        side = {1: 2.0, 2: 0.25, 3: 0.04}[d]
        boxes = []
        for _ in range(2):
            lo = rng.uniform(-side, side, size=d)
            boxes.append(bs.Box(lo, lo + rng.uniform(0, side, size=d) * (rng.random(d) < 0.8)))
        a, b = boxes
        err = abs(bs.box_hausdorff(a, b) - orc.grid_box_hausdorff(a, b, h))
        haus.check(err, 2 * h, _lists(a.lo, a.hi, b.lo, b.hi), 0)
    cheb = SuiteResult("chebyshev_oracle", seed=ctx.seed)
    for _ in range(ctx.count(100)):
        d = int(rng.integers(1, 3))
        k = rng.uniform(-1, 1, size=(int(rng.integers(1, 7)), d)) * {1: 1.0, 2: 0.12}[d]
        r, c = bs.chebyshev(k)
        rg, cg = orc.grid_chebyshev(k, h, radius_hint=r)
        inp = _lists(k)
        cheb.check(abs(r - rg), 2 * h, inp, 0)
        cheb.check(bs.box_hausdorff(c, cg), 2 * h, inp, 0)
        cheb.check(abs(r - bs.diameter(k) / 2), 0, inp, 1e-12)
    return [haus, cheb]


def suite_lemmas_box(ctx: Context) -> list[SuiteResult]:
    rng = ctx.rng("lemmas_box")
    rad = SuiteResult("lemma_radius", seed=ctx.seed)
    cen = SuiteResult("lemma_center", seed=ctx.seed)
    est = SuiteResult("corollary_est", seed=ctx.seed)
    for _ in range(ctx.count()):
        d = int(rng.integers(1, 7))
        k, m = _random_pair(rng, d)
        rk, ck = bs.chebyshev(k)
        rm, cm = bs.chebyshev(m)
        dkm = bs.set_hausdorff(k, m)
        dc = bs.box_hausdorff(ck, cm)
        inp = _lists(k, m)
        rad.check(abs(rk - rm), dkm, inp)
        cen.check(dc, dkm + abs(rk - rm), inp)
        est.check(dc, 2 * dkm, inp)
    # the sharpness pair attains the bound exactly
    k, m = np.array([[0.0, 0.0]]), np.array([[-1.0, 1.0], [1.0, 1.0]])
    dc = bs.box_hausdorff(bs.chebyshev(k)[1], bs.chebyshev(m)[1])
    est.check(abs(dc - 2 * bs.set_hausdorff(k, m)), 0, _lists(k, m), 1e-12)
    return [rad, cen, est]


# -- circle geometry --------------------------------------------------------


def suite_circle(ctx: Context) -> list[SuiteResult]:
    rng = ctx.rng("circle")
    metric = SuiteResult("circle_metric_axioms", seed=ctx.seed)
    x, y, z = rng.uniform(0, cs.TWO_PI, size=(3, ctx.count()))
    dxy, dyx = cs.circle_dist_array(x, y), cs.circle_dist_array(y, x)
    dxz, dyz = cs.circle_dist_array(x, z), cs.circle_dist_array(y, z)
    for i in range(len(x)):
        inp = [x[i], y[i], z[i]]
        metric.check(dxz[i], dxy[i] + dyz[i], inp, 1e-12)
        metric.check(abs(dxy[i] - dyx[i]), 0, inp, 1e-12)
        metric.check(dxy[i], math.pi, inp, 1e-15)
        metric.check(cs.circle_dist_array(x[i], x[i]), 0, inp, 0)

    rad = SuiteResult("circle_lemma_radius", seed=ctx.seed)
    sandwich = SuiteResult("circle_radius_sandwich", seed=ctx.seed)
    cen = SuiteResult("circle_lemma_center", seed=ctx.seed, expect_violations=True)
    # the documented counterexample goes first, so it is the reported witness
    eps = 0.1
    k, m = [0.0, math.pi], [0.0, math.pi - eps]
    rk, ck = cs.circle_chebyshev(k)
    rm, cm = cs.circle_chebyshev(m)
    cen.check(cs.arcset_hausdorff(ck, cm), cs.circle_set_hausdorff(k, m) + abs(rk - rm),
              {"K": k, "L": m, "eps": eps})
    for _ in range(ctx.count(10)):
        k = rng.uniform(0, cs.TWO_PI, size=int(rng.integers(1, 6)))
        m = np.mod(k + rng.normal(scale=rng.choice([1e-3, 0.1, 1.0]), size=k.size), cs.TWO_PI)
        rk, ck = cs.circle_chebyshev(k)
        rm, cm = cs.circle_chebyshev(m)
        dkm = cs.circle_set_hausdorff(k, m)
        inp = _lists(k, m)
        rad.check(abs(rk - rm), dkm, inp)
        cen.check(cs.arcset_hausdorff(ck, cm), dkm + abs(rk - rm), inp)
        delta = cs.circle_diameter(k)
        sandwich.check(delta / 2, rk, inp)
        sandwich.check(rk, 2 * delta / 2, inp)

    exact = SuiteResult("circle_counterexample", seed=ctx.seed)
    k, m = [0.0, math.pi], [0.0, math.pi - eps]
    dkm = cs.circle_set_hausdorff(k, m)
    dcc = cs.arcset_hausdorff(cs.circle_chebyshev(k)[1], cs.circle_chebyshev(m)[1])
    exact.check(abs(dkm - eps), 0, {"D(K,L)": dkm}, 1e-9)
    exact.check(abs(dcc - (math.pi - eps / 2)), 0, {"D(C(K),C(L))": dcc}, 1e-9)

    oracle = SuiteResult("circle_chebyshev_oracle", seed=ctx.seed)
    step = CIRCLE_GRID_STEP
    for _ in range(ctx.count(100)):
        k = rng.uniform(0, cs.TWO_PI, size=int(rng.integers(1, 7)))
        r, center = cs.circle_chebyshev(k)
        rg, pts = orc.grid_circle_chebyshev(k, step)
        inp = _lists(k)
        oracle.check(abs(r - rg), 2 * step, inp, 0)
        # every grid near-minimizer lies close to the exact center set and vice versa
        far = max(cs.dist_to_arcset(float(p), center) for p in pts)
        oracle.check(far, 2 * step, inp, 0)
        back = max(float(np.min(cs.circle_dist_array(pts, e))) for e in center.endpoints())
        oracle.check(back, 2 * step, inp, 0)
    return [metric, rad, cen, sandwich, exact, oracle]


def suite_lambda(ctx: Context) -> list[SuiteResult]:
    families = cs.sample_ball_families(ctx.count(10), seed=ctx.seed)
    out = []
    for lam, expect_bad in ((2.0, False), (1.0, True)):
        rep = cs.check_lambda_hyperconvex(families, lam, seed=ctx.seed)
        res = SuiteResult(f"lambda_hyperconvex_{lam:g}", seed=ctx.seed, expect_violations=expect_bad)
        res.cases = rep.cases + len(rep.malformed)
        res.max_slack = 0.0 if rep.violations else -1.0
        res.violations = [{"inputs": {"centers": f.centers, "radii": f.radii, "domain": f.domain.intervals()}}
                          for f in rep.witnesses.values()]
        if not expect_bad:
            res.violations += [{"malformed": m} for m in rep.malformed]
        out.append(res)
    return out


# -- groups and actions -----------------------------------------------------


def _scenario_actions() -> list[Action]:
    return [build_action(load_scenario(k)) for k in ("S1", "S2", "S3", "S6a", "S6b")]


def _swap_action() -> Action:
    swap = permutation_map([1, 0, 2])
    return Action(cyclic(2), (permutation_map([0, 1, 2]), swap), BoxDomain.cube(3, 5.0), "swap")


def suite_groups(ctx: Context) -> list[SuiteResult]:
    res = SuiteResult("group_axioms", seed=ctx.seed)
    groups = [cyclic(n) for n in range(1, 13)] + [a.group for a in _scenario_actions()]
    groups += [a.group for a in ctx.isometry_pool()[:20]]
    for g in groups:
        rep = verify_group(g)
        res.check(0 if rep.valid else 1, 0, {"order": g.n, "triples": rep.associativity[:5]}, 0)
    bad = SuiteResult("group_corrupted_table", seed=ctx.seed, expect_violations=True)
    t = cyclic(4).cayley.copy()
    t[1, 1] = 3
    rep = verify_group(FiniteGroup(t, 0, (0, 3, 2, 1)))
    bad.cases = 1
    bad.max_slack = float(len(rep.associativity))
    bad.violations = [{"triple": tr} for tr in rep.associativity]
    return [res, bad]


def suite_actions(ctx: Context) -> list[SuiteResult]:
    rng = ctx.rng("actions")
    hom = SuiteResult("action_homomorphism", seed=ctx.seed)
    acts = _scenario_actions() + [_swap_action()] + ctx.isometry_pool()[:20]
    for act in acts:
        rep = verify_action(act, samples=ctx.count(10), seed=ctx.seed)
        hom.check(max(rep.max_deviation, rep.identity_deviation), 0, {"action": act.name, "worst": rep.worst},
                  HOMOMORPHISM_TOL)
    mism = SuiteResult("action_mismatched_maps", seed=ctx.seed, expect_violations=True)
    r = rotation2d(quarter_turns=1)
    swapped = Action(cyclic(4), (rotation2d(quarter_turns=0), r.compose(r), r, r.compose(r).compose(r)),
                     BoxDomain.cube(2), "mismatched")
    rep = verify_action(swapped, samples=100, seed=ctx.seed)
    mism.check(rep.max_deviation, 0, {"worst": rep.worst}, HOMOMORPHISM_TOL)

    box_acts = [a for a in acts if a.space == "box"]
    sand = SuiteResult("dG_sandwich", seed=ctx.seed)
    orb = SuiteResult("orbit_sandwich", seed=ctx.seed)
    bounded = SuiteResult("lemma_bounded", seed=ctx.seed)
    per = max(ctx.count() // len(box_acts), 1)
    for act in box_acts:
        L = max(uniform_lipschitz(act, seed=ctx.seed)[0], 1.0)
        xs = act.domain.sample(rng, per)
        ys = np.where(rng.random((per, 1)) < 0.5, xs + rng.normal(scale=1e-2, size=xs.shape),
                      act.domain.sample(rng, per))
        a_s = rng.integers(act.order, size=per)
        for i, (x, y, a) in enumerate(zip(xs, ys, a_s)):
            d = act.dist(x, y)
            g = dG(act, x, y)
            inp = {"action": act.name, "x": x.tolist(), "y": y.tolist()}
            sand.check(d, g, inp)
            sand.check(g, L * d, inp)
            tx, ty = act.maps[a](x), act.maps[a](y)
            sand.check(abs(dG(act, tx, ty) - g), 0, {**inp, "a": int(a)})
            if i % 10 == 0:
                st = orbit_stats(act, x)
                orb.check(st.delta / 2, st.r, inp, 1e-12)
                orb.check(st.r, st.delta, inp, 1e-12)
                orb.check(abs(st.r - st.delta / 2), 0, inp, 1e-12)
                bounded.cases += 1
                if not lemma_bounded_check(act, x, y, L):
                    bounded.violations.append({"inputs": inp})
                dx = act.domain.diameter(act.orbit(x))
                dy = act.domain.diameter(act.orbit(y))
                bounded.max_slack = max(bounded.max_slack, dy - (2 * L * d + dx))
    return [hom, mism, sand, orb, bounded]


# -- iterations -------------------------------------------------------------


def _audit_trace(res: SuiteResult, trace, name: str, max_residual: float = 1e-8):
    inp = {"action": name, "x1": np.asarray(trace.steps[0].x).tolist()}
    for s in trace.steps:
        if s.ratio is not None:
            res.check(s.ratio, trace.bound, {**inp, "step": s.n})
        if s.step_dist is not None:
            res.check(s.step_dist, trace.lam * s.delta / 2, {**inp, "step": s.n}, 1e-12)
    res.check(0 if trace.outcome == "converged" else 1, 0, {**inp, "outcome": trace.outcome}, 0)
    res.check(trace.final_residual, max_residual, inp, 0)
    res.check(0 if trace.limit_audit_ok else 1, 0, {**inp, "audit": "limit"}, 0)


def suite_theorem1(ctx: Context) -> list[SuiteResult]:
    rng = ctx.rng("theorem1")
    res = SuiteResult("theorem1_contraction", seed=ctx.seed)
    for key in ("S1", "S2"):
        cfg = load_scenario(key)
        _audit_trace(res, run_scenario(cfg, write=False).trace, key)
    for act in ctx.isometry_pool():
        tr = iterate_theorem1(act, IterationConfig(act.domain.sample(rng)), seed=ctx.seed)
        _audit_trace(res, tr, act.name)
    return [res]


def suite_theorem2(ctx: Context) -> list[SuiteResult]:
    rng = ctx.rng("theorem2")
    res = SuiteResult("theorem2_contraction", seed=ctx.seed)
    red = SuiteResult("theorem2_reduction", seed=ctx.seed)
    for act in ctx.isometry_pool()[:30]:
        x1 = act.domain.sample(rng)
        tr = iterate_theorem2(act, IterationConfig(x1, lam=1.2, mode="theorem2"), seed=ctx.seed)
        _audit_trace(res, tr, act.name)
        t1 = iterate_theorem1(act, IterationConfig(x1), seed=ctx.seed)
        t2 = iterate_theorem2(act, IterationConfig(x1, mode="theorem2"), seed=ctx.seed)
        same = len(t1.steps) == len(t2.steps) and all(
            np.array_equal(a.x, b.x) for a, b in zip(t1.steps, t2.steps))
        red.check(0 if same else 1, 0, {"action": act.name, "x1": x1.tolist()}, 0)
    return [res, red]


def suite_theorem3(ctx: Context) -> list[SuiteResult]:
    rng = ctx.rng("theorem3")
    res = SuiteResult("theorem3_contraction", seed=ctx.seed)
    domain = BoxDomain(np.array([0.0]), np.array([1.0]))
    for c in [0.4] + list(rng.uniform(0.34, 0.66, size=max(ctx.count(200), 10))):
        t = kink_involution(float(c))
        x1 = np.array([0.0]) if c == 0.4 else rng.uniform(0, 1, size=1)
        tr = iterate_involution(t, IterationConfig(x1, mode="theorem3"), domain, seed=ctx.seed)
        _audit_trace(res, tr, f"involution c={c!r}")
        res.check(abs(float(tr.final_point[0]) - c), 0, {"c": float(c)}, 1e-8)
    return [res]


def suite_centers_oracle(ctx: Context) -> list[SuiteResult]:
    rng = ctx.rng("centers_oracle")
    res = SuiteResult("centers_oracle", seed=ctx.seed)
    h = CENTER_GRID_STEP
    n = 0
    while n < ctx.count(100):
        act = random_isometry_action(rng, max_dim=2, spread=0.3)
        if act.domain.dim > 2:
            continue
        n += 1
        base = act.orbit(act.domain.sample(rng)).mean(axis=0)
        x = base + rng.uniform(-0.4, 0.4, size=act.domain.dim)
        r, cg, ccg = orc.grid_centers(act.orbit(x), h)
        inp = {"action": act.name, "x": x.tolist()}
        res.check(abs(r - bs.chebyshev(act.orbit(x))[0]), 2 * h, inp, 0)
        res.check(bs.box_hausdorff(center_C(act, x), cg), 2 * h, inp, 0)
        res.check(bs.box_hausdorff(center_CC(act, x), ccg), 2 * h, inp, 0)
    return [res]


# -- retraction -------------------------------------------------------------


def _retraction_actions(ctx: Context) -> list[Action]:
    return [build_action(load_scenario("S1")), build_action(load_scenario("S2")), _swap_action()] \
        + ctx.isometry_pool()[:5]


def suite_chain(ctx: Context) -> list[SuiteResult]:
    rng = ctx.rng("chain")
    res = SuiteResult("chain_constants", seed=ctx.seed)
    sel = SuiteResult("selection_lipschitz", seed=ctx.seed)
    acts = _retraction_actions(ctx)
    per = max(ctx.count() // len(acts), 1)
    for act in acts:
        L = max(uniform_lipschitz(act, seed=ctx.seed)[0], 1.0)
        xs = act.domain.sample(rng, per)
        ys = np.where(rng.random((per, 1)) < 0.5, xs + rng.normal(scale=1e-2, size=xs.shape),
                      act.domain.sample(rng, per))
        rep = chain_check(act, zip(xs, ys), L)
        res.cases += rep.pairs * 3
        res.violations += [{"action": act.name, "violation": v} for v in rep.violations]
        res.max_slack = max(res.max_slack, rep.k_orbit - L, rep.k_center - 2 * L, rep.k_double_center - 4 * L)
        for x, y in list(zip(xs, ys))[: max(per // 10, 1)]:
            fx, fy = selection_f(act, x), selection_f(act, y)
            inp = {"action": act.name, "x": x.tolist(), "y": y.tolist()}
            sel.check(bs.dist_to_box(fx, center_CC(act, x)), 0, inp, GEOM_TOL)
            d = act.dist(x, y)
            sel.check(act.dist(fx, fy), 4 * L * d, inp)
            sel.check(act.dist(fx, fy), bs.box_hausdorff(center_CC(act, x), center_CC(act, y)), inp, 1e-12)
    # the sharpness pair as orbits of the reflection (x1, x2) -> (-x1, x2)
    refl = Action(cyclic(2), (permutation_map([0, 1]), permutation_map([0, 1], [-1, 1])), BoxDomain.cube(2), "refl")
    x, y = np.array([0.0, 0.0]), np.array([1.0, 1.0])
    d_c = bs.box_hausdorff(center_C(refl, x), center_C(refl, y))
    d_o = bs.set_hausdorff(refl.orbit(x), refl.orbit(y))
    sharp = SuiteResult("chain_sharpness", seed=ctx.seed)
    sharp.check(abs(d_c - 2 * d_o), 0, {"x": x.tolist(), "y": y.tolist(), "D(C)": d_c, "D(O)": d_o}, 1e-12)
    return [res, sel, sharp]


def suite_retraction(ctx: Context) -> list[SuiteResult]:
    rng = ctx.rng("retraction")
    laws = SuiteResult("retraction_laws", seed=ctx.seed)
    hold = SuiteResult("holder_decades", seed=ctx.seed)
    for act in _retraction_actions(ctx):
        L = max(uniform_lipschitz(act, seed=ctx.seed)[0], 1.0)
        pts = act.domain.sample(rng, ctx.count(100))
        rep = retraction_laws(act, pts, L)
        inp = {"action": act.name}
        laws.check(rep.max_idempotence, 0, inp, 1e-8)
        laws.check(rep.max_invariance, 0, inp, 1e-8)
        laws.check(rep.max_fixed_identity, 0, inp, 1e-8)
        laws.check(rep.max_contraction_excess, 0, inp, AUDIT_SLACK)
        if act.name in ("S1", "S2", "swap"):
            h = holder_empirical(act, pairs_per_decade=25, seed=ctx.seed, L=L)
            hold.check(max(h.max_ratio), 2 * h.max_ratio[0], {"action": act.name, "max_ratio": h.max_ratio})
    return [laws, hold]


# -- scenario-level checks --------------------------------------------------


def suite_scenarios(ctx: Context) -> list[SuiteResult]:
    fa = SuiteResult("f_a_lipschitz", seed=ctx.seed)
    for a in (0.1, 0.25, 0.5):
        m = f_a_map(a)
        dom = BoxDomain.cube(4)
        est = estimate_map_L(m, dom, samples=ctx.count(), seed=ctx.seed)
        fa.check(abs(est - (1 + a)), 0, {"a": a, "sampled": est}, 1e-6)
        pts = piecewise_fixed_set(m, dom.lo, dom.hi)
        dist = bs.pairwise_linf(pts, pts)[~np.eye(len(pts), dtype=bool)]
        fa.check(abs(dist.min() - 2), 0, {"a": a, "fixed_points": len(pts)}, 1e-12)
    neg = SuiteResult("scenario_expectations", seed=ctx.seed)
    for key in ("S1", "S2", "S3", "S4", "S5", "S6a", "S6b"):
        r = run_scenario(load_scenario(key), write=False)
        neg.check(0 if r.ok else 1, 0, {"scenario": key, "failed": [c.name for c in r.checks if not c.ok]}, 0)
    return [fa, neg]


SUITES: list[Callable[[Context], list[SuiteResult]]] = [
    suite_box_metric, suite_box_hyperconvexity, suite_midpoint_lipschitz, suite_box_oracles,
    suite_lemmas_box, suite_circle, suite_lambda, suite_groups, suite_actions, suite_theorem1,
    suite_theorem2, suite_theorem3, suite_centers_oracle, suite_chain, suite_retraction, suite_scenarios,
]


def verify_all(seed: int = 0, samples: int = DEFAULT_SAMPLES, suites=None) -> list[SuiteResult]:
    """Run every property suite; ``samples`` sets the size of the largest suites."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    ctx = Context(seed, samples)
    out = []
    for fn in suites or SUITES:
        t = time.perf_counter()
        results = fn(ctx)
        dt = time.perf_counter() - t
        for r in results:
            r.seconds = dt / len(results)
        out.extend(results)
    return out


def report(results: list[SuiteResult]) -> str:
    lines = ["name,cases,violations,max_slack,seed"] + [r.report_line() for r in results]
    return "\n".join(lines) + "\n"
