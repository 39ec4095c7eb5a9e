"""Shipped scenario catalog and the scenario runner.

``run_scenario`` dispatches on the iteration mode, checks the run against the
expectations written in the config and writes three files to the output
directory: a CSV with the per-step data, ``summary.txt`` and ``config.ini``
(the config echo with all defaults filled in).
"""
from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import box_space as bs
from ..fixpoint import IterationConfig, IterationTrace, fmt, fmt_point, iterate, iterate_involution
from ..group_action import (AffineMap, PiecewiseLinearMap, WordBall, compose, estimate_map_L,
                            verify_action, word_ball_orbit)
from ..tolerances import GEOM_TOL, HOMOMORPHISM_TOL
from .config import ScenarioConfig, build_action, build_domain, build_maps, echo_config, load_config

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"

SCENARIOS = {
    "S1": "s1_isometry.ini",
    "S2": "s2_cyclic_lipschitz.ini",
    "S3": "s3_involution.ini",
    "S4": "s4_f_a.ini",
    "S5": "s5_word_ball.ini",
    "S6a": "s6a_circle_rotation.ini",
    "S6b": "s6b_circle_antipodal.ini",
}

MAX_FIXED_POINTS = 100_000


def scenario_path(name: str) -> Path:
    try:
        return SCENARIO_DIR / SCENARIOS[name]
    except KeyError:
        raise KeyError(f"unknown scenario {name!r}; known: {', '.join(SCENARIOS)}") from None


def load_scenario(name: str) -> ScenarioConfig:
    return load_config(scenario_path(name))


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class ScenarioResult:
    name: str
    mode: str
    outcome: str
    checks: list[Check]
    summary: dict[str, str]
    csv_name: str
    csv_text: str
    notes: list[str] = field(default_factory=list)
    trace: IterationTrace | None = None
    word_ball: WordBall | None = None
    fixed_points: np.ndarray | None = None
    files: dict[str, Path] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def summary_text(self) -> str:
        lines = [f"{k} = {v}" for k, v in self.summary.items()]
        lines += [f"check.{c.name} = {'pass' if c.ok else 'FAIL'}" + (f" ({c.detail})" if c.detail else "")
                  for c in self.checks]
        lines += [f"note = {n}" for n in self.notes]
        lines.append(f"result = {'pass' if self.ok else 'FAIL'}")
        return "\n".join(lines) + "\n"


def run_scenario(cfg: ScenarioConfig, out_dir=None, write: bool = True) -> ScenarioResult:
    mode = cfg.iteration.mode
    try:
        if mode == "word_ball":
            res = _run_word_ball(cfg)
        elif mode == "fixed_set":
            res = _run_fixed_set(cfg)
        else:
            res = _run_iteration(cfg)
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        raise RuntimeError(f"scenario {cfg.name} ({cfg.source}): {exc}") from exc
    res.summary = {"scenario": cfg.name, "description": cfg.description, **res.summary}
    if write:
        out = Path(out_dir or cfg.out_dir or Path("out") / cfg.name)
        out.mkdir(parents=True, exist_ok=True)
        files = {res.csv_name: res.csv_text, "summary.txt": res.summary_text(), "config.ini": echo_config(cfg)}
        for fname, text in files.items():
            (out / fname).write_text(text)
            res.files[fname] = out / fname
    return res


# -- iteration scenarios ----------------------------------------------------


def _run_iteration(cfg: ScenarioConfig) -> ScenarioResult:
    it = cfg.iteration
    x1 = it.x1[0] if cfg.space.kind == "circle" else np.array(it.x1)
    icfg = IterationConfig(x1, tol=it.tol, max_iter=it.max_iter, lam=it.lam, mode=it.mode)
    checks = []
    if cfg.group.kind == "single":
        domain = build_domain(cfg)
        trace = iterate_involution(build_maps(cfg)["map"], icfg, domain, seed=cfg.seed)
    else:
        act = build_action(cfg)
        rep = verify_action(act, samples=cfg.samples, seed=cfg.seed)
        checks.append(Check("homomorphism", rep.passed,
                            f"max deviation {rep.max_deviation:.3g}, identity {rep.identity_deviation:.3g}"))
        trace = iterate(act, icfg, seed=cfg.seed)

    checks.append(Check("outcome", trace.outcome == it.expect, f"{trace.outcome}, expected {it.expect}"))
    if trace.outcome == "converged":
        checks.append(Check("residual", trace.final_residual <= it.tol,
                            f"{trace.final_residual:.3g} <= tol {it.tol:.3g}"))
        checks.append(Check("limit_audit", trace.limit_audit_ok))
    if trace.hypothesis_ok and trace.L_exact:
        checks.append(Check("contraction_audit", not trace.audit_failures,
                            f"{len(trace.audit_failures)} failures, bound {trace.bound:.6g}"))
    if it.min_residual is not None:
        checks.append(Check("min_residual", trace.final_residual >= it.min_residual,
                            f"{trace.final_residual!r} >= {it.min_residual!r}"))
    summary = trace.summary()
    ratios = trace.ratios
    summary["max_ratio"] = fmt(max(ratios)) if ratios else ""
    summary["stalled"] = str(trace.stalled).lower()
    notes = list(trace.audit_failures)
    if trace.stalled:
        notes.append("the selected point did not move; the run stops because every later step repeats it")
    return ScenarioResult(cfg.name, it.mode, trace.outcome, checks, summary, "trace.csv", trace.to_csv(),
                          notes, trace=trace)


# -- word balls -------------------------------------------------------------


def _describe_affine(m: AffineMap, max_period: int = 12) -> str:
    if np.allclose(m.matrix, np.eye(m.dim), atol=1e-12):
        if np.allclose(m.offset, 0, atol=1e-12):
            return "the identity"
        return f"the translation by ({', '.join(fmt(v) for v in m.offset + 0.0)}), orbits unbounded"
    p = m
    for k in range(2, max_period + 1):
        p = compose(m, p)
        if np.allclose(p.matrix, np.eye(m.dim), atol=1e-12) and np.allclose(p.offset, 0, atol=1e-9):
            return f"periodic with period {k}, orbits bounded"
    return "not periodic up to order 12"


def _run_word_ball(cfg: ScenarioConfig) -> ScenarioResult:
    it = cfg.iteration
    gens = list(build_maps(cfg).values())
    wb = word_ball_orbit(gens, cfg.group.max_len, np.array(it.x1))
    diam = wb.diameters
    checks = [Check("nondecreasing", all(b >= a - GEOM_TOL for a, b in zip(diam, diam[1:])))]
    if it.growth_rate > 0:
        bad = [n for n in range(2, len(diam), 2) if diam[n] < it.growth_rate * n - GEOM_TOL]
        checks.append(Check("growth", not bad,
                            f"diameter >= {it.growth_rate:g} * n at every even length n <= {cfg.group.max_len}"
                            + (f"; fails at {bad}" if bad else "")))
    notes = []
    if len(gens) >= 2 and all(isinstance(g, AffineMap) for g in gens[:2]):
        a, b = gens[0], gens[1]
        notes.append(f"g0 o g1 is {_describe_affine(a.compose(b))}")
        notes.append(f"g0 o g1^-1 is {_describe_affine(a.compose(b.inverse()))}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["length", "points", "diameter"])
    for n, (pts, d) in enumerate(zip(wb.points, diam)):
        w.writerow([n, len(pts), fmt(d)])
    summary = {
        "mode": "word_ball",
        "outcome": "ok",
        "generators": str(len(gens)),
        "max_len": str(cfg.group.max_len),
        "distinct_points": str(len(wb.points[-1])),
        "final_diameter": fmt(diam[-1]),
    }
    return ScenarioResult(cfg.name, "word_ball", "ok", checks, summary, "word_ball.csv", buf.getvalue(),
                          notes, word_ball=wb)


# -- fixed sets -------------------------------------------------------------


def piecewise_fixed_set(m: PiecewiseLinearMap, lo, hi) -> np.ndarray:
    """All fixed points of a coordinatewise map inside the box ``[lo, hi]``."""
    per_coord = []
    for i, (a, b) in enumerate(zip(lo, hi)):
        per_coord.append([t for t in m.coordinate_fixed_points(i) if a - GEOM_TOL <= t <= b + GEOM_TOL])
    count = int(np.prod([len(c) for c in per_coord]))
    if count > MAX_FIXED_POINTS:
        raise ValueError(f"fixed set has {count} points, more than {MAX_FIXED_POINTS}")
    if count == 0:
        return np.empty((0, len(lo)))
    return np.array(list(itertools.product(*per_coord)), dtype=float)


def _run_fixed_set(cfg: ScenarioConfig) -> ScenarioResult:
    it = cfg.iteration
    spec = cfg.maps["map"]
    m = build_maps(cfg)["map"]
    if not isinstance(m, PiecewiseLinearMap):
        raise ValueError("fixed_set mode supports coordinatewise piecewise-linear maps")
    domain = build_domain(cfg)
    pts = piecewise_fixed_set(m, cfg.space.lo, cfg.space.hi)
    checks = []
    res = float(np.max(np.abs(m(pts) - pts))) if len(pts) else 0.0
    checks.append(Check("fixed", res <= GEOM_TOL, f"max |T p - p| = {res:.3g} over {len(pts)} points"))
    min_d = float("nan")
    if len(pts) >= 2:
        d = bs.pairwise_linf(pts, pts)
        min_d = float(d[~np.eye(len(pts), dtype=bool)].min())
    if it.min_distance is not None:
        checks.append(Check("min_distance", min_d >= it.min_distance - GEOM_TOL,
                            f"{fmt(min_d)} >= {fmt(it.min_distance)}"))
    exact = m.exact_lipschitz()
    sampled = estimate_map_L(m, domain, cfg.samples, cfg.seed)
    checks.append(Check("lipschitz", sampled <= exact + 1e-6, f"sampled {fmt(sampled)} <= exact {fmt(exact)}"))
    if m.declared_L is not None:
        checks.append(Check("declared_L", abs(exact - m.declared_L) <= HOMOMORPHISM_TOL,
                            f"exact {fmt(exact)}, declared {fmt(m.declared_L)}"))
    notes = []
    if spec["kind"] == "f_a":
        notes.append(_f_a_note(m, float(spec["a"])))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"x{i}" for i in range(cfg.space.dim)])
    for p in pts:
        w.writerow([fmt(v) for v in p])
    summary = {
        "mode": "fixed_set",
        "outcome": "ok",
        "fixed_points": str(len(pts)),
        "coordinate_values": fmt_point(m.coordinate_fixed_points(0)),
        "min_pairwise_distance": fmt(min_d),
        "L_exact": fmt(exact),
        "L_sampled": fmt(sampled),
        "seed": str(cfg.seed),
    }
    return ScenarioResult(cfg.name, "fixed_set", "ok", checks, summary, "fixed_set.csv", buf.getvalue(),
                          notes, fixed_points=pts)


def _f_a_note(m: PiecewiseLinearMap, a: float) -> str:
    vals = m.coordinate_fixed_points(0)
    f0 = float(m(np.array([0.0]))[0])
    return (f"discrepancy: the fixed set is the product of {{{', '.join(fmt(v) for v in vals)}}} per coordinate, "
            f"not of {{0, 1}}: f_a(0) = {fmt(f0)} != 0; (1+a)t + a = t gives t = -1 and (1-a)t + a = t gives t = 1 "
            f"(a = {fmt(a)})")
