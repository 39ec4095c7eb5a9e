"""Selection ``f(x) in CC(x)``, the limit retraction ``R = lim f^n`` and its audits.

On boxes the midpoint of ``CC(x)`` is a computable selection.  Since the
midpoint map is 1-Lipschitz for the box Hausdorff distance, ``f`` inherits
whatever Lipschitz bound ``x -> CC(x)`` has; the generic ``4L`` chain is
still audited as stated.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import box_space as bs
from .fixpoint import IterationConfig, center_C, center_CC, fmt, iterate_theorem1, residual
from .group_action import Action, uniform_lipschitz
from .tolerances import AUDIT_SLACK, ITER_TOL, MAX_ITER


class RetractionError(RuntimeError):
    pass


def selection_f(act: Action, x) -> np.ndarray:
    cc = center_CC(act, x)
    if cc is None:
        raise bs.EmptySetError(f"CC(x) is empty at x = {x}")
    return bs.midpoint(cc)


def retract_trace(act: Action, x, tol: float = ITER_TOL, max_iter: int = MAX_ITER):
    return iterate_theorem1(act, IterationConfig(x, tol=tol, max_iter=max_iter))


def retract_R(act: Action, x, tol: float = ITER_TOL, max_iter: int = MAX_ITER) -> np.ndarray:
    """Iterate ``f`` from ``x`` until the orbit diameter drops below ``tol``."""
    trace = retract_trace(act, x, tol, max_iter)
    if trace.outcome != "converged":
        raise RetractionError(f"f-iteration from {x} ended with {trace.outcome}")
    return trace.final_point


@dataclass
class ChainReport:
    pairs: int = 0
    L: float = 1.0
    # largest observed D(.,.) / d(x, y) for orbits, centers, double centers
    k_orbit: float = 0.0
    k_center: float = 0.0
    k_double_center: float = 0.0
    violations: list[tuple] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def chain_distances(act: Action, x, y) -> tuple[float, float, float]:
    d_o = bs.set_hausdorff(act.orbit(x), act.orbit(y))
    d_c = bs.box_hausdorff(center_C(act, x), center_C(act, y))
    d_cc = bs.box_hausdorff(center_CC(act, x), center_CC(act, y))
    return d_o, d_c, d_cc


def chain_check(act: Action, pairs, L: float | None = None, slack: float = AUDIT_SLACK) -> ChainReport:
    """Check ``D(O) <= L d``, ``D(C) <= 2L d`` and ``D(CC) <= 4L d`` on each pair."""
    if L is None:
        L = max(uniform_lipschitz(act)[0], 1.0)
    rep = ChainReport(L=L)
    for x, y in pairs:
        d = act.dist(x, y)
        d_o, d_c, d_cc = chain_distances(act, x, y)
        rep.pairs += 1
        for name, val, k in (("orbit", d_o, L), ("center", d_c, 2 * L), ("double_center", d_cc, 4 * L)):
            if val > k * d + slack:
                rep.violations.append((name, np.asarray(x).tolist(), np.asarray(y).tolist(), val, k * d))
        if d > 0:
            rep.k_orbit = max(rep.k_orbit, d_o / d)
            rep.k_center = max(rep.k_center, d_c / d)
            rep.k_double_center = max(rep.k_double_center, d_cc / d)
    return rep


def holder_alpha(L: float) -> float:
    """Hoelder exponent of ``R`` for a ``4L``-Lipschitz ``f`` contracting diameters by ``L^2/2``.

    Balancing ``d(Rx, Ry) <= 2 c g^n / (1 - g) + k^n d(x, y)`` over ``n`` with
    ``k = 4L``, ``g = L^2/2`` gives ``alpha = ln(1/g) / ln(k/g) = ln(2/L^2) / ln(8/L)``.
    """
    if not 1 <= L < math.sqrt(2):
        raise ValueError(f"L must lie in [1, sqrt(2)), got {L}")
    return math.log(2 / (L * L)) / math.log(8 / L)


@dataclass
class HolderRecord:
    scale: float
    d_xy: float
    d_R: float
    ratio: float


@dataclass
class HolderReport:
    alpha: float
    seed: int
    scales: list[float]
    max_ratio: list[float]
    records: list[HolderRecord]
    growth_limit: float = 2.0

    @property
    def passed(self) -> bool:
        first = self.max_ratio[0]
        return all(m <= self.growth_limit * first + AUDIT_SLACK for m in self.max_ratio)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["scale", "d_xy", "d_R", "ratio"])
        for r in self.records:
            w.writerow([fmt(r.scale), fmt(r.d_xy), fmt(r.d_R), fmt(r.ratio)])
        return buf.getvalue()


def holder_empirical(act: Action, pairs_per_decade: int = 25, seed: int = 0,
                     scales=(1.0, 1e-1, 1e-2, 1e-3), L: float | None = None) -> HolderReport:
    """Max of ``d(Rx, Ry) / d(x, y)^alpha`` per distance decade."""
    if L is None:
        L = max(uniform_lipschitz(act)[0], 1.0)
    alpha = holder_alpha(L)
    rng = np.random.default_rng(seed)
    records, maxima = [], []
    for s in scales:
        best = 0.0
        for _ in range(pairs_per_decade):
            x = act.domain.sample(rng)
            u = rng.uniform(-1, 1, size=x.shape)
            u /= np.max(np.abs(u))
            y = x + s * u
            d = act.dist(x, y)
            if d == 0:
                continue
            d_r = act.dist(retract_R(act, x), retract_R(act, y))
            ratio = d_r / d ** alpha
            records.append(HolderRecord(s, d, d_r, ratio))
            best = max(best, ratio)
        maxima.append(best)
    return HolderReport(alpha, seed, list(scales), maxima, records)


@dataclass
class RetractionLaws:
    samples: int
    max_idempotence: float  # d(R(R x), R x)
    max_invariance: float  # max_a d(T_a R x, R x)
    max_fixed_identity: float  # d(R p, p) for p already fixed
    max_contraction_excess: float  # max of delta(f^{n+1}x) - (L^2/2) delta(f^n x)
    iterations: list[int]


def orbit_mean(act: Action, x) -> np.ndarray:
    """Average of the orbit; a common fixed point whenever every ``T_a`` is affine."""
    return act.orbit(x).mean(axis=0)


def retraction_laws(act: Action, points, L: float | None = None) -> RetractionLaws:
    """Measure ``R o R = R``, ``T_a o R = R`` and ``R = id`` on ``Fix G`` over ``points``.

    Fixed points for the last law come from orbit means when the action is
    affine, so they do not depend on ``R`` itself.
    """
    if L is None:
        L = max(uniform_lipschitz(act)[0], 1.0)
    affine = act.is_affine
    idem = inv = fixed = excess = 0.0
    its = []
    for x in points:
        tr = retract_trace(act, x)
        if tr.outcome != "converged":
            raise RetractionError(f"f-iteration from {x} ended with {tr.outcome}")
        rx = tr.final_point
        its.append(len(tr.steps) - 1)
        for a, b in zip(tr.steps, tr.steps[1:]):
            excess = max(excess, b.delta - (L * L / 2) * a.delta)
        idem = max(idem, act.dist(retract_R(act, rx), rx))
        inv = max(inv, residual(act, rx))
        p = orbit_mean(act, x) if affine else rx
        fixed = max(fixed, act.dist(retract_R(act, p), p))
    return RetractionLaws(len(its), idem, inv, fixed, excess, its)
