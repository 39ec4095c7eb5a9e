import math

import numpy as np
import pytest

from hyperfix import box_space as bs
from hyperfix import circle_space as cs
from hyperfix import fixpoint as fp
from hyperfix import group_action as ga
from hyperfix import oracles as orc

PI = math.pi


def z4(center=(0.0, 0.0)):
    return ga.cyclic_action(ga.rotation2d(quarter_turns=1, center=center), 4, ga.BoxDomain.cube(2))


def swap3():
    return ga.cyclic_action(ga.permutation_map([1, 0, 2]), 2, ga.BoxDomain.cube(3, 5.0))


def s2():
    return ga.cyclic_action(ga.rotation2d(angle=2 * PI / 3), 3, ga.BoxDomain.cube(2, 2.0))


def circle_rotation():
    return ga.cyclic_action(ga.CircleIsometry("rotation", PI / 2), 4, ga.CircleDomain())


def antipodal_pair():
    return ga.cyclic_action(ga.CircleIsometry("rotation", PI), 2, ga.CircleDomain())


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError, match="tol"):
            fp.IterationConfig([0.0], tol=0)
        with pytest.raises(ValueError, match="lambda"):
            fp.IterationConfig([0.0], lam=0.5, mode="theorem2")
        with pytest.raises(ValueError, match="lambda must be 1"):
            fp.IterationConfig([0.0], lam=1.2)
        with pytest.raises(ValueError, match="mode"):
            fp.IterationConfig([0.0], mode="theorem9")


class TestCenters:
    def test_rotation(self):
        assert fp.center_C(z4(), [1, 0]) == bs.point_box([0, 0])
        assert fp.center_CC(z4(), [1, 0]) == bs.point_box([0, 0])

    def test_fixed_point(self):
        assert fp.center_C(z4(), [0, 0]) == bs.point_box([0, 0])
        assert fp.center_CC(z4(), [0, 0]) == bs.point_box([0, 0])

    def test_swap(self):
        # frozen from the grid oracle: a segment, then its midpoint after shrinking by r = 1
        assert fp.center_C(swap3(), [0, 2, 5]) == bs.Box([1, 1, 4], [1, 1, 6])
        assert fp.center_CC(swap3(), [0, 2, 5]) == bs.point_box([1, 1, 5])
        r, cg, ccg = orc.grid_centers(swap3().orbit([0, 2, 5]), 2e-2)
        assert r == 1
        assert bs.box_hausdorff(cg, fp.center_C(swap3(), [0, 2, 5])) <= 4e-2
        assert bs.box_hausdorff(ccg, fp.center_CC(swap3(), [0, 2, 5])) <= 4e-2

    def test_grid_oracle_random_actions(self):
        rng = np.random.default_rng(1)
        n = 0
        while n < 5:
            act = ga.random_isometry_action(rng, max_dim=2, spread=0.3)
            if act.domain.dim > 2:
                continue
            n += 1
            x = act.orbit(act.domain.sample(rng)).mean(axis=0) + rng.uniform(-0.3, 0.3, act.domain.dim)
            r, cg, ccg = orc.grid_centers(act.orbit(x), 2e-3)
            assert bs.box_hausdorff(fp.center_C(act, x), cg) <= 4e-3
            assert bs.box_hausdorff(fp.center_CC(act, x), ccg) <= 4e-3

    def test_center_points_have_radius_r(self):
        rng = np.random.default_rng(0)
        for _ in range(30):
            act = ga.random_isometry_action(rng, max_dim=4)
            x = act.domain.sample(rng)
            pts = act.orbit(x)
            r = bs.chebyshev(pts)[0]
            c = fp.center_C(act, x)
            for y in (c.lo, c.hi, bs.midpoint(c)):
                assert np.max(np.abs(pts - y)) == pytest.approx(r, abs=1e-12)

    def test_set_A_reduces_to_center(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            act = ga.random_isometry_action(rng, max_dim=4)
            x = act.domain.sample(rng)
            assert fp.set_A(act, x, 1.0) == fp.center_C(act, x)
            assert fp.set_AA(act, x, 1.0) == fp.center_CC(act, x)

    def test_set_A_circle(self):
        assert fp.set_A(antipodal_pair(), 0.0, 2.0).is_full
        a1 = fp.set_A(antipodal_pair(), 0.0, 1.0)
        assert sorted(a.start for a in a1.arcs) == pytest.approx([PI / 2, 3 * PI / 2])
        assert fp.set_AA(antipodal_pair(), 0.0, 2.0).is_full

    def test_set_AA_involution_orbit(self):
        act = ga.cyclic_action(ga.kink_involution(0.5), 2, ga.BoxDomain(np.array([0.0]), np.array([1.0])))
        assert fp.set_A(act, [0.0], 1.0) == bs.point_box([0.5])
        assert fp.set_AA(act, [0.0], 1.0) == bs.point_box([0.5])

    def test_residual(self):
        assert fp.residual(z4(), [0, 0]) == 0
        assert fp.residual(z4(), [1, 0]) == 2


class TestTheorem1:
    def test_rotation_one_step(self):
        tr = fp.iterate_theorem1(z4(), fp.IterationConfig([1.0, 0.0]))
        assert tr.outcome == "converged"
        assert tr.deltas == [2.0, 0.0]
        np.testing.assert_array_equal(tr.final_point, [0, 0])
        assert tr.final_residual == 0

    def test_negation(self):
        act = ga.cyclic_action(ga.AffineMap([[-1.0]], [0.0]), 2, ga.BoxDomain.cube(1))
        tr = fp.iterate_theorem1(act, fp.IterationConfig([0.8]))
        assert tr.deltas == [1.6, 0.0]
        assert tr.final_point[0] == 0

    def test_random_isometry_ratios(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            act = ga.random_isometry_action(rng)
            tr = fp.iterate_theorem1(act, fp.IterationConfig(act.domain.sample(rng)))
            assert tr.outcome == "converged" and tr.L == 1.0 and tr.L_exact
            assert all(q <= 0.5 + 1e-9 for q in tr.ratios)
            assert not tr.audit_failures and tr.limit_audit_ok
            assert tr.final_residual <= 1e-8

    def test_s2_lipschitz_rotation(self):
        tr = fp.iterate_theorem1(s2(), fp.IterationConfig([1.0, 0.3]))
        L = (1 + math.sqrt(3)) / 2
        assert tr.L == pytest.approx(L) and tr.hypothesis_ok
        assert tr.outcome == "converged"
        assert max(tr.ratios) <= L * L / 2 + 1e-9
        assert all(s.step_dist <= s.delta / 2 + 1e-12 for s in tr.steps[:-1])

    def test_iterate_group_alias(self):
        assert fp.iterate_group is fp.iterate_theorem1

    def test_csv(self):
        tr = fp.iterate_theorem1(z4((0.5, 0.0)), fp.IterationConfig([1.5, 1.0]))
        lines = tr.to_csv().splitlines()
        assert lines[0] == "step,delta,r,step_dist,ratio,residual"
        assert len(lines) == len(tr.steps) + 1
        assert lines[1].split(",")[1] == format(tr.steps[0].delta, ".17g")


class TestTheorem2:
    def test_lambda_one_matches_theorem1(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            act = ga.random_isometry_action(rng)
            x1 = act.domain.sample(rng)
            a = fp.iterate_theorem1(act, fp.IterationConfig(x1))
            b = fp.iterate_theorem2(act, fp.IterationConfig(x1, mode="theorem2"))
            assert len(a.steps) == len(b.steps)
            for s, t in zip(a.steps, b.steps):
                np.testing.assert_array_equal(s.x, t.x)

    def test_inflated_lambda(self):
        rng = np.random.default_rng(10)
        for _ in range(20):
            act = ga.random_isometry_action(rng)
            tr = fp.iterate_theorem2(act, fp.IterationConfig(act.domain.sample(rng), lam=1.2, mode="theorem2"))
            assert tr.bound == pytest.approx(0.72)
            assert all(q <= 0.72 + 1e-9 for q in tr.ratios)
            assert all(s.step_dist <= 1.2 * s.delta / 2 + 1e-12 for s in tr.steps if s.step_dist is not None)

    def test_circle_rotation_negative(self):
        tr = fp.iterate_theorem2(circle_rotation(), fp.IterationConfig(0.3, lam=2.0, mode="theorem2"))
        assert tr.outcome == "hypothesis_violated"
        assert not tr.hypothesis_ok
        assert tr.final_residual >= 1.0


class TestInvolution:
    def test_kink_involution(self):
        t = ga.kink_involution(0.4)
        dom = ga.BoxDomain(np.array([0.0]), np.array([1.0]))
        tr = fp.iterate_involution(t, fp.IterationConfig([0.0], mode="theorem3"), dom)
        xs = [float(p[0]) for p in tr.points]
        assert xs[1] == pytest.approx(0.5, abs=1e-12)
        assert xs[2] == pytest.approx(5 / 12, abs=1e-12)
        # the scalar oracle: x -> (x + T x) / 2
        x = 0.0
        for got in xs:
            assert got == pytest.approx(x, abs=1e-15)
            x = (x + float(t(np.array([x]))[0])) / 2
        assert tr.steps[1].delta == pytest.approx(1 / 6, abs=1e-15)
        assert tr.outcome == "converged"
        assert abs(xs[-1] - 0.4) <= 1e-8
        assert max(tr.ratios) <= 0.75 + 1e-9
        assert tr.L == pytest.approx(1.5)

    def test_negation_one_step(self):
        t = ga.AffineMap([[-1.0]], [0.0])
        tr = fp.iterate_involution(t, fp.IterationConfig([0.8], mode="theorem3"))
        assert tr.final_point[0] == 0 and len(tr.steps) == 2

    def test_not_an_involution(self):
        with pytest.raises(fp.InvolutionError):
            fp.iterate_involution(ga.rotation2d(quarter_turns=1), fp.IterationConfig([1.0, 0.0], mode="theorem3"))

    def test_antipodal_negative(self):
        tr = fp.iterate_involution(ga.CircleIsometry("rotation", PI),
                                   fp.IterationConfig(0.3, lam=2.0, mode="theorem3"))
        assert tr.outcome == "hypothesis_violated"
        assert tr.final_residual >= PI - 1e-9

    def test_dispatch(self):
        act = ga.cyclic_action(ga.kink_involution(0.4), 2, ga.BoxDomain(np.array([0.0]), np.array([1.0])))
        tr = fp.iterate(act, fp.IterationConfig([0.0], mode="theorem3"))
        assert tr.outcome == "converged"
        with pytest.raises(ValueError):
            fp.iterate(z4(), fp.IterationConfig([0.0, 1.0], mode="theorem3"))


class TestAudits:
    def test_limit_audit_holds_on_converged_runs(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            act = ga.random_isometry_action(rng)
            tr = fp.iterate_theorem1(act, fp.IterationConfig(act.domain.sample(rng)))
            assert fp.limit_audit(act, tr)

    def test_summary_fields(self):
        tr = fp.iterate_theorem1(z4(), fp.IterationConfig([1.0, 0.0]), seed=4)
        s = tr.summary()
        assert s["outcome"] == "converged" and s["seed"] == "4" and s["L_source"] == "slope analysis"
