import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperfix import circle_space as cs
from hyperfix import oracles as orc

PI = math.pi
angle = st.floats(0, cs.TWO_PI, allow_nan=False, exclude_max=True)


def points_of(s: cs.ArcSet):
    return sorted(a.start for a in s.arcs)


class TestDistance:
    def test_examples(self):
        assert cs.circle_dist(0, PI) == PI
        assert cs.circle_dist(1.3, 1.3) == 0
        assert cs.circle_dist(0.1, cs.TWO_PI - 0.1) == pytest.approx(0.2, abs=1e-15)

    @given(angle, angle, angle)
    def test_metric_axioms(self, x, y, z):
        assert cs.circle_dist(x, y) == cs.circle_dist(y, x)
        assert 0 <= cs.circle_dist(x, y) <= PI
        assert cs.circle_dist(x, z) <= cs.circle_dist(x, y) + cs.circle_dist(y, z) + 1e-12


class TestBalls:
    def test_quarter_ball(self):
        (arc,) = cs.circle_ball(0, PI / 2).arcs
        assert arc.start == pytest.approx(3 * PI / 2)
        assert arc.length == pytest.approx(PI)

    def test_degenerate_and_full(self):
        (arc,) = cs.circle_ball(1.0, 0).arcs
        assert arc.length == 0 and arc.start == 1.0
        assert cs.circle_ball(2.0, PI).is_full

    def test_negative_radius(self):
        with pytest.raises(ValueError):
            cs.circle_ball(0, -0.1)


class TestIntersection:
    def test_antipodal_balls_meet_in_two_points(self):
        s = cs.arcset_intersect([cs.circle_ball(0, PI / 2), cs.circle_ball(PI, PI / 2)])
        assert len(s.arcs) == 2
        assert points_of(s) == pytest.approx([PI / 2, 3 * PI / 2])
        assert all(a.length == pytest.approx(0, abs=1e-12) for a in s.arcs)

    def test_full_is_neutral(self):
        s = cs.circle_ball(1.0, 0.5)
        t = cs.arcset_intersect([s, cs.ArcSet.full()])
        assert cs.arcset_hausdorff(s, t) == 0

    def test_disjoint(self):
        assert cs.arcset_intersect([cs.circle_ball(0, 0.1), cs.circle_ball(1, 0.1)]).is_empty

    def test_wraparound(self):
        s = cs.arcset_intersect([cs.circle_ball(0.1, 0.3), cs.circle_ball(cs.TWO_PI - 0.1, 0.3)])
        (arc,) = s.arcs
        assert arc.length == pytest.approx(0.4)
        assert s.contains(0.0)


class TestChebyshev:
    def test_antipodal_pair(self):
        r, c = cs.circle_chebyshev([0, PI])
        assert r == pytest.approx(PI / 2)
        assert points_of(c) == pytest.approx([PI / 2, 3 * PI / 2])

    def test_near_antipodal_pair(self):
        r, c = cs.circle_chebyshev([0, PI - 0.1])
        assert r == pytest.approx((PI - 0.1) / 2, abs=1e-15)
        assert points_of(c) == pytest.approx([(PI - 0.1) / 2], abs=1e-15)

    def test_singleton(self):
        r, c = cs.circle_chebyshev([2.5])
        assert r == 0 and points_of(c) == [2.5]

    def test_grid_oracle(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            k = rng.uniform(0, cs.TWO_PI, size=int(rng.integers(1, 6)))
            r, c = cs.circle_chebyshev(k)
            rg, pts = orc.grid_circle_chebyshev(k, 1e-4)
            assert abs(r - rg) <= 2e-4
            assert max(cs.dist_to_arcset(float(p), c) for p in pts) <= 2e-4

    @given(st.lists(angle, min_size=1, max_size=6))
    def test_radius_sandwich(self, k):
        r, c = cs.circle_chebyshev(k)
        delta = cs.circle_diameter(k)
        assert delta / 2 - 1e-12 <= r <= delta + 1e-12
        for e in c.endpoints():
            assert cs.circle_radius_at(e, k) == pytest.approx(r, abs=1e-9)


class TestHausdorff:
    def test_counterexample_centers(self):
        a = cs.ArcSet.from_points([PI / 2, 3 * PI / 2])
        b = cs.ArcSet.from_points([(PI - 0.1) / 2])
        assert cs.arcset_hausdorff(a, b) == pytest.approx(PI - 0.05, abs=1e-12)
        assert abs(cs.arcset_hausdorff(a, b) - orc.grid_arcset_hausdorff(a, b)) <= 2e-4

    def test_identity_and_antipodes(self):
        a = cs.circle_ball(1.0, 0.3)
        assert cs.arcset_hausdorff(a, a) == 0
        assert cs.arcset_hausdorff(cs.ArcSet.from_points([0]), cs.ArcSet.from_points([PI])) == PI

    def test_empty(self):
        with pytest.raises(ValueError):
            cs.arcset_hausdorff(cs.ArcSet(()), cs.ArcSet.full())

    def test_grid_oracle_on_arcs(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            a = cs.random_admissible(rng)
            b = cs.random_admissible(rng)
            assert abs(cs.arcset_hausdorff(a, b) - orc.grid_arcset_hausdorff(a, b, 1e-3)) <= 2e-3


class TestLemmas:
    @settings(max_examples=200)
    @given(st.lists(angle, min_size=1, max_size=5), st.lists(angle, min_size=1, max_size=5))
    def test_lemma_radius_holds(self, k, m):
        rk = cs.circle_chebyshev(k)[0]
        rm = cs.circle_chebyshev(m)[0]
        assert abs(rk - rm) <= cs.circle_set_hausdorff(k, m) + 1e-9

    def test_lemma_center_fails(self):
        eps = 0.1
        k, m = [0.0, PI], [0.0, PI - eps]
        rk, ck = cs.circle_chebyshev(k)
        rm, cm = cs.circle_chebyshev(m)
        d = cs.circle_set_hausdorff(k, m)
        assert d == pytest.approx(eps, abs=1e-12)
        assert d + abs(rk - rm) == pytest.approx(3 * eps / 2, abs=1e-12)
        assert cs.arcset_hausdorff(ck, cm) == pytest.approx(PI - eps / 2, abs=1e-12)


class TestShrinkHull:
    def test_matches_grid(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            s = cs.random_admissible(rng)
            rho = float(rng.uniform(0.5, 3.5))
            got = cs.arcset_intersect([s, cs.arcset_shrink_hull(s, rho)])
            pts = orc.grid_arc_double_center(s, rho, 1e-3)
            for p in pts:
                assert cs.dist_to_arcset(float(p), got) <= 2e-3
            for e in got.endpoints():
                assert float(np.min(cs.circle_dist_array(pts, e))) <= 2e-3


class TestLambdaHyperconvexity:
    def test_antipodal_pair_full_balls(self):
        fam = cs.BallFamily(cs.ArcSet.full(), (0.0, PI), (PI / 2, PI / 2))
        assert cs.check_lambda_hyperconvex([fam], 2.0).violations == []

    def test_lambda_two_has_no_violations(self):
        fams = cs.sample_ball_families(300, seed=1)
        rep = cs.check_lambda_hyperconvex(fams, 2.0, seed=1)
        assert rep.cases == 300 and rep.violations == [] and rep.malformed == []

    def test_lambda_one_fails(self):
        fams = cs.sample_ball_families(300, seed=1)
        assert cs.check_lambda_hyperconvex(fams, 1.0).violations

    def test_malformed_reported(self):
        fam = cs.BallFamily(cs.ArcSet.full(), (0.0, PI), (0.1, 0.1))
        rep = cs.check_lambda_hyperconvex([fam], 2.0)
        assert rep.cases == 0 and rep.malformed and "do not meet" in rep.malformed[0][1]


class TestSelect:
    def test_examples(self):
        assert cs.select_in(cs.ArcSet.full(), 1.7) == 1.7
        assert cs.select_in(cs.ArcSet.from_points([PI / 2, 3 * PI / 2]), 0.1) == pytest.approx(PI / 2)
        assert cs.select_in(cs.ArcSet.from_arcs([cs.Arc(1.0, 1.0)]), 0.0) == 1.0

    def test_tie_breaks_to_smaller_angle(self):
        assert cs.select_in(cs.ArcSet.from_points([PI / 2, 3 * PI / 2]), 0.0) == pytest.approx(PI / 2)

    def test_empty(self):
        with pytest.raises(ValueError):
            cs.select_in(cs.ArcSet(()), 0.0)
