import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperfix import group_action as ga

PI = math.pi


def z4_rotation(center=(0.0, 0.0)):
    return ga.cyclic_action(ga.rotation2d(quarter_turns=1, center=center), 4, ga.BoxDomain.cube(2), "z4")


def swap3():
    return ga.cyclic_action(ga.permutation_map([1, 0, 2]), 2, ga.BoxDomain.cube(3, 5.0), "swap")


def negation():
    return ga.cyclic_action(ga.AffineMap([[-1.0]], [0.0]), 2, ga.BoxDomain.cube(1), "neg")


def involution(c=0.4):
    return ga.cyclic_action(ga.kink_involution(c), 2, ga.BoxDomain(np.array([0.0]), np.array([1.0])), "inv")


class TestGroups:
    @pytest.mark.parametrize("n", [1, 2, 4, 7])
    def test_cyclic_valid(self, n):
        assert ga.verify_group(ga.cyclic(n)).valid

    def test_corrupted_table_lists_triples(self):
        t = ga.cyclic(4).cayley.copy()
        t[1, 1] = 3
        rep = ga.verify_group(ga.FiniteGroup(t, 0, (0, 3, 2, 1)))
        assert not rep.valid
        assert rep.associativity
        a, b, c = rep.associativity[0]
        assert t[t[a, b], c] != t[a, t[b, c]]

    def test_malformed(self):
        with pytest.raises(ValueError):
            ga.FiniteGroup(np.zeros((2, 3), int), 0, (0, 0))
        with pytest.raises(ValueError):
            ga.FiniteGroup(np.full((2, 2), 5), 0, (0, 1))

    def test_from_table(self):
        g = ga.FiniteGroup.from_table([[1, 0], [0, 1]])
        assert g.identity == 1 and g.inverse == (0, 1)

    def test_affine_closure_of_signed_permutations(self):
        g, maps = ga.affine_closure([ga.permutation_map([1, 0], [1, -1])])
        assert g.n == 4 and ga.verify_group(g).valid
        act = ga.Action(g, tuple(maps), ga.BoxDomain.cube(2))
        assert ga.verify_action(act).passed


class TestActions:
    def test_homomorphism(self):
        for act in (z4_rotation(), swap3(), involution()):
            rep = ga.verify_action(act, samples=500, seed=1)
            assert rep.passed and rep.max_deviation <= 1e-9 and rep.seed == 1

    def test_rotation_is_exact(self):
        assert ga.verify_action(z4_rotation()).max_deviation == 0

    def test_mismatched_maps(self):
        r = ga.rotation2d(quarter_turns=1)
        bad = ga.Action(ga.cyclic(4), (ga.identity_map(2), r.compose(r), r, r.compose(r).compose(r)),
                        ga.BoxDomain.cube(2))
        rep = ga.verify_action(bad)
        assert not rep.passed and rep.max_deviation > 0

    def test_wrong_map_count(self):
        with pytest.raises(ValueError, match="4 elements but 3 maps"):
            ga.Action(ga.cyclic(4), (ga.identity_map(2),) * 3, ga.BoxDomain.cube(2))

    def test_orbits(self):
        np.testing.assert_array_equal(z4_rotation().orbit([1, 0]), [[1, 0], [0, 1], [-1, 0], [0, -1]])
        np.testing.assert_array_equal(swap3().orbit([1, 3, 5]), [[1, 3, 5], [3, 1, 5]])
        assert np.all(z4_rotation().orbit([0, 0]) == 0)

    def test_orbit_stats(self):
        st_ = ga.orbit_stats(z4_rotation(), [1, 0])
        assert (st_.delta, st_.r) == (2, 1)
        assert st_.radius_at([0, 0]) == 1
        fixed = ga.orbit_stats(z4_rotation(), [0, 0])
        assert (fixed.delta, fixed.r) == (0, 0)
        neg = ga.orbit_stats(negation(), [0.8])
        assert neg.delta == pytest.approx(1.6) and neg.r == pytest.approx(0.8)

    def test_dG(self):
        act = z4_rotation()
        assert ga.dG(act, [1, 0], [0.3, 0.2]) == pytest.approx(ga.BoxDomain.dist([1, 0], [0.3, 0.2]))
        # T(0) = 1 and T(0.5) = 1/3 for the c = 0.4 involution
        assert ga.dG(involution(), [0.0], [0.5]) == pytest.approx(2 / 3, abs=1e-15)
        assert ga.dG(act, [0.4, 0.1], [0.4, 0.1]) == 0

    @settings(max_examples=100)
    @given(st.floats(0, 1), st.floats(0, 1), st.integers(0, 1))
    def test_dG_sandwich_and_isometry(self, x, y, a):
        act = involution()
        L = ga.uniform_lipschitz(act)[0]
        g = ga.dG(act, [x], [y])
        assert abs(x - y) <= g + 1e-12
        assert g <= L * abs(x - y) + 1e-12
        tx, ty = act.maps[a]([x]), act.maps[a]([y])
        assert ga.dG(act, tx, ty) == pytest.approx(g, abs=1e-9)

    def test_lemma_bounded(self):
        act = z4_rotation()
        assert ga.lemma_bounded_check(act, [1, 0], [0, 0])
        assert ga.lemma_bounded_check(act, [1, 0], [1, 0])
        rng = np.random.default_rng(0)
        for _ in range(50):
            act = ga.random_isometry_action(rng, max_dim=4, max_order=24)
            x, y = act.domain.sample(rng, 2)
            assert ga.lemma_bounded_check(act, x, y)


class TestLipschitz:
    def test_isometries(self):
        assert ga.estimate_L(z4_rotation()) == pytest.approx(1.0, abs=1e-9)
        assert ga.uniform_lipschitz(z4_rotation()) == (1.0, True)

    def test_involution_slopes(self):
        t = ga.kink_involution(0.4)
        np.testing.assert_allclose(np.concatenate(t.slopes()), [-1.5, -2 / 3])
        assert ga.estimate_L(involution(), samples=5000) == pytest.approx(1.5, abs=1e-6)
        np.testing.assert_allclose(t(t(np.linspace(0, 1, 11)[:, None])), np.linspace(0, 1, 11)[:, None], atol=1e-15)

    @pytest.mark.parametrize("a", [0.1, 0.25, 0.5])
    def test_f_a(self, a):
        m = ga.f_a_map(a)
        assert m.exact_lipschitz() == pytest.approx(1 + a, abs=1e-15)
        assert ga.estimate_map_L(m, ga.BoxDomain.cube(4), samples=5000) == pytest.approx(1 + a, abs=1e-6)
        assert m.coordinate_fixed_points() == [-1.0, 1.0]

    def test_s2_rotation_constant(self):
        r = ga.rotation2d(angle=2 * PI / 3)
        assert r.exact_lipschitz() == pytest.approx((1 + math.sqrt(3)) / 2)
        assert r.exact_lipschitz() < math.sqrt(2)

    def test_estimate_never_exceeds_exact(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            act = ga.random_isometry_action(rng, max_dim=5)
            assert ga.estimate_L(act, seed=3) <= ga.uniform_lipschitz(act)[0] + 1e-6

    def test_diagonal_piece_raises(self):
        m = ga.PiecewiseLinearMap((((0.0, 1.0), (0.0, 1.0)),))
        with pytest.raises(ValueError, match="diagonal"):
            m.coordinate_fixed_points()

    def test_knots_must_increase(self):
        with pytest.raises(ValueError):
            ga.PiecewiseLinearMap((((0.0, 0.0), (1.0, 2.0)),))


class TestCircleIsometries:
    def test_compose_and_inverse(self):
        rot = ga.CircleIsometry("rotation", PI / 2)
        ref = ga.CircleIsometry("reflection", 0.3)
        x = np.linspace(0, 6, 13)
        for a in (rot, ref):
            for b in (rot, ref):
                np.testing.assert_allclose(
                    ga.CircleDomain.dist(a.compose(b)(x), a(b(x))), 0, atol=1e-12)
            np.testing.assert_allclose(ga.CircleDomain.dist(a.inverse()(a(x)), x), 0, atol=1e-12)

    def test_rotation_action(self):
        act = ga.cyclic_action(ga.CircleIsometry("rotation", PI / 2), 4, ga.CircleDomain())
        assert ga.verify_action(act).passed
        assert ga.orbit_stats(act, 0.0).delta == pytest.approx(PI)


class TestWordBall:
    def test_two_rotations_grow(self):
        gens = [ga.rotation2d(quarter_turns=1), ga.rotation2d(quarter_turns=1, center=(1.0, 0.0))]
        wb = ga.word_ball_orbit(gens, 16, [0.0, 0.0])
        assert all(b >= a for a, b in zip(wb.diameters, wb.diameters[1:]))
        for k in range(1, 9):
            assert wb.diameters[2 * k] >= k

    def test_translation_subword(self):
        a = ga.rotation2d(quarter_turns=1)
        b = ga.rotation2d(quarter_turns=1, center=(1.0, 0.0))
        t = a.compose(b.inverse())
        np.testing.assert_array_equal(t.matrix, np.eye(2))
        np.testing.assert_array_equal(t.offset, [-1, 1])
        # the plain composition is a half turn, which has period 2
        ab = a.compose(b)
        np.testing.assert_array_equal(ab.matrix, -np.eye(2))

    def test_identity_generator(self):
        wb = ga.word_ball_orbit([ga.identity_map(2)], 5, [0.3, 0.1])
        assert wb.diameters == [0.0] * 6

    def test_single_rotation_stabilizes(self):
        wb = ga.word_ball_orbit([ga.rotation2d(quarter_turns=1)], 6, [1.0, 0.0])
        assert wb.diameters[2:] == [2.0] * 5

    def test_cap(self):
        gens = [ga.rotation2d(quarter_turns=1), ga.rotation2d(quarter_turns=1, center=(1.0, 0.0))]
        with pytest.raises(ga.WordBudgetExceeded):
            ga.word_ball_orbit(gens, 40, [0.0, 0.0], cap=100)
