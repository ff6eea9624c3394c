import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import C1, INV_SQRT3, disk_hole, query_points, three_disks, two_rays
from proxball.core import GAMMA_MIN, INF, ClosedBall
from proxball.errors import GammaOutOfRange, NotInComplement
from proxball.proxcheck import ball_in_complement
from proxball.radius import check_gamma, evaluate, is_case_one, lsc_spot_check, rho, varrho_gamma
from proxball.sets import RadiusFnSpec, SceneSpec, build_model, disk_complement

gammas = st.floats(GAMMA_MIN, 1.0, exclude_max=True)


def reference_varrho(g, rho_x, r):
    # written out independently of the library
    return max(g * rho_x, math.sqrt(g * g * rho_x * rho_x + 4 * r * r) / 2)


class TestVarrho:
    def test_three_disk_origin(self):
        v = varrho_gamma(0.69, INV_SQRT3, 0.5).value
        assert v == pytest.approx(reference_varrho(0.69, INV_SQRT3, 0.5), abs=1e-15)
        assert v == pytest.approx(0.5382146, abs=1e-7)

    def test_case_one_branch(self):
        assert varrho_gamma(0.7, 2.0, 1.0).value == pytest.approx(1.4)
        assert is_case_one(0.7, 2.0, 1.0)

    def test_infinite(self):
        assert varrho_gamma(0.8, 3.0, INF) == INF
        assert not is_case_one(0.8, 3.0, INF)

    @settings(max_examples=1000)
    @given(gammas, st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
    def test_threshold_equivalence(self, g, rho_x, r):
        direct = g * rho_x >= 0.5 * math.sqrt(g * g * rho_x * rho_x + 4 * r * r)
        assert direct == is_case_one(g, rho_x, r) or \
            abs(3 * (g * rho_x) ** 2 - 4 * r * r) <= 1e-12 * max(1.0, r * r)

    @given(gammas, gammas, st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
    def test_monotone_in_gamma(self, g1, g2, rho_x, r):
        lo, hi = sorted((g1, g2))
        assert varrho_gamma(lo, rho_x, r) <= varrho_gamma(hi, rho_x, r)

    @given(gammas, st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
    def test_dominates(self, g, rho_x, r):
        v = varrho_gamma(g, rho_x, r).value
        assert v >= r and v >= g * rho_x


class TestRho:
    def test_three_disk_origin(self):
        val, s_x = rho(three_disks(), (0.0, 0.0))
        assert val == 0.5
        assert np.allclose(s_x, (-1 / (2 * math.sqrt(3)), -0.5), atol=1e-12)

    def test_infinite_radius(self):
        m = build_model(two_rays().scene.with_radius_fn(RadiusFnSpec.constant(math.inf)))
        val, s_x = rho(m, (0.0, 3.0))
        assert val == INF
        assert np.allclose(np.abs(s_x), (1.0, 0.0))

    def test_affine_minimised_over_circle(self):
        # r(s) = 1 + |s - (-1, 0)| equals 2 + s1 on the unit circle
        scene = SceneSpec((disk_complement((0, 0), 1.0),), False,
                          RadiusFnSpec.affine_distance(1.0, 1.0, (-1.0, 0.0), 0.01))
        val, s_x = rho(build_model(scene), (0.0, 0.0))
        assert val.value == pytest.approx(0.5, abs=1e-12)
        assert np.allclose(s_x, (-1.0, 0.0), atol=1e-12)

    def test_point_in_s(self):
        with pytest.raises(NotInComplement):
            rho(three_disks(), (3.0, 3.0))


class TestEvaluate:
    def test_three_disk_origin(self):
        ev = evaluate(three_disks(), 0.69, (0.0, 0.0))
        assert ev.rho_x == pytest.approx(INV_SQRT3, abs=1e-12)
        assert ev.rho == 0.5
        assert ev.varrho.value == pytest.approx(0.5382146, abs=1e-7)
        assert ev.to_json()["rho"] == 0.5

    def test_far_from_rays(self):
        ev = evaluate(two_rays(), 0.7, (0.0, 10.0))
        assert ev.rho_x == pytest.approx(10.0499, abs=1e-4)
        assert ev.varrho.value == pytest.approx(7.0349, abs=1e-4)

    def test_gamma_range(self):
        for g in (0.5, GAMMA_MIN - 1e-12, 1.0):
            with pytest.raises(GammaOutOfRange):
                check_gamma(g)
        check_gamma(GAMMA_MIN)
        ev = evaluate(three_disks(), 1.0, (0.0, 0.0), check=False)
        assert ev.varrho.value == pytest.approx(INV_SQRT3, abs=1e-12)

    def test_centered_ball_fits(self):
        for m in (three_disks(), disk_hole(), two_rays()):
            for x in query_points(m, 10, seed=3):
                ev = evaluate(m, 0.8, x)
                ball = ClosedBall(x, 0.999 * 0.8 * ev.rho_x)
                assert ball_in_complement(m, ball, samples=2000).passed


class TestLowerSemicontinuity:
    def test_generic_point(self):
        assert lsc_spot_check(disk_hole(), 0.7, (0.3, 0.2))

    def test_projection_switch(self):
        # the bisector between c1 and c2 switches the projecting circle
        m = three_disks()
        mid = (C1 + np.array([INV_SQRT3, -1.0])) / 2
        x = mid * 0.5
        assert lsc_spot_check(m, 0.7, x)
        assert lsc_spot_check(m, 0.7, C1)
