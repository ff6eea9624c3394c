import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import C1, INV_SQRT3, disk_hole, lower_half_plane, query_points, three_disks, two_rays
from proxball.core import GAMMA_MIN, INF, AsymptoticBallFamily, ClosedBall
from proxball.errors import BadT, GammaOutOfRange, VerificationFailure, XNotInBall
from proxball.proxcheck import HOLDS_NONSTRICT, ball_in_complement
from proxball.sets import RadiusFnSpec, build_model, contains
from proxball.synth import (CASE_TAGS, Certificate, ball_to_cert, case2_inequality_audit,
                            cert_to_ball, manual_certificate, synthesize, verify_certificate)

coord = st.floats(-20, 20)


class TestConversion:
    def test_cert_to_ball(self):
        b = cert_to_ball((1.0, 0.0), 2.0, (0.0, 1.0), 0.5)
        assert np.allclose(b.center, (1.0, 1.5)) and b.radius == 2.0

    def test_cert_to_family(self):
        fam = cert_to_ball((0.0, 0.0), INF, (0.0, 1.0))
        assert isinstance(fam, AsymptoticBallFamily)
        assert np.allclose(fam.direction, (0.0, 1.0))

    def test_bad_t(self):
        for t in (None, -0.1, 2.5):
            with pytest.raises(BadT):
                cert_to_ball((0.0, 0.0), 2.0, (1.0, 0.0), t)

    def test_ball_to_cert(self):
        zeta, t = ball_to_cert((0.0, 0.0), ClosedBall((3.0, 4.0), 6.0), 6.0)
        assert np.allclose(zeta, (0.6, 0.8)) and t == pytest.approx(1.0)

    def test_centered_ball(self):
        zeta, t = ball_to_cert((2.0, 2.0), ClosedBall((2.0, 2.0), 1.0), 1.0)
        assert np.allclose(zeta, (1.0, 0.0)) and t == 1.0

    def test_x_outside(self):
        with pytest.raises(XNotInBall):
            ball_to_cert((0.0, 0.0), ClosedBall((3.0, 4.0), 4.0), 4.0)
        with pytest.raises(XNotInBall):
            ball_to_cert((0.0, 0.0), ClosedBall((0.0, 1.0), 2.0), 3.0)
        with pytest.raises(XNotInBall):
            ball_to_cert((0.0, 0.0), AsymptoticBallFamily((1.0, 0.0), (0.0, 1.0)), INF)

    @given(coord, coord, st.floats(0.01, 50), st.floats(0, 2 * math.pi), st.floats(0, 1))
    def test_round_trip(self, x0, x1, vr, ang, frac):
        x, zeta = np.array([x0, x1]), np.array([math.cos(ang), math.sin(ang)])
        ball = cert_to_ball(x, vr, zeta, frac * vr)
        assert ball.contains(x) or np.linalg.norm(ball.center - x) <= vr * (1 + 1e-12)
        z2, t2 = ball_to_cert(x, ball, vr)
        again = cert_to_ball(x, vr, z2, t2)
        assert np.allclose(again.center, ball.center, atol=1e-9 * (1 + vr))


class TestSynthesize:
    def test_three_disk_origin(self):
        c = synthesize(three_disks(), 0.69, (0.0, 0.0))
        assert c.case_tag == "C2_2_2_2_1"
        assert c.varrho.value == pytest.approx(0.5382146, abs=1e-7)
        assert np.allclose(c.y_center_aux, C1, atol=1e-9)
        assert np.allclose(c.zeta_x, (-1.0, 0.0), atol=1e-9)
        assert c.t_x == 0.0
        assert np.allclose(c.result.center, (-0.5382146, 0.0), atol=1e-7)

    def test_case_one_geometry(self):
        c = synthesize(disk_hole(), 0.7, (0.0, 0.0))
        ev = c.eval
        assert c.case_tag == "C1"
        assert c.t_x == pytest.approx(0.7 * ev.rho_x)
        # case 1 balls are centred at x
        assert np.allclose(c.result.center, c.x)

    def test_infinite_interior_boundary(self):
        c = synthesize(lower_half_plane(), 0.7, (0.0, 1.0))
        assert c.case_tag == "C2_2_1" and c.varrho == INF
        assert np.allclose(c.zeta_x, (0.0, 1.0))

    def test_rays_outside_interior(self):
        c = synthesize(two_rays(), 0.7, (0.5, 0.3))
        assert c.case_tag == "C2_1_2" and c.t_x == 0.0

    def test_far_point_on_rays(self):
        c = synthesize(two_rays(), 0.7, (0.0, 10.0))
        assert c.varrho.value == pytest.approx(7.0349, abs=1e-4)

    def test_gamma_rejected(self):
        with pytest.raises(GammaOutOfRange):
            synthesize(three_disks(), 0.5, (0.0, 0.0))

    def test_esc_violation_detected(self):
        m = build_model(two_rays().scene.with_radius_fn(RadiusFnSpec.constant(math.inf)))
        with pytest.raises(VerificationFailure):
            synthesize(m, 0.7, (0.0, 1.0))

    @pytest.mark.parametrize("x,tag", [((1.0, 0.0), "C2_2_2_1"), ((1.9, 0.0), "C2_2_2_2_2")])
    def test_hole_tags(self, x, tag):
        assert synthesize(disk_hole(), 0.7, x).case_tag == tag

    def test_invariants(self):
        for m in (three_disks(), disk_hole(), two_rays()):
            for x in query_points(m, 15, seed=5):
                for g in (GAMMA_MIN, 0.8, 0.95):
                    c = synthesize(m, g, x, samples=3000)
                    assert c.case_tag in CASE_TAGS
                    assert c.varrho >= c.eval.rho_x * g * (1 - 1e-12)
                    if c.is_finite:
                        gap = np.linalg.norm(c.result.center - x)
                        assert gap <= c.varrho.value * (1 + 1e-12)
                        assert not contains(m, c.result.center)
                        assert 0.0 <= c.t_x <= c.varrho.value
                    if c.case_tag.startswith("C2_2_2"):
                        # the auxiliary ball B(y; r(s_x)) stays in S^c
                        r_s = m.radius_fn(c.eval.s_x).value
                        ball = ClosedBall(c.y_center_aux, r_s * (1 - 1e-9))
                        assert ball_in_complement(m, ball, samples=2000).passed


class TestJson:
    def test_round_trip(self):
        for c in (synthesize(three_disks(), 0.69, (0.0, 0.0)),
                  synthesize(lower_half_plane(), 0.7, (0.0, 1.0))):
            d = json.loads(json.dumps(c.to_json()))
            assert d["schema"] == 1
            back = Certificate.from_json(d)
            assert back.to_json() == c.to_json()

    def test_infinite_varrho_serialised(self):
        d = synthesize(lower_half_plane(), 0.7, (0.0, 1.0)).to_json()
        assert d["varrho"] == "inf" and d["t_x"] is None


class TestAudit:
    def test_three_disk_values(self):
        c = synthesize(three_disks(), 0.69, (0.0, 0.0))
        rho_x, vr = c.eval.rho_x, c.varrho.value
        assert rho_x == pytest.approx(0.5774, abs=1e-4)
        assert 2 * 0.5 / (0.69 * math.sqrt(3)) == pytest.approx(0.8367, abs=1e-4)
        assert vr < 2 * 0.5 / math.sqrt(3)
        assert rho_x + 2 * vr == pytest.approx(1.6538, abs=1e-4)
        audit = case2_inequality_audit(c)
        assert audit and all(audit.values())
        assert "rho_x^2 (1 - 2 varrho/|y - x|) > 0" in audit

    def test_second_bound(self):
        audit = case2_inequality_audit(synthesize(disk_hole(), 0.7, (1.9, 0.0)))
        assert audit["gamma >= 1/sqrt3"] and all(audit.values())

    def test_skipped(self):
        assert case2_inequality_audit(synthesize(disk_hole(), 0.7, (0.0, 0.0))) == {}
        assert case2_inequality_audit(synthesize(lower_half_plane(), 0.7, (0.0, 1.0))) == {}
        assert case2_inequality_audit(manual_certificate((0, 0), 1.0, (1, 0), 0.5)) == {}


class TestVerify:
    def test_critical_ball_is_not_strict(self):
        # the ball B(0; 1/sqrt3) touches all three disks
        c = manual_certificate((0.0, 0.0), INV_SQRT3, (1.0, 0.0), INV_SQRT3)
        rep = verify_certificate(three_disks(), c)
        assert not rep.passed and rep.verdict == HOLDS_NONSTRICT

    def test_infinite_between_rays(self):
        c = manual_certificate((0.0, 0.0), INF, (0.0, 1.0))
        rep = verify_certificate(two_rays(), c)
        assert rep.verdict == HOLDS_NONSTRICT
        assert rep.min_margin == pytest.approx(0.0, abs=1e-12)
        assert np.allclose(np.abs(rep.argmin_point), (1.0, 0.0))

    def test_infinite_unbounded_side(self):
        c = manual_certificate((0.0, 1.0), INF, (1.0, 0.0))
        assert not verify_certificate(two_rays(), c).passed

    @settings(max_examples=25, deadline=None)
    @given(st.floats(-0.4, 0.4), st.floats(-0.4, 0.4))
    def test_synthesized_balls_verify(self, a, b):
        m = three_disks()
        if contains(m, (a, b)):
            return
        c = synthesize(m, 0.8, (a, b), verify=False)
        assert verify_certificate(m, c, samples=3000).passed
