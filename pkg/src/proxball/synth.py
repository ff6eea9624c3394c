"""Certificates: a closed ball of radius varrho_gamma(x) in S^c through x.

``synthesize`` runs the case analysis that proves S^c is a union of closed
balls with radius function varrho_gamma, producing for each query point the
unit vector zeta_x and offset t_x of the ball characterisation

    <s - x + t zeta, s - x + (t - 2 varrho) zeta> > 0   for all s in S

(or <zeta, s - x> <= 0 when varrho is infinite).  The normal vector needed
at points of bdry(int S) comes from the set model and is audited before use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (GAMMA_MIN, INF, AsymptoticBallFamily, ClosedBall, ExtReal, as_point,
                   unit_vector)
from .errors import (BadT, NoValidNormal, NormalOracleFailure, OracleDisagreement,
                     VerificationFailure, XNotInBall)
from .proxcheck import (FAILS, HOLDS_STRICT, MarginReport, _projections, _report, _samples,
                        ball_in_complement, realized_by_sphere)
from .radius import RadiusEvaluation, check_gamma, evaluate
from .sets import RadiusFnSpec, SetModel, classify, designated_normal, support

CASE_TAGS = ("C1", "C2_1_1", "C2_1_2", "C2_2_1", "C2_2_2_1", "C2_2_2_2_1", "C2_2_2_2_2")
SCHEMA = 1


@dataclass(frozen=True)
class Certificate:
    x: np.ndarray
    gamma: float
    eval: RadiusEvaluation | None
    case_tag: str | None
    zeta_sx: np.ndarray | None
    xi_sx: np.ndarray | None
    y_center_aux: np.ndarray | None
    zeta_x: np.ndarray
    t_x: float | None
    result: ClosedBall | AsymptoticBallFamily

    @property
    def varrho(self) -> ExtReal:
        if isinstance(self.result, AsymptoticBallFamily):
            return INF
        return ExtReal(self.result.radius)

    @property
    def is_finite(self) -> bool:
        return isinstance(self.result, ClosedBall)

    def to_json(self):
        vec = lambda v: None if v is None else np.asarray(v).tolist()  # noqa: E731
        return {
            "schema": SCHEMA,
            "x": vec(self.x), "gamma": self.gamma,
            "eval": None if self.eval is None else self.eval.to_json(),
            "case_tag": self.case_tag,
            "zeta_sx": vec(self.zeta_sx), "xi_sx": vec(self.xi_sx),
            "y_center_aux": vec(self.y_center_aux),
            "zeta_x": vec(self.zeta_x), "t_x": self.t_x,
            "varrho": self.varrho.to_json(),
            "result": self.result.to_json(),
        }

    @classmethod
    def from_json(cls, d) -> "Certificate":
        opt = lambda v: None if v is None else as_point(v)  # noqa: E731
        res = d["result"]
        if res["kind"] == "ball":
            result = ClosedBall(res["center"], res["radius"])
        else:
            result = AsymptoticBallFamily(res["anchor"], res["direction"])
        ev = None
        if d.get("eval"):
            e = d["eval"]
            ev = RadiusEvaluation(as_point(e["x"]), e["rho_x"], ExtReal.of(e["rho"]),
                                  as_point(e["s_x"]), e["gamma"], ExtReal.of(e["varrho"]))
        return cls(as_point(d["x"]), d["gamma"], ev, d.get("case_tag"),
                   opt(d.get("zeta_sx")), opt(d.get("xi_sx")), opt(d.get("y_center_aux")),
                   as_point(d["zeta_x"]), d.get("t_x"), result)


def cert_to_ball(x, varrho, zeta_x, t_x=None):
    """The ball B(x + (varrho - t) zeta; varrho), or the tangent family when varrho = +inf."""
    x, zeta_x, varrho = as_point(x), as_point(zeta_x), ExtReal.of(varrho)
    if varrho.is_inf:
        return AsymptoticBallFamily(x, zeta_x)
    if t_x is None or not 0.0 <= t_x <= varrho.value:
        raise BadT(f"t_x={t_x} outside [0, {varrho.value}]")
    return ClosedBall(x + (varrho.value - t_x) * zeta_x, varrho.value)


def ball_to_cert(x, ball_or_family, varrho):
    """Recover (zeta_x, t_x) from a ball through x; t_x is None for a family."""
    x, varrho = as_point(x), ExtReal.of(varrho)
    if isinstance(ball_or_family, AsymptoticBallFamily):
        if not np.allclose(ball_or_family.anchor, x, rtol=0, atol=1e-12):
            raise XNotInBall("family is not anchored at x")
        return ball_or_family.direction.copy(), None
    ball = ball_or_family
    gap = ball.center - x
    dist = float(np.linalg.norm(gap))
    if dist > ball.radius * (1 + 1e-12) or abs(ball.radius - varrho.value) > 1e-12 * max(1.0, varrho.value):
        raise XNotInBall(f"{x.tolist()} is not in a ball of radius {varrho}")
    t = min(varrho.value, max(0.0, varrho.value - dist))
    zeta = gap / dist if dist > 0 else np.array([1.0, 0.0])
    return zeta, t


def manual_certificate(x, varrho, zeta_x, t_x=None, gamma: float = math.nan) -> Certificate:
    """A certificate built directly from (zeta_x, t_x), without the case machine."""
    x, zeta_x = as_point(x), unit_vector(zeta_x)
    return Certificate(x, gamma, None, None, None, None, None, zeta_x, t_x,
                       cert_to_ball(x, varrho, zeta_x, t_x))


def _finite_case2_tag(dist_y: float, varrho: float, eps: float) -> str:
    # dead-band: land on the non-strict side of each comparison
    if dist_y <= varrho + eps:
        return "C2_2_2_1"
    if dist_y <= 2.0 * varrho + eps:
        return "C2_2_2_2_2"
    return "C2_2_2_2_1"


def synthesize(model: SetModel, gamma: float, x, r_fn: RadiusFnSpec | None = None,
               samples: int = 10_000, verify: bool = True) -> Certificate:
    """Certificate of a closed ball of radius varrho_gamma(x) in S^c containing x."""
    check_gamma(gamma)
    r_fn = r_fn or model.radius_fn
    ev = evaluate(model, gamma, x, r_fn)
    x, s_x, rho_x = ev.x, ev.s_x, ev.rho_x
    eps = model.tol.eps_geom
    zeta_sx = (x - s_x) / rho_x
    xi = y = None

    a = gamma * rho_x
    case_one = not ev.rho.is_inf and a >= 0.5 * math.sqrt(a * a + 4.0 * ev.rho.value ** 2)
    if case_one:
        tag, zeta_x, t_x = "C1", zeta_sx, a
    else:
        r = r_fn(s_x)
        bp = classify(model, s_x)
        if not bp.in_bdry_int:
            zeta_x = zeta_sx
            tag, t_x = ("C2_1_1", None) if r.is_inf else ("C2_1_2", 0.0)
        else:
            try:
                xi, _ = designated_normal(model, bp, zeta_sx, r_fn, with_radius=False)
            except NoValidNormal as exc:
                raise NormalOracleFailure(str(exc)) from exc
            audit = realized_by_sphere(model, s_x, xi, r, samples)
            if not audit.passed or float(xi @ zeta_sx) < -model.tol.eps_strict:
                raise NormalOracleFailure(
                    f"normal {xi.tolist()} at {s_x.tolist()} fails the realization audit")
            if r.is_inf:
                tag, zeta_x, t_x = "C2_2_1", xi, None
            else:
                y = s_x + r.value * xi
                dist_y = float(np.linalg.norm(y - x))
                zeta_x = xi if dist_y <= 1e-14 else (y - x) / dist_y
                t_x = max(0.0, ev.varrho.value - dist_y)
                tag = _finite_case2_tag(dist_y, ev.varrho.value, eps)
    cert = Certificate(x, gamma, ev, tag, zeta_sx, xi, y, zeta_x, t_x,
                       cert_to_ball(x, ev.varrho, zeta_x, t_x))
    if verify:
        rep = verify_certificate(model, cert, samples)
        if not rep.passed:
            raise VerificationFailure(
                f"{tag} ball at {x.tolist()} has margin {rep.min_margin:.3e}; "
                "the scene probably violates the exterior sphere condition")
    return cert


def verify_certificate(model: SetModel, cert: Certificate, samples: int = 10_000) -> MarginReport:
    """Re-check the ball characterisation of a certificate over S.

    Finite: min over S of <s-x+t zeta, s-x+(t-2 varrho) zeta> must be strictly
    positive.  Infinite: the report's margin is -max <zeta, s - x>, which must
    be >= -eps_strict; ties at the maximum go to the point nearest x.
    """
    x, zeta = cert.x, cert.zeta_x
    eps = model.tol.eps_strict
    if cert.is_finite:
        ball = cert.result
        varrho, t = ball.radius, cert.t_x
        X = _samples(model, samples, [_projections(model, ball.center)])
        A = X - x + t * zeta
        B = X - x + (t - 2.0 * varrho) * zeta
        rep = _report(np.sum(A * B, axis=1), X, eps, demand=HOLDS_STRICT)
        cross = ball_in_complement(model, ball, closed=True, samples=samples)
        if cross.passed != rep.passed:
            raise OracleDisagreement(
                f"certificate margin says {rep.verdict}, ball test says {cross.verdict}")
        return rep
    X = _samples(model, samples)
    rep = _report(-(X - x) @ zeta, X, eps, tie_ref=x)
    if rep.passed and support(model, zeta) - zeta @ x > eps:
        return MarginReport(rep.min_margin, rep.argmin_point, rep.samples_used, FAILS, False)
    return rep


def case2_inequality_audit(cert: Certificate) -> dict:
    """Re-derive the case-2 inequality chain and the closing bounds numerically.

    Returns named booleans; empty (audit skipped) for case-1, infinite or
    hand-built certificates.
    """
    if cert.case_tag is None or cert.case_tag == "C1" or not cert.is_finite:
        return {}
    ev, g = cert.eval, cert.gamma
    rho_x, rho, vr = ev.rho_x, ev.rho.value, ev.varrho.value
    s3 = math.sqrt(3.0)
    loose = 1e-12 * max(1.0, rho)
    out = {
        "rho_x < 2 rho / (gamma sqrt3)": rho_x < 2.0 * rho / (g * s3),
        "varrho < 2 rho / sqrt3": vr < 2.0 * rho / s3,
        "rho_x + 2 varrho < (1/gamma + 2) 2 rho / sqrt3": rho_x + 2 * vr < (1 / g + 2) * 2 * rho / s3,
        "(1/gamma + 2) 2 rho / sqrt3 <= 4 rho": (1 / g + 2) * 2 * rho / s3 <= 4 * rho + loose,
        "gamma >= 1/(2 sqrt3 - 2)": g >= GAMMA_MIN - 1e-15,
    }
    if cert.case_tag.startswith("C2_2_2"):
        r_s = 2.0 * rho
        dist_y = float(np.linalg.norm(cert.y_center_aux - cert.x))
        if cert.case_tag == "C2_2_2_1":
            out["varrho < r(s_x)"] = vr < r_s
        elif cert.case_tag == "C2_2_2_2_1":
            out["rho_x^2 (1 - 2 varrho/|y - x|) > 0"] = rho_x ** 2 * (1 - 2 * vr / dist_y) > 0
        else:
            ratio = vr / dist_y
            lower = rho_x ** 2 * (1 - 2 * g * g + (3 * g * g - 1) * ratio)
            bound = rho_x ** 2 * (1 - g * g) / 2
            out["varrho / |y - x| >= 1/2"] = ratio >= 0.5 - 1e-12
            out["gamma >= 1/sqrt3"] = g >= 1 / s3
            out["lower bound >= rho_x^2 (1 - gamma^2)/2"] = lower >= bound - 1e-15 * max(1.0, rho_x ** 2)
            out["rho_x^2 (1 - gamma^2)/2 > 0"] = bound > 0
    return out
