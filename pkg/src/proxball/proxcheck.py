"""Inequality checks: proximal normals, sphere realization, ball containment.

Every "for all x in S" statement is discharged twice: analytically through
the exact distance oracle of :mod:`proxball.sets`, and by evaluating the
inequality over a dense sample of S.  Samples always include the nearest
points of S to the relevant ball centre, so both routes see the minimiser.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import ClosedBall, ExtReal, as_point, opposite_points, unit_vector
from .errors import OracleDisagreement, PreconditionViolated
from .sets import (BoundaryPoint, RadiusFnSpec, SetModel, boundary_array, distance,
                   distance_projection, proximal_normal_cone, realized, sample_set)

HOLDS_STRICT = "holds_strict"
HOLDS_NONSTRICT = "holds_nonstrict"
FAILS = "fails"


def verdict_of(min_margin: float, eps_strict: float) -> str:
    if min_margin > eps_strict:
        return HOLDS_STRICT
    if abs(min_margin) <= eps_strict:
        return HOLDS_NONSTRICT
    return FAILS


@dataclass(frozen=True)
class MarginReport:
    min_margin: float
    argmin_point: np.ndarray | None
    samples_used: int
    verdict: str
    passed: bool = True

    def to_json(self):
        return {"min_margin": self.min_margin,
                "argmin_point": None if self.argmin_point is None else self.argmin_point.tolist(),
                "samples_used": self.samples_used, "verdict": self.verdict,
                "passed": self.passed}


def _report(margins, points, eps_strict, demand=HOLDS_NONSTRICT, tie_ref=None):
    """Build a report from per-sample margins.

    Ties at the minimum go to the sample closest to ``tie_ref`` when given.
    """
    if len(margins) == 0:
        return MarginReport(math.inf, None, 0, HOLDS_STRICT, True)
    k = int(np.argmin(margins))
    m = float(margins[k])
    if tie_ref is not None:
        tied = np.flatnonzero(margins <= m + eps_strict * 1e-3)
        d = np.linalg.norm(points[tied] - tie_ref, axis=1)
        near = tied[d <= d.min() + 1e-12]
        k = int(min(near, key=lambda i: tuple(points[i])))
    v = verdict_of(m, eps_strict)
    passed = v == HOLDS_STRICT if demand == HOLDS_STRICT else v != FAILS
    return MarginReport(m, points[k].copy(), len(margins), v, passed)


def _samples(model: SetModel, samples: int, extra=()) -> np.ndarray:
    base = sample_set(model, samples, max(samples // 10, 1))
    extra = [np.asarray(e, dtype=float).reshape(-1, 2) for e in extra]
    return np.concatenate([base] + extra) if extra else base


def _projections(model: SetModel, c):
    """Nearest points of S to c (targeted samples)."""
    return np.array(distance_projection(model, c)[1]).reshape(-1, 2)


def proximal_margin(model: SetModel, s, zeta, sigma: float, samples: int = 10_000) -> MarginReport:
    """min over S of sigma*|x - s|^2 - <zeta, x - s>."""
    s, zeta = as_point(s), as_point(zeta)
    X = _samples(model, samples, [s])
    if sigma > 0:
        X = np.concatenate([X, _projections(model, s + zeta / (2 * sigma))])
    V = X - s
    margins = sigma * np.sum(V * V, axis=1) - V @ zeta
    return _report(margins, X, model.tol.eps_strict)


def realized_by_sphere(model: SetModel, s, zeta, r, samples: int = 10_000) -> MarginReport:
    """Check that zeta at s is realized by an r-sphere (every radius when r = +inf).

    Finite r: margin |x - s|^2 / (2r) - <zeta, x - s>.  Infinite r: -<zeta, x - s>.
    The verdict fails if either the sampled or the analytic test fails.
    """
    s, zeta, r = as_point(s), as_point(zeta), ExtReal.of(r)
    if r.is_inf:
        X = _samples(model, samples, [s])
        margins = -(X - s) @ zeta
    else:
        X = _samples(model, samples, [s, _projections(model, s + r.value * zeta)])
        V = X - s
        margins = np.sum(V * V, axis=1) / (2 * r.value) - V @ zeta
    rep = _report(margins, X, model.tol.eps_strict)
    if rep.passed and not realized(model, s, zeta, r):
        # the violation lies outside the sampled window
        return MarginReport(rep.min_margin, rep.argmin_point, rep.samples_used, FAILS, False)
    return rep


def ball_in_complement(model: SetModel, ball: ClosedBall, closed: bool = True,
                       samples: int = 10_000, diameter=(1.0, 0.0)) -> MarginReport:
    """Diametric test: min over S of <s - y, s - z> for a diameter [y, z].

    The closed ball needs a strict margin, the open ball a nonstrict one.  The
    exact route (d_S(center) against the radius) must give the same verdict.
    """
    y, z = opposite_points(ball, unit_vector(diameter))
    X = _samples(model, samples, [_projections(model, ball.center)])
    margins = np.sum((X - y) * (X - z), axis=1)
    demand = "holds_strict" if closed else HOLDS_NONSTRICT
    rep = _report(margins, X, model.tol.eps_strict, demand)
    d = distance(model, ball.center)
    exact = verdict_of(d * d - ball.radius ** 2, model.tol.eps_strict)
    if exact != rep.verdict:
        raise OracleDisagreement(
            f"sampled verdict {rep.verdict} but exact verdict {exact} for ball "
            f"{ball.center.tolist()} r={ball.radius}")
    return rep


def equivalence_triplet(model: SetModel, s, zeta, sigma: float, samples: int = 10_000):
    """Verdicts of the three equivalent forms of the proximal normal inequality.

    (1) sigma|x-s|^2 - <zeta, x-s> >= 0, (2) the open ball
    B(s + zeta/(2 sigma); 1/(2 sigma)) misses S, (3) <x-s, x-s-zeta/sigma> >= 0.
    """
    if not sigma > 0:
        raise PreconditionViolated("sigma must be positive")
    s, zeta = as_point(s), unit_vector(zeta)
    b1 = proximal_margin(model, s, zeta, sigma, samples).verdict
    R = 1.0 / (2.0 * sigma)
    b2 = ball_in_complement(model, ClosedBall(s + R * zeta, R), closed=False,
                            samples=samples).verdict
    X = _samples(model, samples, [s, _projections(model, s + R * zeta)])
    V = X - s
    b3 = _report(np.sum(V * (V - zeta / sigma), axis=1), X, model.tol.eps_strict).verdict
    return b1, b2, b3


def nested_segment_implication(y, z, yp, zp, samples, eps_strict: float = 1e-9) -> MarginReport:
    """Over samples with <s-y, s-z> >= 0, the margin <s-y', s-z'> must be > 0."""
    y, z, yp, zp = map(as_point, (y, z, yp, zp))
    L2 = float((z - y) @ (z - y))
    if L2 == 0.0:
        raise PreconditionViolated("degenerate outer segment")
    params = []
    for q in (yp, zp):
        t = float((q - y) @ (z - y)) / L2
        off = float(np.linalg.norm(y + t * (z - y) - q))
        if off > 1e-12 * max(1.0, math.sqrt(L2)) or not 0.0 < t < 1.0:
            raise PreconditionViolated(f"{q.tolist()} is not inside the open segment ]y,z[")
        params.append(t)
    S = np.asarray(samples, dtype=float).reshape(-1, 2)
    sel = np.sum((S - y) * (S - z), axis=1) >= -eps_strict
    S = S[sel]
    margins = np.sum((S - yp) * (S - zp), axis=1)
    return _report(margins, S, eps_strict, demand="holds_strict")


@dataclass(frozen=True)
class PointVerdict:
    point: np.ndarray
    in_bdry_int: bool
    radius: ExtReal
    passed: bool
    normals_checked: int


@dataclass(frozen=True)
class EescReport:
    points: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.points)

    @property
    def failures(self) -> list:
        return [p for p in self.points if not p.passed]

    def to_json(self):
        return {"passed": self.passed, "n_points": len(self.points),
                "failures": [{"point": p.point.tolist(), "in_bdry_int": p.in_bdry_int,
                              "r": p.radius.to_json()} for p in self.failures]}


def eesc_check(model: SetModel, r_fn: RadiusFnSpec | None = None, n_samples: int = 200,
               n_sweep: int = 32) -> EescReport:
    """Audit the extended exterior r(.)-sphere condition on sampled boundary points.

    Points of bdry(int S) need one realized unit normal; every other boundary
    point needs all of them (generators plus an ``n_sweep`` sweep of each cone arc).
    """
    r_fn = r_fn or model.radius_fn
    pts, flags = boundary_array(model, n_samples)
    out = []
    for s, two_d in zip(pts, flags):
        bp = BoundaryPoint(s, (), bool(two_d))
        fan = proximal_normal_cone(model, bp, with_radii=False)
        r = r_fn(s)
        normals = list(fan.generators) + fan.sweep(n_sweep)
        hits = [realized(model, s, z, r) for z in normals]
        ok = any(hits) if two_d else all(hits)
        out.append(PointVerdict(s, bool(two_d), r, ok, len(normals)))
    return EescReport(out)
