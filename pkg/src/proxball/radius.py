"""Radius functions on the complement: d_S, rho and the enlarged varrho_gamma."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import GAMMA_MIN, INF, ExtReal, as_point, extreal_max, lex_key
from .errors import GammaOutOfRange, NotInComplement
from .sets import RadiusFnSpec, SetModel, contains, distance_projection


@dataclass(frozen=True)
class RadiusEvaluation:
    x: np.ndarray
    rho_x: float
    rho: ExtReal
    s_x: np.ndarray
    gamma: float
    varrho: ExtReal

    def to_json(self):
        return {"x": self.x.tolist(), "rho_x": self.rho_x, "rho": self.rho.to_json(),
                "s_x": self.s_x.tolist(), "gamma": self.gamma,
                "varrho": self.varrho.to_json()}


def check_gamma(gamma: float) -> None:
    if not GAMMA_MIN <= gamma < 1.0:
        raise GammaOutOfRange(f"gamma={gamma} outside [{GAMMA_MIN:.10f}, 1)")


def _projection(model: SetModel, x):
    x = as_point(x)
    if contains(model, x):
        raise NotInComplement(f"{x.tolist()} lies in S")
    d, cands = distance_projection(model, x)
    return x, d.value, cands


def rho(model: SetModel, x, r_fn: RadiusFnSpec | None = None):
    """(min of r(s)/2 over the projections of x, a minimising projection s_x).

    Equal minimisers are broken lexicographically on coordinates.
    """
    r_fn = r_fn or model.radius_fn
    _, _, cands = _projection(model, x)
    return _rho_from(cands, r_fn)


def _rho_from(cands, r_fn):
    vals = [r_fn(s) for s in cands]
    best = min(vals)
    if best.is_inf:
        tied = cands
    else:
        tol = 1e-12 * max(1.0, best.value)
        tied = [s for s, v in zip(cands, vals) if not v.is_inf and v.value <= best.value + tol]
    s_x = min(tied, key=lex_key)
    return best.scale(0.5), s_x


def varrho_gamma(gamma: float, rho_x: float, rho) -> ExtReal:
    """max{gamma*rho_x, sqrt(gamma^2 rho_x^2 + 4 rho^2)/2}; +inf iff rho = +inf."""
    rho = ExtReal.of(rho)
    if rho.is_inf:
        return INF
    a = gamma * rho_x
    b = 0.5 * math.sqrt(a * a + 4.0 * rho.value * rho.value)
    return extreal_max(a, b)


def is_case_one(gamma: float, rho_x: float, rho) -> bool:
    """Whether gamma*rho_x attains the max (3 gamma^2 rho_x^2 >= 4 rho^2)."""
    rho = ExtReal.of(rho)
    if rho.is_inf:
        return False
    return 3.0 * (gamma * rho_x) ** 2 >= 4.0 * rho.value ** 2


def evaluate(model: SetModel, gamma: float, x, r_fn: RadiusFnSpec | None = None,
             check: bool = True) -> RadiusEvaluation:
    """All radius quantities at x.  ``check=False`` admits gamma outside the theorem's range."""
    if check:
        check_gamma(gamma)
    r_fn = r_fn or model.radius_fn
    x, d, cands = _projection(model, x)
    rh, s_x = _rho_from(cands, r_fn)
    return RadiusEvaluation(x, d, rh, s_x, gamma, varrho_gamma(gamma, d, rh))


def lsc_spot_check(model: SetModel, gamma: float, x, k: int = 16,
                   r_fn: RadiusFnSpec | None = None, seed: int = 0) -> bool:
    """Refutation test for lower semicontinuity of varrho_gamma at x.

    Samples ``k`` points in B(x; delta) n S^c at three dyadic levels of delta
    and requires each sampled value >= varrho_gamma(x) - 10*delta.  At an
    infinite value the neighbours must exceed 1/delta instead.
    """
    x = as_point(x)
    base = evaluate(model, gamma, x, r_fn)
    rng = np.random.default_rng(seed)
    delta0 = 0.5 * base.rho_x
    for level in range(3):
        delta = delta0 / 2 ** level
        ang = rng.uniform(0, 2 * math.pi, k)
        rad = delta * np.sqrt(rng.uniform(0, 1, k))
        pts = x + np.stack([rad * np.cos(ang), rad * np.sin(ang)], -1)
        for p in pts:
            if contains(model, p):
                continue
            v = evaluate(model, gamma, p, r_fn).varrho
            if base.varrho.is_inf:
                if not v.is_inf and v.value < 1.0 / delta:
                    return False
            elif not v.is_inf and v.value < base.varrho.value - 10.0 * delta:
                return False
    return True
