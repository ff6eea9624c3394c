"""Scalar and planar primitives: extended reals, points, balls, tolerances."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

# Smallest admissible gamma, 1/(2*sqrt(3) - 2).
GAMMA_MIN = 1.0 / (2.0 * math.sqrt(3.0) - 2.0)


@functools.total_ordering
@dataclass(frozen=True)
class ExtReal:
    """A value in [0, +inf]. ``value is None`` encodes +inf.

    Kept distinct from ``float('inf')`` so that callers have to branch on
    :attr:`is_inf` instead of letting an infinity leak into arithmetic.
    """

    value: float | None

    def __post_init__(self):
        if self.value is not None:
            v = float(self.value)
            if math.isnan(v) or math.isinf(v):
                raise ValueError(f"finite ExtReal expected, got {self.value!r}")
            object.__setattr__(self, "value", v)

    @classmethod
    def inf(cls) -> "ExtReal":
        return cls(None)

    @classmethod
    def of(cls, v) -> "ExtReal":
        """Coerce a float, ``math.inf``, ``"inf"`` or ExtReal."""
        if isinstance(v, ExtReal):
            return v
        if isinstance(v, str):
            if v.strip().lower() in ("inf", "+inf", "infinity"):
                return cls(None)
            v = float(v)
        if math.isinf(v) and v > 0:
            return cls(None)
        return cls(float(v))

    @property
    def is_inf(self) -> bool:
        return self.value is None

    def __float__(self):
        return math.inf if self.value is None else self.value

    def __lt__(self, other):
        other = ExtReal.of(other)
        if self.is_inf:
            return False
        if other.is_inf:
            return True
        return self.value < other.value

    def __eq__(self, other):
        if not isinstance(other, (ExtReal, int, float, str)):
            return NotImplemented
        other = ExtReal.of(other)
        return self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def scale(self, k: float) -> "ExtReal":
        """Multiply by a positive constant; +inf stays +inf."""
        if k <= 0:
            raise ValueError("scale factor must be positive")
        return self if self.is_inf else ExtReal(self.value * k)

    def __repr__(self):
        return "ExtReal(+inf)" if self.is_inf else f"ExtReal({self.value!r})"

    def to_json(self):
        return "inf" if self.is_inf else self.value


INF = ExtReal.inf()


def extreal_max(a, b) -> ExtReal:
    a, b = ExtReal.of(a), ExtReal.of(b)
    return a if a >= b else b


def extreal_min(a, b) -> ExtReal:
    a, b = ExtReal.of(a), ExtReal.of(b)
    return a if a <= b else b


def extreal_compare(a, b) -> int:
    """Return -1, 0 or 1 like the old ``cmp``."""
    a, b = ExtReal.of(a), ExtReal.of(b)
    if a == b:
        return 0
    return -1 if a < b else 1


def as_point(p) -> np.ndarray:
    arr = np.asarray(p, dtype=float).reshape(-1)
    if arr.shape != (2,):
        raise ValueError(f"expected a planar point, got shape {arr.shape}")
    return arr


def unit_vector(v, eps_unit: float = 1e-12) -> np.ndarray:
    """Normalise ``v``; raises on the zero vector."""
    v = as_point(v)
    n = math.hypot(v[0], v[1])
    if n == 0.0:
        raise ValueError("cannot normalise the zero vector")
    u = v / n
    assert abs(math.hypot(u[0], u[1]) - 1.0) <= max(eps_unit, 4e-16)
    return u


def is_unit(v, eps_unit: float = 1e-12) -> bool:
    v = as_point(v)
    return abs(math.hypot(v[0], v[1]) - 1.0) <= eps_unit


def angle_of(v) -> float:
    """Angle in [0, 2pi)."""
    return math.atan2(v[1], v[0]) % (2.0 * math.pi)


def direction(theta: float) -> np.ndarray:
    return np.array([math.cos(theta), math.sin(theta)])


def perp(v) -> np.ndarray:
    return np.array([-v[1], v[0]])


def lex_key(p, tol: float = 1e-9):
    """Sort key comparing coordinates lexicographically up to ``tol``."""
    return tuple(int(round(c / tol)) for c in p)


@dataclass(frozen=True)
class ClosedBall:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError(f"ball radius must be positive and finite, got {self.radius}")

    def contains(self, p, tol: float = 0.0) -> bool:
        return float(np.linalg.norm(as_point(p) - self.center)) <= self.radius + tol

    def to_json(self):
        return {"kind": "ball", "center": self.center.tolist(), "radius": self.radius}


@dataclass(frozen=True)
class AsymptoticBallFamily:
    """The family {B(anchor + d*direction; d) : d > 0}."""

    anchor: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "anchor", as_point(self.anchor))
        object.__setattr__(self, "direction", as_point(self.direction))
        if not is_unit(self.direction, 1e-9):
            raise ValueError("family direction must be a unit vector")

    def member(self, delta: float) -> ClosedBall:
        return ClosedBall(self.anchor + delta * self.direction, delta)

    def to_json(self):
        return {"kind": "family", "anchor": self.anchor.tolist(),
                "direction": self.direction.tolist()}


@dataclass(frozen=True)
class ToleranceConfig:
    eps_unit: float = 1e-12
    eps_strict: float = 1e-9
    eps_geom: float = 1e-9
    grid_tol: float = 2e-3

    def __post_init__(self):
        vals = (self.eps_unit, self.eps_strict, self.eps_geom, self.grid_tol)
        if min(vals) <= 0:
            raise ValueError("tolerances must be positive")
        if not self.eps_strict <= self.eps_geom <= self.grid_tol:
            raise ValueError("need eps_strict <= eps_geom <= grid_tol")


DEFAULT_TOL = ToleranceConfig()


def opposite_points(ball: ClosedBall, direction) -> tuple[np.ndarray, np.ndarray]:
    """Two diametrically opposite points of ``ball`` along ``direction``."""
    u = as_point(direction)
    return ball.center - ball.radius * u, ball.center + ball.radius * u


def diametric_product(s, y, z):
    """<s - y, s - z> for one point or an (n, 2) array of points.

    Negative inside the ball with diameter [y, z], zero on its sphere,
    positive outside.
    """
    s = np.asarray(s, dtype=float)
    return np.sum((s - y) * (s - z), axis=-1)
