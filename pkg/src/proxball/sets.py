"""Closed planar sets built from simple primitives, and their oracles.

A scene is the union of two kinds of pieces:

* the *disk part*: if any ``disk_complement`` primitive is present, the
  complement of the union of the open disks.  With ``fill_gaps`` the bounded
  components enclosed by the disks (and the arcs bounding them) are moved
  into the complement, i.e. the disk part becomes ``R^2 \\ int(K u H)`` where
  ``K`` is the union of closed disks and ``H`` the closure of its holes;
* every ``half_plane``, ``ray``, ``segment`` and ``point`` primitive.

The disk part is handled through its boundary, stored as a list of circular
arcs, so distances and projections are exact up to rounding.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Union

import numpy as np
import shapely
from shapely.geometry import LineString
from shapely.ops import polygonize, unary_union

from .core import (DEFAULT_TOL, INF, ExtReal, ToleranceConfig, angle_of, as_point,
                   direction, lex_key, perp, unit_vector)
from .errors import (DegenerateProjection, EmptySet, InvalidPrimitive,
                     NotBoundary, NoValidNormal)

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# scene description

@dataclass(frozen=True)
class DiskComplement:
    center: np.ndarray
    radius: float
    kind = "disk_complement"

    def to_json(self):
        return {"type": self.kind, "center": self.center.tolist(), "radius": self.radius}


@dataclass(frozen=True)
class Ray:
    origin: np.ndarray
    direction: np.ndarray
    kind = "ray"

    def to_json(self):
        return {"type": self.kind, "origin": self.origin.tolist(),
                "direction": self.direction.tolist()}


@dataclass(frozen=True)
class Segment:
    a: np.ndarray
    b: np.ndarray
    kind = "segment"

    def to_json(self):
        return {"type": self.kind, "a": self.a.tolist(), "b": self.b.tolist()}


@dataclass(frozen=True)
class HalfPlane:
    """The closed half-plane {p : <normal, p> <= offset}."""

    normal: np.ndarray
    offset: float
    kind = "half_plane"

    def to_json(self):
        return {"type": self.kind, "normal": self.normal.tolist(), "offset": self.offset}


@dataclass(frozen=True)
class PointPrim:
    p: np.ndarray
    kind = "point"

    def to_json(self):
        return {"type": self.kind, "p": self.p.tolist()}


Primitive = Union[DiskComplement, Ray, Segment, HalfPlane, PointPrim]


def disk_complement(center, radius) -> DiskComplement:
    radius = float(radius)
    if not (radius > 0 and math.isfinite(radius)):
        raise InvalidPrimitive(f"disk radius must be positive, got {radius}")
    return DiskComplement(as_point(center), radius)


def ray(origin, direction) -> Ray:
    try:
        u = unit_vector(direction)
    except ValueError as exc:
        raise InvalidPrimitive("ray direction must be nonzero") from exc
    return Ray(as_point(origin), u)


def segment(a, b) -> Segment:
    a, b = as_point(a), as_point(b)
    if np.allclose(a, b, rtol=0, atol=1e-12):
        raise InvalidPrimitive("segment endpoints coincide; use a point primitive")
    return Segment(a, b)


def half_plane(normal, offset) -> HalfPlane:
    n = as_point(normal)
    norm = float(np.linalg.norm(n))
    if norm == 0.0:
        raise InvalidPrimitive("half-plane normal must be nonzero")
    return HalfPlane(n / norm, float(offset) / norm)


def point(p) -> PointPrim:
    return PointPrim(as_point(p))


@dataclass(frozen=True)
class RadiusFnSpec:
    """r(s) = value (constant), or max(a + b*|s - anchor|, floor)."""

    kind: str = "constant"
    value: ExtReal = ExtReal(1.0)
    a: float = 0.0
    b: float = 0.0
    anchor: np.ndarray = field(default_factory=lambda: np.zeros(2))
    floor: float = 0.0

    def __post_init__(self):
        if self.kind == "constant":
            object.__setattr__(self, "value", ExtReal.of(self.value))
            if not self.value.is_inf and self.value.value <= 0:
                raise InvalidPrimitive("constant radius must be positive")
        elif self.kind == "affine_distance":
            object.__setattr__(self, "anchor", as_point(self.anchor))
            if not self.floor > 0:
                raise InvalidPrimitive("affine_distance radius needs floor > 0")
        else:
            raise InvalidPrimitive(f"unknown radius function kind {self.kind!r}")

    @classmethod
    def constant(cls, v) -> "RadiusFnSpec":
        return cls(kind="constant", value=ExtReal.of(v))

    @classmethod
    def affine_distance(cls, a, b, anchor, floor) -> "RadiusFnSpec":
        return cls(kind="affine_distance", a=float(a), b=float(b),
                   anchor=as_point(anchor), floor=float(floor))

    def __call__(self, s) -> ExtReal:
        if self.kind == "constant":
            return self.value
        d = float(np.linalg.norm(as_point(s) - self.anchor))
        return ExtReal(max(self.a + self.b * d, self.floor))

    def values(self, pts: np.ndarray) -> np.ndarray:
        """Vectorised r over an (n, 2) array; +inf as ``math.inf``."""
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        if self.kind == "constant":
            return np.full(len(pts), float(self.value))
        d = np.linalg.norm(pts - self.anchor, axis=1)
        return np.maximum(self.a + self.b * d, self.floor)

    def arc_minimizer(self, center, radius, t0, span) -> float:
        """Angle on the arc {center + radius*u(t) : t in [t0, t0+span]} minimising r."""
        if self.kind == "constant" or self.b == 0.0:
            return t0
        rel = self.anchor - center
        if np.linalg.norm(rel) < 1e-15:
            return t0
        target = angle_of(rel) if self.b > 0 else angle_of(-rel)
        if (target - t0) % TWO_PI <= span:
            return target
        ends = [t0, t0 + span]
        vals = [float(self(center + radius * direction(t))) for t in ends]
        return ends[int(np.argmin(vals))]

    def to_json(self):
        if self.kind == "constant":
            return {"constant": self.value.to_json()}
        return {"affine_distance": {"a": self.a, "b": self.b,
                                    "anchor": self.anchor.tolist(), "floor": self.floor}}

    @classmethod
    def from_json(cls, d) -> "RadiusFnSpec":
        if "constant" in d:
            return cls.constant(d["constant"])
        if "affine_distance" in d:
            p = d["affine_distance"]
            return cls.affine_distance(p["a"], p["b"], p["anchor"], p["floor"])
        raise InvalidPrimitive(f"unrecognised radius_fn {d!r}")


@dataclass(frozen=True)
class SceneSpec:
    primitives: tuple
    fill_gaps: bool = False
    radius_fn: RadiusFnSpec = field(default_factory=RadiusFnSpec)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "primitives", tuple(self.primitives))

    def to_json(self):
        return {"name": self.name, "dimension": 2,
                "primitives": [p.to_json() for p in self.primitives],
                "fill_gaps": self.fill_gaps, "radius_fn": self.radius_fn.to_json()}

    def with_radius_fn(self, radius_fn: RadiusFnSpec) -> "SceneSpec":
        return SceneSpec(self.primitives, self.fill_gaps, radius_fn, self.name)


_PARSERS = {
    "disk_complement": lambda d: disk_complement(d["center"], d["radius"]),
    "ray": lambda d: ray(d["origin"], d["direction"]),
    "segment": lambda d: segment(d["a"], d["b"]),
    "half_plane": lambda d: half_plane(d["normal"], d["offset"]),
    "point": lambda d: point(d["p"]),
}


def scene_from_json(d: dict) -> SceneSpec:
    if d.get("dimension", 2) != 2:
        raise InvalidPrimitive("only planar scenes (dimension 2) are supported")
    prims = []
    for rec in d.get("primitives", []):
        kind = rec.get("type")
        if kind not in _PARSERS:
            raise InvalidPrimitive(f"unknown primitive type {kind!r}")
        try:
            prims.append(_PARSERS[kind](rec))
        except KeyError as exc:
            raise InvalidPrimitive(f"{kind} record is missing field {exc}") from exc
    radius_fn = RadiusFnSpec.from_json(d.get("radius_fn", {"constant": 1.0}))
    return SceneSpec(tuple(prims), bool(d.get("fill_gaps", False)), radius_fn,
                     str(d.get("name", "")))


BUNDLED = ("example-2.1", "example-2.2")


def load_scene(path_or_name) -> SceneSpec:
    """Load a scene file, or a bundled scene by name (``example-2.2``)."""
    name = str(path_or_name)
    stem = Path(name).name.removesuffix(".scene")
    p = Path(name)
    if p.is_file():
        text = p.read_text()
    elif stem in BUNDLED:
        text = resources.files("proxball.scenes").joinpath(f"{stem}.scene").read_text()
    else:
        raise FileNotFoundError(name)
    return scene_from_json(json.loads(text))


def save_scene(scene: SceneSpec, path) -> None:
    Path(path).write_text(json.dumps(scene.to_json(), indent=2) + "\n")


# ---------------------------------------------------------------------------
# model

@dataclass(frozen=True)
class BoundaryPoint:
    point: np.ndarray
    supporting_primitives: tuple
    in_bdry_int: bool


@dataclass(frozen=True)
class NormalFan:
    """Generators of a proximal normal cone plus its angular arcs.

    ``arcs`` holds ``(theta_start, span)`` pairs describing the cone's
    two-dimensional part; an empty tuple means the cone is just the rays
    spanned by the generators.
    """

    generators: tuple
    realization_radii: tuple
    arcs: tuple = ()

    @property
    def is_cone(self) -> bool:
        return bool(self.arcs)

    def sweep(self, n: int = 32) -> list:
        """``n`` directions strictly inside each arc."""
        out = []
        for t0, span in self.arcs:
            for k in range(1, n + 1):
                out.append(direction(t0 + span * k / (n + 1)))
        return out


@dataclass(frozen=True, eq=False)
class SetModel:
    scene: SceneSpec
    tol: ToleranceConfig
    disk_ids: tuple
    disk_c: np.ndarray          # (m, 2)
    disk_r: np.ndarray          # (m,)
    arc_c: np.ndarray           # (A, 2)
    arc_r: np.ndarray           # (A,)
    arc_t0: np.ndarray          # (A,)
    arc_span: np.ndarray        # (A,)
    arc_prim: np.ndarray        # (A,) primitive index
    vertices: np.ndarray        # (V, 2) arc endpoints
    holes: object               # shapely geometry or None
    window: tuple               # (xmin, xmax, ymin, ymax)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def has_disks(self) -> bool:
        return len(self.disk_r) > 0

    @property
    def has_interior(self) -> bool:
        return self.has_disks or any(isinstance(p, HalfPlane) for p in self.scene.primitives)

    @property
    def radius_fn(self) -> RadiusFnSpec:
        return self.scene.radius_fn


def _angle_in(theta, t0, span, slack=0.0):
    return (theta - t0) % TWO_PI <= span + slack


def _circle_arcs(i, c, r, tol):
    """Uncovered arcs of circle ``i`` as (t0, span) pairs plus vertex angles."""
    eps = tol.eps_geom
    ci, ri = c[i], r[i]
    covered = []          # open intervals (start, width)
    breaks = []
    for j in range(len(r)):
        if j == i:
            continue
        d = float(np.linalg.norm(c[j] - ci))
        rj = r[j]
        if d <= eps and abs(ri - rj) <= eps:
            if j < i:
                return [], []
            continue
        if d + ri < rj - eps:
            return [], []
        if d + ri <= rj + eps:
            # internally tangent from inside j: circle j carries the contact point
            return [], []
        phi = angle_of(c[j] - ci)
        if d >= ri + rj - eps:
            if d <= ri + rj + eps:
                breaks.append(phi)
            continue
        if d + rj <= ri + eps:
            if d + rj >= ri - eps:
                breaks.append(phi)
            continue
        cos_a = (d * d + ri * ri - rj * rj) / (2.0 * d * ri)
        alpha = math.acos(min(1.0, max(-1.0, cos_a)))
        covered.append(((phi - alpha) % TWO_PI, 2.0 * alpha))
        breaks.extend([(phi - alpha) % TWO_PI, (phi + alpha) % TWO_PI])

    def is_covered(theta):
        return any(0.0 < (theta - s) % TWO_PI < w for s, w in covered)

    if not breaks:
        return ([(0.0, TWO_PI)] if not is_covered(0.0) else []), []
    breaks = sorted(set(round(b, 15) for b in breaks))
    pieces = []
    for k, b in enumerate(breaks):
        nxt = breaks[(k + 1) % len(breaks)]
        span = (nxt - b) % TWO_PI
        if span == 0.0:
            span = TWO_PI
        if span < 1e-12:
            continue
        if not is_covered(b + span / 2):
            pieces.append((b, span))
    return pieces, breaks


def _hole_geometry(c, r, tol):
    lines = []
    for i in range(len(r)):
        for j in range(i + 1, len(r)):
            if np.linalg.norm(c[i] - c[j]) <= r[i] + r[j] + tol.eps_geom:
                lines.append(LineString([tuple(c[i]), tuple(c[j])]))
    if len(lines) < 3:
        return None
    faces = list(polygonize(unary_union(lines)))
    if not faces:
        return None
    return unary_union(faces)


def _window(scene: SceneSpec):
    pts = []
    for p in scene.primitives:
        if isinstance(p, DiskComplement):
            pts += [p.center - p.radius, p.center + p.radius]
        elif isinstance(p, Ray):
            pts.append(p.origin)
        elif isinstance(p, Segment):
            pts += [p.a, p.b]
        elif isinstance(p, HalfPlane):
            pts.append(p.normal * p.offset)
        elif isinstance(p, PointPrim):
            pts.append(p.p)
    pts = np.array(pts)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    mid = (lo + hi) / 2
    half = max(float((hi - lo).max()) / 2, 0.5) + 2.0
    return (mid[0] - half, mid[0] + half, mid[1] - half, mid[1] + half)


def build_model(scene: SceneSpec, tol: ToleranceConfig = DEFAULT_TOL) -> SetModel:
    if not scene.primitives:
        raise EmptySet("scene has no primitives")
    disk_ids = tuple(k for k, p in enumerate(scene.primitives) if isinstance(p, DiskComplement))
    c = np.array([scene.primitives[k].center for k in disk_ids]).reshape(-1, 2)
    r = np.array([scene.primitives[k].radius for k in disk_ids], dtype=float)
    holes = _hole_geometry(c, r, tol) if len(r) >= 3 else None

    def outside_probe_in_s(q):
        d = np.linalg.norm(c - q, axis=1)
        if np.any(d <= r):
            return False
        if scene.fill_gaps and holes is not None and shapely.contains_xy(holes, q[0], q[1]):
            return False
        return True

    arcs = []
    for i in range(len(r)):
        pieces, _ = _circle_arcs(i, c, r, tol)
        for t0, span in pieces:
            tm = t0 + span / 2
            probe = c[i] + (r[i] * (1 + 1e-6)) * direction(tm)
            if outside_probe_in_s(probe):
                arcs.append((c[i][0], c[i][1], r[i], t0, span, disk_ids[i]))
    arcs = np.array(arcs, dtype=float).reshape(-1, 6)
    verts = []
    for cx, cy, rr, t0, span, _ in arcs:
        if span < TWO_PI:
            verts.append((cx + rr * math.cos(t0), cy + rr * math.sin(t0)))
            verts.append((cx + rr * math.cos(t0 + span), cy + rr * math.sin(t0 + span)))
    verts = np.array(verts).reshape(-1, 2)
    if len(verts):
        keys = {}
        for v in verts:
            keys.setdefault(lex_key(v, 1e-9), v)
        verts = np.array(list(keys.values()))
    return SetModel(scene=scene, tol=tol, disk_ids=disk_ids, disk_c=c, disk_r=r,
                    arc_c=arcs[:, :2].copy(), arc_r=arcs[:, 2].copy(),
                    arc_t0=arcs[:, 3].copy(), arc_span=arcs[:, 4].copy(),
                    arc_prim=arcs[:, 5].astype(int), vertices=verts, holes=holes,
                    window=_window(scene))


# ---------------------------------------------------------------------------
# per-piece nearest points (vectorised over query points)

def _arc_nearest(model: SetModel, P: np.ndarray):
    """Distances (n, A) and nearest points (n, A, 2) from P to every S-arc."""
    c, r, t0, span = model.arc_c, model.arc_r, model.arc_t0, model.arc_span
    V = P[:, None, :] - c[None, :, :]
    rho = np.hypot(V[..., 0], V[..., 1])
    phi = np.arctan2(V[..., 1], V[..., 0])
    inside = ((phi - t0[None, :]) % TWO_PI) <= span[None, :] + 1e-15
    radial_pt = c[None] + r[None, :, None] * np.stack([np.cos(phi), np.sin(phi)], -1)
    radial_d = np.where(inside, np.abs(rho - r[None, :]), np.inf)
    e0 = c + r[:, None] * np.stack([np.cos(t0), np.sin(t0)], -1)
    e1 = c + r[:, None] * np.stack([np.cos(t0 + span), np.sin(t0 + span)], -1)
    d0 = np.linalg.norm(P[:, None, :] - e0[None], axis=-1)
    d1 = np.linalg.norm(P[:, None, :] - e1[None], axis=-1)
    best = np.minimum(radial_d, np.minimum(d0, d1))
    pts = np.where((radial_d <= np.minimum(d0, d1))[..., None], radial_pt,
                   np.where((d0 <= d1)[..., None], e0[None], e1[None]))
    return best, pts


def _other_nearest(prim, P: np.ndarray):
    if isinstance(prim, Ray):
        t = np.maximum(0.0, (P - prim.origin) @ prim.direction)
        q = prim.origin + t[:, None] * prim.direction
    elif isinstance(prim, Segment):
        ab = prim.b - prim.a
        t = np.clip((P - prim.a) @ ab / (ab @ ab), 0.0, 1.0)
        q = prim.a + t[:, None] * ab
    elif isinstance(prim, PointPrim):
        q = np.broadcast_to(prim.p, P.shape).copy()
    elif isinstance(prim, HalfPlane):
        excess = np.maximum(0.0, P @ prim.normal - prim.offset)
        q = P - excess[:, None] * prim.normal
    else:
        raise TypeError(prim)
    return np.linalg.norm(P - q, axis=1), q


def _disk_membership(model: SetModel, P: np.ndarray) -> np.ndarray:
    eps = model.tol.eps_geom
    dist = np.linalg.norm(P[:, None, :] - model.disk_c[None], axis=-1)
    in_open = np.any(dist < model.disk_r[None] - eps, axis=1)
    near = np.any(np.abs(dist - model.disk_r[None]) <= eps, axis=1)
    out = ~in_open & ~near
    if model.scene.fill_gaps and model.holes is not None:
        out &= ~shapely.contains_xy(model.holes, P[:, 0], P[:, 1])
    on_arc = np.zeros(len(P), dtype=bool)
    idx = np.flatnonzero(~in_open & near)
    if len(idx) and len(model.arc_r):
        d, _ = _arc_nearest(model, P[idx])
        on_arc[idx] = d.min(axis=1) <= eps
    return out | on_arc


def contains(model: SetModel, p) -> bool | np.ndarray:
    """Membership in S; boundary points count as inside.  Accepts (2,) or (n, 2)."""
    P = np.asarray(p, dtype=float)
    single = P.ndim == 1
    P = P.reshape(-1, 2)
    eps = model.tol.eps_geom
    res = np.zeros(len(P), dtype=bool)
    if model.has_disks:
        res |= _disk_membership(model, P)
    for prim in model.scene.primitives:
        if isinstance(prim, DiskComplement):
            continue
        if isinstance(prim, HalfPlane):
            res |= P @ prim.normal <= prim.offset + eps
        else:
            res |= _other_nearest(prim, P)[0] <= eps
    return bool(res[0]) if single else res


def distance(model: SetModel, p) -> float | np.ndarray:
    """d_S, vectorised."""
    P = np.asarray(p, dtype=float)
    single = P.ndim == 1
    P = P.reshape(-1, 2)
    d = np.full(len(P), np.inf)
    if model.has_disks:
        inside = _disk_membership(model, P)
        if len(model.arc_r):
            d = np.minimum(d, _arc_nearest(model, P)[0].min(axis=1))
        d[inside] = 0.0
    for prim in model.scene.primitives:
        if not isinstance(prim, DiskComplement):
            d = np.minimum(d, _other_nearest(prim, P)[0])
    return float(d[0]) if single else d


def distance_projection(model: SetModel, x):
    """(d_S(x), candidate nearest points).

    The candidates contain every isolated nearest point; when a whole arc is
    at distance d (x at its circle's centre) they contain the arc's
    r-minimiser plus 8 equispaced representatives.
    """
    x = as_point(x)
    eps = model.tol.eps_geom
    if contains(model, x):
        return ExtReal(0.0), [x.copy()]
    P = x[None]
    cands = []          # (distance, point)
    continuum = []      # arc indices centred at x
    if len(model.arc_r):
        d, q = _arc_nearest(model, P)
        for a in range(len(model.arc_r)):
            if np.linalg.norm(x - model.arc_c[a]) <= 1e-12:
                continuum.append(a)
            cands.append((float(d[0, a]), q[0, a]))
            # keep both ends too so that ties at vertices are never lost
            for t in (model.arc_t0[a], model.arc_t0[a] + model.arc_span[a]):
                e = model.arc_c[a] + model.arc_r[a] * direction(t)
                cands.append((float(np.linalg.norm(e - x)), e))
    for prim in model.scene.primitives:
        if isinstance(prim, DiskComplement):
            continue
        dd, qq = _other_nearest(prim, P)
        cands.append((float(dd[0]), qq[0]))
    dmin = min(c[0] for c in cands)
    slack = 1e-9 * max(1.0, dmin)
    out = [q for dist, q in cands if dist <= dmin + slack]
    for a in continuum:
        if abs(model.arc_r[a] - dmin) > slack:
            continue
        t0, span = model.arc_t0[a], model.arc_span[a]
        try:
            tm = model.radius_fn.arc_minimizer(model.arc_c[a], model.arc_r[a], t0, span)
        except Exception as exc:  # pragma: no cover - defensive
            raise DegenerateProjection(str(exc)) from exc
        if not math.isfinite(tm):
            raise DegenerateProjection("radius minimiser over the projecting arc failed")
        reps = [tm] + [t0 + span * k / 8 for k in range(8 if span >= TWO_PI else 9)]
        out += [model.arc_c[a] + model.arc_r[a] * direction(t) for t in reps]
    uniq = {}
    for q in out:
        uniq.setdefault(lex_key(q), np.asarray(q, dtype=float))
    return ExtReal(dmin), [uniq[k] for k in sorted(uniq)]


# ---------------------------------------------------------------------------
# boundary structure

def _in_interior(model: SetModel, s: np.ndarray) -> bool:
    eps = model.tol.eps_geom
    for prim in model.scene.primitives:
        if isinstance(prim, HalfPlane) and s @ prim.normal < prim.offset - eps:
            return True
    if model.has_disks:
        dist = np.linalg.norm(model.disk_c - s, axis=1)
        if np.all(dist > model.disk_r + eps):
            if not (model.scene.fill_gaps and model.holes is not None
                    and shapely.contains_xy(model.holes, s[0], s[1])):
                return True
    return False


def _supports(model: SetModel, s: np.ndarray):
    """Primitive ids whose boundary passes through s, and whether any is 2-D."""
    eps = model.tol.eps_geom
    ids, two_d = [], False
    if len(model.arc_r):
        d, _ = _arc_nearest(model, s[None])
        for a in np.flatnonzero(d[0] <= eps):
            ids.append(int(model.arc_prim[a]))
            two_d = True
    for k, prim in enumerate(model.scene.primitives):
        if isinstance(prim, DiskComplement):
            continue
        if isinstance(prim, HalfPlane):
            if abs(s @ prim.normal - prim.offset) <= eps:
                ids.append(k)
                two_d = True
        elif _other_nearest(prim, s[None])[0][0] <= eps:
            ids.append(k)
    return tuple(sorted(set(ids))), two_d


def classify(model: SetModel, s) -> BoundaryPoint:
    """Wrap a point of bdry S as a :class:`BoundaryPoint`."""
    s = as_point(s)
    ids, two_d = _supports(model, s)
    if not ids or _in_interior(model, s):
        raise NotBoundary(f"{s.tolist()} is not a boundary point of S")
    return BoundaryPoint(s, ids, two_d)


def _line_window_clip(p0, u, window):
    """Parameter interval of {p0 + t u} inside the window box."""
    xmin, xmax, ymin, ymax = window
    lo, hi = -np.inf, np.inf
    for k, (a, b) in enumerate(((xmin, xmax), (ymin, ymax))):
        if abs(u[k]) < 1e-15:
            if not a <= p0[k] <= b:
                return None
            continue
        t1, t2 = (a - p0[k]) / u[k], (b - p0[k]) / u[k]
        lo, hi = max(lo, min(t1, t2)), min(hi, max(t1, t2))
    return (lo, hi) if lo < hi else None


def _boundary_candidates(model: SetModel, n: int):
    """Raw points on bdry S (arrays), before interior filtering."""
    pieces = []   # (length, sampler)
    for a in range(len(model.arc_r)):
        c, r, t0, span = model.arc_c[a], model.arc_r[a], model.arc_t0[a], model.arc_span[a]
        pieces.append((r * span, lambda k, c=c, r=r, t0=t0, span=span:
                       c + r * np.stack([np.cos(t0 + span * np.linspace(0, 1, k)),
                                         np.sin(t0 + span * np.linspace(0, 1, k))], -1)))
    fixed = [model.vertices]
    for prim in model.scene.primitives:
        if isinstance(prim, Ray):
            iv = _line_window_clip(prim.origin, prim.direction, model.window)
            fixed.append(prim.origin[None])
            if iv and iv[1] > 0:
                lo, hi = max(iv[0], 0.0), iv[1]
                pieces.append((hi - lo, lambda k, p=prim, lo=lo, hi=hi:
                               p.origin + np.linspace(lo, hi, k)[:, None] * p.direction))
        elif isinstance(prim, Segment):
            fixed.append(np.array([prim.a, prim.b]))
            L = float(np.linalg.norm(prim.b - prim.a))
            pieces.append((L, lambda k, p=prim: p.a + np.linspace(0, 1, k)[:, None] * (p.b - p.a)))
        elif isinstance(prim, PointPrim):
            fixed.append(prim.p[None])
        elif isinstance(prim, HalfPlane):
            foot = prim.normal * prim.offset
            u = perp(prim.normal)
            iv = _line_window_clip(foot, u, model.window)
            fixed.append(foot[None])
            if iv:
                pieces.append((iv[1] - iv[0], lambda k, f=foot, u=u, iv=iv:
                               f + np.linspace(iv[0], iv[1], k)[:, None] * u))
    total = sum(L for L, _ in pieces) or 1.0
    pts = [f.reshape(-1, 2) for f in fixed]
    for L, sampler in pieces:
        k = int(math.ceil(n * L / total)) + 2
        pts.append(sampler(k))
    return np.concatenate(pts, axis=0)


def boundary_array(model: SetModel, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Cached (points, in_bdry_int) arrays of at least ``n`` boundary samples."""
    key = ("bdry", n)
    if key not in model._cache:
        raw = _boundary_candidates(model, n)
        keep, flags, seen = [], [], set()
        for s in raw:
            k = lex_key(s, 1e-10)
            if k in seen:
                continue
            seen.add(k)
            ids, two_d = _supports(model, s)
            if ids and not _in_interior(model, s):
                keep.append(s)
                flags.append(two_d)
        model._cache[key] = (np.array(keep).reshape(-1, 2), np.array(flags, dtype=bool))
    return model._cache[key]


def sample_boundary(model: SetModel, n: int) -> list[BoundaryPoint]:
    """At least ``n`` boundary points, always including vertices and endpoints."""
    if n < 1:
        raise ValueError("n must be >= 1")
    pts, _ = boundary_array(model, n)
    return [classify(model, s) for s in pts]


def sample_interior(model: SetModel, n: int, seed: int = 0) -> np.ndarray:
    """Up to ``n`` points of int S inside the model window (rejection sampling)."""
    key = ("int", n, seed)
    if key not in model._cache:
        rng = np.random.default_rng(seed)
        xmin, xmax, ymin, ymax = model.window
        got = []
        for _ in range(50 if model.has_interior else 0):
            P = rng.uniform([xmin, ymin], [xmax, ymax], size=(4 * n, 2))
            P = P[contains(model, P)]
            P = P[_interior_mask(model, P) > 0]
            got.append(P)
            if sum(len(g) for g in got) >= n:
                break
        model._cache[key] = np.concatenate(got)[:n] if got else np.zeros((0, 2))
    return model._cache[key]


def _interior_mask(model: SetModel, P: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """1.0 where the 4 axis probes at distance ``h`` all stay in S, else 0.0."""
    ok = np.ones(len(P), dtype=bool)
    for v in ((h, 0), (-h, 0), (0, h), (0, -h)):
        ok &= contains(model, P + np.array(v))
    return ok.astype(float)


def sample_set(model: SetModel, n_boundary: int = 10_000, n_interior: int = 1_000) -> np.ndarray:
    """Boundary plus interior samples of S used for every sampled check."""
    key = ("set", n_boundary, n_interior)
    if key not in model._cache:
        b, _ = boundary_array(model, n_boundary)
        model._cache[key] = np.concatenate([b, sample_interior(model, n_interior)])
    return model._cache[key]


# ---------------------------------------------------------------------------
# normals

def support(model: SetModel, zeta) -> float:
    """sup { <zeta, x> : x in S }, possibly +inf."""
    zeta = as_point(zeta)
    eps = 1e-12
    best = -np.inf
    if model.has_disks:
        return np.inf
    for prim in model.scene.primitives:
        if isinstance(prim, HalfPlane):
            cross = abs(zeta[0] * prim.normal[1] - zeta[1] * prim.normal[0])
            if cross > eps or zeta @ prim.normal < 0:
                return np.inf
            best = max(best, (zeta @ prim.normal) * prim.offset)
        elif isinstance(prim, Ray):
            if zeta @ prim.direction > eps:
                return np.inf
            best = max(best, zeta @ prim.origin)
        elif isinstance(prim, Segment):
            best = max(best, zeta @ prim.a, zeta @ prim.b)
        elif isinstance(prim, PointPrim):
            best = max(best, zeta @ prim.p)
    return float(best)


def realized(model: SetModel, s, zeta, r) -> bool:
    """Analytic test that zeta at s is realized by an r-sphere (r may be +inf)."""
    s, zeta, r = as_point(s), as_point(zeta), ExtReal.of(r)
    eps = model.tol.eps_geom
    if r.is_inf:
        return support(model, zeta) - zeta @ s <= eps
    return distance(model, s + r.value * zeta) >= r.value - eps * max(1.0, r.value)


def realization_radius(model: SetModel, s, zeta) -> ExtReal:
    """Largest rho with B(s + rho*zeta; rho) disjoint from S."""
    s, zeta = as_point(s), as_point(zeta)
    if support(model, zeta) - zeta @ s <= model.tol.eps_geom:
        return INF

    def ok(rho):
        return distance(model, s + rho * zeta) >= rho - 1e-11 * max(1.0, rho)

    lo, hi = 0.0, 1.0
    while ok(hi):
        lo, hi = hi, hi * 2.0
        if hi > 1e12:
            return INF
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-13 * max(1.0, hi):
            break
    return ExtReal(lo)


_GRID = np.stack([np.cos(np.arange(720) * TWO_PI / 720),
                  np.sin(np.arange(720) * TWO_PI / 720)], -1)


def _tangent_directions(model: SetModel, s: np.ndarray):
    """Tangent-cone directions of S at s: (exact sector edges, edges + grid)."""
    eps = model.tol.eps_geom
    special, allowed = [], [np.zeros((0, 2))]
    if len(model.arc_r):
        d, _ = _arc_nearest(model, s[None])
        if np.any(d[0] <= eps):
            dist = np.linalg.norm(model.disk_c - s, axis=1)
            on = np.flatnonzero(np.abs(dist - model.disk_r) <= eps)
            normals = (model.disk_c[on] - s) / model.disk_r[on, None]
            h = 1e-4 * float(model.disk_r[on].min())

            def keep(G):
                ok = np.all(G @ normals.T <= 1e-12, axis=1)
                Q = s + h * G
                dd = np.linalg.norm(Q[:, None, :] - model.disk_c[None], axis=-1)
                touching = np.any(dd <= model.disk_r[None], axis=1)
                if model.scene.fill_gaps and model.holes is not None:
                    ok &= touching | ~shapely.contains_xy(model.holes, Q[:, 0], Q[:, 1])
                return ok

            edges = np.concatenate([np.stack([-normals[:, 1], normals[:, 0]], -1),
                                    np.stack([normals[:, 1], -normals[:, 0]], -1)])
            special += list(edges[keep(edges)])
            allowed.append(_GRID[keep(_GRID)])
    for prim in model.scene.primitives:
        if isinstance(prim, HalfPlane):
            if abs(s @ prim.normal - prim.offset) <= eps:
                t = perp(prim.normal)
                special += [t, -t]
                allowed.append(_GRID[_GRID @ prim.normal <= 1e-12])
        elif isinstance(prim, (Ray, Segment)):
            if isinstance(prim, Ray):
                u = prim.direction
                ends = [(prim.origin, u)]
            else:
                u = unit_vector(prim.b - prim.a)
                ends = [(prim.a, u), (prim.b, -u)]
            if _other_nearest(prim, s[None])[0][0] > eps:
                continue
            at_end = [v for e, v in ends if np.linalg.norm(s - e) <= eps]
            special += at_end if at_end else [u, -u]
    special_arr = np.array(special).reshape(-1, 2)
    return special_arr, np.concatenate([special_arr] + allowed)


def proximal_normal_cone(model: SetModel, s, with_radii: bool = True) -> NormalFan:
    """Normal fan at a boundary point, computed as the polar of the tangent cone.

    With ``with_radii=False`` the realization radii are left as None, which
    skips one bisection per generator.
    """
    bp = s if isinstance(s, BoundaryPoint) else classify(model, s)
    s = bp.point
    special, D = _tangent_directions(model, s)

    def feasible(z):
        return len(D) == 0 or float(np.max(D @ z)) <= 1e-9

    if len(D) == 0:
        gens = [direction(k * math.pi / 2) for k in range(4)]
        arcs = ((0.0, TWO_PI),)
    else:
        angles = sorted({round((angle_of(t) + sgn * math.pi / 2) % TWO_PI, 13)
                         for t in special for sgn in (1, -1)})
        ok = [a for a in angles if feasible(direction(a))]
        if not ok:
            raise NotBoundary(f"{s.tolist()} has a trivial normal cone")
        gens = [direction(a) for a in ok]
        arcs = []
        if len(ok) > 1:
            for k, a in enumerate(ok):
                b = ok[(k + 1) % len(ok)]
                span = (b - a) % TWO_PI
                if span > 1e-9 and feasible(direction(a + span / 2)):
                    arcs.append((a, span))
                    if span >= math.pi - 1e-9:
                        gens.append(direction(a + span / 2))
        arcs = tuple(arcs)
    gens = [_snap(g) for g in gens]
    if with_radii:
        radii = tuple(realization_radius(model, s, g) for g in gens)
    else:
        radii = (None,) * len(gens)
    return NormalFan(tuple(gens), radii, arcs)


def _snap(v):
    """Clear rounding noise below 1e-13 so that lexicographic ties are clean."""
    v = np.where(np.abs(v) < 1e-13, 0.0, v)
    return v / np.linalg.norm(v)


def designated_normal(model: SetModel, s, bias, r_fn: RadiusFnSpec | None = None,
                      n_sweep: int = 32, with_radius: bool = True):
    """A unit normal at s realized by an r(s)-sphere, maximising <xi, bias>.

    Candidates are the fan generators plus ``n_sweep`` directions inside each
    cone arc.  Ties (within 1e-12) go to the lexicographically smallest vector.
    """
    bp = s if isinstance(s, BoundaryPoint) else classify(model, s)
    bias = as_point(bias)
    fan = proximal_normal_cone(model, bp, with_radii=False)
    r = (r_fn or model.radius_fn)(bp.point)
    cands = list(fan.generators) + fan.sweep(n_sweep)
    if r.is_inf:
        good = [z for z in cands if realized(model, bp.point, z, r)]
    else:
        Z = np.array(cands)
        d = distance(model, bp.point + r.value * Z)
        good = list(Z[d >= r.value - model.tol.eps_geom * max(1.0, r.value)])
    if not good:
        raise NoValidNormal(f"no normal at {bp.point.tolist()} is realized by an r(s)-sphere")
    best = max(float(z @ bias) for z in good)
    tied = [z for z in good if float(z @ bias) >= best - 1e-12]
    xi = min(tied, key=lambda z: lex_key(z, 1e-12))
    return xi, realization_radius(model, bp.point, xi) if with_radius else None
