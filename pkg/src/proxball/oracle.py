"""Brute-force ground truth, independent of the exact arc geometry.

Distances come from a dense point cloud on the circles (filtered to S) plus
closed-form distances to the linear primitives.  Maximal inscribed balls
through a point are found by a coarse-to-fine grid over centres.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import GAMMA_MIN, ClosedBall, as_point, direction
from .errors import GenerationExhausted, InvalidPrimitive, Unbounded
from .proxcheck import HOLDS_STRICT, ball_in_complement, eesc_check
from .radius import evaluate, varrho_gamma
from .sets import (DiskComplement, HalfPlane, PointPrim, RadiusFnSpec, Ray, SceneSpec,
                   Segment, SetModel, build_model, contains, disk_complement, load_scene, ray)

GRID_TOL = 2e-3


@dataclass(frozen=True)
class InscribedBallResult:
    radius: float
    center: np.ndarray
    open_variant: bool
    resolution: float

    def to_json(self):
        return {"schema": 1, "radius": self.radius, "center": self.center.tolist(),
                "open_variant": self.open_variant, "resolution": self.resolution}


# ---------------------------------------------------------------------------
# independent distance

class CloudDistance:
    """d_S from sampled circles and closed-form linear pieces.

    Each circle keeps the samples (and pairwise intersection points) that lie
    in S.  Distance to a point at angle t on a circle grows with the angular
    gap to the query's polar angle, so the nearest kept sample is found by a
    sorted-angle search.
    """

    def __init__(self, model: SetModel, h: float = 5e-4):
        self.model = model
        self.h = h
        self.circles = []
        disks = [p for p in model.scene.primitives if isinstance(p, DiskComplement)]
        for d in disks:
            n = max(64, int(math.ceil(2 * math.pi * d.radius / h)))
            t = np.linspace(0, 2 * math.pi, n, endpoint=False)
            pts = [d.center + d.radius * np.stack([np.cos(t), np.sin(t)], -1)]
            pts += [_circle_intersections(d, e) for e in disks if e is not d]
            pts = np.concatenate(pts)
            pts = pts[contains(model, pts)]
            if len(pts):
                ang = np.sort(np.arctan2(*(pts - d.center).T[::-1]) % (2 * math.pi))
                self.circles.append((d.center, d.radius, ang))
        self.lines = [p for p in model.scene.primitives if not isinstance(p, DiskComplement)]

    def __call__(self, P) -> np.ndarray:
        P = np.asarray(P, dtype=float).reshape(-1, 2)
        d = np.full(len(P), np.inf)
        for c, r, ang in self.circles:
            V = P - c
            rho = np.hypot(*V.T)
            phi = np.arctan2(V[:, 1], V[:, 0]) % (2 * math.pi)
            k = np.searchsorted(ang, phi)
            gap = np.full(len(P), np.inf)
            for j in (k - 1, k % len(ang)):
                g = np.abs(phi - ang[j % len(ang)])
                gap = np.minimum(gap, np.minimum(g, 2 * math.pi - g))
            d = np.minimum(d, np.sqrt(np.maximum(rho * rho + r * r - 2 * rho * r * np.cos(gap), 0.0)))
        for prim in self.lines:
            d = np.minimum(d, _linear_distance(prim, P))
        return np.where(contains(self.model, P), 0.0, d)


def _circle_intersections(a: DiskComplement, b: DiskComplement) -> np.ndarray:
    v = b.center - a.center
    L = float(np.hypot(*v))
    if L == 0 or L > a.radius + b.radius or L < abs(a.radius - b.radius):
        return np.zeros((0, 2))
    u = v / L
    m = (L * L + a.radius ** 2 - b.radius ** 2) / (2 * L)
    h = math.sqrt(max(a.radius ** 2 - m * m, 0.0))
    base = a.center + m * u
    w = np.array([-u[1], u[0]])
    return np.array([base + h * w, base - h * w])


def _linear_distance(prim, P: np.ndarray) -> np.ndarray:
    if isinstance(prim, HalfPlane):
        return np.maximum(0.0, P @ prim.normal - prim.offset)
    if isinstance(prim, PointPrim):
        return np.hypot(*(P - prim.p).T)
    if isinstance(prim, Ray):
        a, u = prim.origin, prim.direction
        t = np.maximum(0.0, (P - a) @ u)
    elif isinstance(prim, Segment):
        a, u = prim.a, prim.b - prim.a
        t = np.clip((P - a) @ u / (u @ u), 0.0, 1.0)
    else:
        raise InvalidPrimitive(f"unsupported primitive {prim!r}")
    q = a + t[:, None] * u
    return np.hypot(*(P - q).T)


def _cloud(model: SetModel) -> CloudDistance:
    if "cloud" not in model._cache:
        model._cache["cloud"] = CloudDistance(model)
    return model._cache["cloud"]


def oracle_distance(model: SetModel, p) -> np.ndarray | float:
    """Brute-force d_S, accurate to about the cloud spacing."""
    P = np.asarray(p, dtype=float)
    d = _cloud(model)(P)
    return float(d[0]) if P.ndim == 1 else d


# ---------------------------------------------------------------------------
# maximal inscribed ball through a point

PROBE_RADII = (10.0, 100.0, 1000.0)


def _unbounded_probe(model: SetModel, x: np.ndarray, n_dir: int = 720) -> bool:
    """Whether balls through x of every probe radius fit in S^c."""
    dist = _cloud(model)
    t = np.arange(n_dir) * (2 * math.pi / n_dir)
    U = np.stack([np.cos(t), np.sin(t)], -1)
    for R in PROBE_RADII:
        C = x + R * U
        if not np.any(dist(C) > R * (1 + 1e-12)):
            return False
    return True


def _scene_bbox(model: SetModel):
    lo, hi = np.array(model.window[::2]), np.array(model.window[1::2])
    # the model window is padded by 2 around the primitives
    return lo + 2.0, hi - 2.0


def max_inscribed_through(model: SetModel, x, open_variant: bool = False,
                          budget: int = 64, levels: int = 3, top_k: int = 4
                          ) -> InscribedBallResult:
    """Largest ball in S^c containing x, by grid search over centres.

    A centre c admits radius d_S(c) (the open ball; closed balls approach it
    from below) subject to |c - x| <= d_S(c).  ``budget`` is the grid side
    per refinement level.
    """
    x = as_point(x)
    dist = _cloud(model)
    dx = float(dist(x)[0])
    if dx == 0.0:
        raise InvalidPrimitive(f"{x.tolist()} lies in S")
    if _unbounded_probe(model, x):
        raise Unbounded(f"balls of radius {PROBE_RADII[-1]:g} through {x.tolist()} fit in S^c",
                        PROBE_RADII[-1])
    lo, hi = _scene_bbox(model)
    pad = 2.0 * (dx + 1.0)
    lo = np.minimum(lo, x) - pad
    hi = np.maximum(hi, x) + pad

    def score(C):
        d = dist(C)
        ok = (np.hypot(*(C - x).T) <= d) & (d > 0)
        return np.where(ok, d, -np.inf)

    # seed with x itself and a polar fan around it
    t = np.arange(64) * (2 * math.pi / 64)
    fan = [x + f * dx * np.stack([np.cos(t), np.sin(t)], -1) for f in (0.25, 0.5)]
    best_c, best_v = x.copy(), dx
    boxes = [(lo, hi)]
    extra = np.concatenate([x[None]] + fan)
    cell = float(np.max(hi - lo)) / (budget - 1)
    for level in range(levels):
        cand = [extra] if level == 0 else []
        for blo, bhi in boxes:
            gx = np.linspace(blo[0], bhi[0], budget)
            gy = np.linspace(blo[1], bhi[1], budget)
            G = np.stack(np.meshgrid(gx, gy), -1).reshape(-1, 2)
            cand.append(G)
        C = np.concatenate(cand)
        v = score(C)
        order = np.argsort(-v)[:top_k]
        if v[order[0]] > best_v:
            best_v, best_c = float(v[order[0]]), C[order[0]].copy()
        cell = max(float(np.max(b[1] - b[0])) / (budget - 1) for b in boxes)
        boxes = [(C[i] - 2 * cell, C[i] + 2 * cell) for i in order if np.isfinite(v[i])]
        boxes.append((best_c - 2 * cell, best_c + 2 * cell))
    resolution = (max(cell, dist.h) + 1e-12) / best_v
    return InscribedBallResult(best_v, best_c, open_variant, resolution)


# ---------------------------------------------------------------------------
# gamma = 1 counterexample

def gamma_tightness_experiment(model: SetModel | None = None, grid_tol: float = GRID_TOL) -> dict:
    """Show that the constant gamma cannot be raised to 1 on the three-disk scene.

    (a) varrho at gamma = 1 and x = 0; (b) the closed ball of that radius
    touches S at a tangent point; (c) the grid finds no closed ball through 0
    beyond the critical radius plus ``grid_tol``; (d) the shrunken critical
    ball fits.
    """
    model = model or build_model(load_scene("example-2.2"))
    x = np.zeros(2)
    ev = evaluate(model, 1.0, x, check=False)
    varrho1 = varrho_gamma(1.0, ev.rho_x, ev.rho).value
    witness = np.array([1.0 / math.sqrt(3.0), 0.0])
    margin_b = float(np.linalg.norm(witness - x)) - varrho1
    in_s = bool(contains(model, witness))
    critical = ClosedBall(x, varrho1)
    rep_b = ball_in_complement(model, critical, closed=True)
    search = max_inscribed_through(model, x, open_variant=False)
    shrunk = ClosedBall(x, varrho1 * (1 - 10 * grid_tol))
    rep_d = ball_in_complement(model, shrunk, closed=True)
    steps = {
        "a": {"varrho_gamma_1": varrho1, "expected": 1 / math.sqrt(3.0),
              "passed": abs(varrho1 - 1 / math.sqrt(3.0)) <= 1e-12},
        "b": {"witness": witness.tolist(), "witness_in_S": in_s, "margin": margin_b,
              "closed_ball_verdict": rep_b.verdict,
              "passed": in_s and abs(margin_b) <= 1e-9 and not rep_b.passed},
        "c": {"best_radius": search.radius, "center": search.center.tolist(),
              "bound": varrho1 + grid_tol, "passed": search.radius < varrho1 + grid_tol},
        "d": {"radius": shrunk.radius, "verdict": rep_d.verdict,
              "passed": rep_d.verdict == HOLDS_STRICT},
    }
    return {"schema": 1, "gamma_min": GAMMA_MIN, "steps": steps,
            "passed": all(s["passed"] for s in steps.values())}


# ---------------------------------------------------------------------------
# random scenes

KINDS = ("affine", "disjoint", "tangent", "line")
DEFAULT_PARAMS = {"n_disks": (2, 5), "radii": (0.5, 1.5), "gap": 0.3, "extent": 4.0,
                  "kind": None, "r_scale": 1.0, "max_tries": 50, "eesc_samples": 120}


def _disjoint_disks(rng, n, params):
    rmin, rmax = params["radii"]
    iu = np.triu_indices(n, 1)
    for _ in range(1000):
        c = rng.uniform(-params["extent"], params["extent"], (n, 2))
        r = rng.uniform(rmin, rmax, n)
        D = np.hypot(*(c[:, None] - c[None]).transpose(2, 0, 1))
        if np.all(D[iu] > (r[:, None] + r[None])[iu] + params["gap"]):
            return c, r
    raise GenerationExhausted("could not place disjoint disks")


def _disk_chain(rng, n, params, overlap=1.0):
    """Disks each touching the previous one at distance ``overlap*(r_i + r_j)``."""
    r = rng.uniform(1.0, params["radii"][1], n)
    c = [np.zeros(2)]
    heading = rng.uniform(0, 2 * math.pi)
    for i in range(1, n):
        for _ in range(100):
            heading += rng.uniform(-1.0, 1.0)
            cand = c[-1] + overlap * (r[i - 1] + r[i]) * direction(heading)
            if all(np.linalg.norm(cand - c[j]) > r[i] + r[j] + 0.1 for j in range(i - 1)):
                break
        c.append(cand)
    return np.array(c), r


def random_scene(seed: int, params: dict | None = None) -> SceneSpec:
    """A random scene passing the exterior sphere audit for its radius function.

    The kind cycles with the seed (``seed % 4``): affine r on disjoint disks,
    disjoint disks with constant r, a chain of tangent disks with gaps filled,
    or a full line with r = +inf.  ``params["kind"] = "overlap"`` places
    crossing disks, whose corners only pass for small ``r_scale``.
    """
    p = dict(DEFAULT_PARAMS, **(params or {}))
    kind = p["kind"] or KINDS[seed % 4]
    rng = np.random.default_rng(seed)
    lo, hi = p["n_disks"]
    for _ in range(p["max_tries"]):
        if kind == "line":
            o = rng.uniform(-1, 1, 2)
            u = direction(rng.uniform(0, math.pi))
            scene = SceneSpec((ray(o, u), ray(o, -u)), False,
                              RadiusFnSpec.constant(math.inf), f"random-{seed}")
        else:
            if kind == "disjoint":
                n = lo + (seed // 4 + 1) % (hi - lo + 1)
                c, r = _disjoint_disks(rng, n, p)
                rf = RadiusFnSpec.constant(p["r_scale"] * r.min())
            elif kind == "tangent":
                n = lo + (seed // 4) % (hi - lo + 1)
                c, r = _disk_chain(rng, n, p)
                rf = RadiusFnSpec.constant(p["r_scale"] * 1.0)
            elif kind == "affine":
                n = int(rng.integers(lo, hi + 1))
                c, r = _disjoint_disks(rng, n, p)
                anchor = rng.uniform(-2, 2, 2)
                rf = RadiusFnSpec.affine_distance(0.5 * r.min(), 0.02, anchor, 0.1 * r.min())
            elif kind == "overlap":
                n = int(rng.integers(lo, hi + 1))
                c, r = _disk_chain(rng, n, p, overlap=0.7)
                rf = RadiusFnSpec.constant(p["r_scale"] * r.min())
            else:
                raise InvalidPrimitive(f"unknown random scene kind {kind!r}")
            scene = SceneSpec(tuple(disk_complement(ci, ri) for ci, ri in zip(c, r)),
                              kind == "tangent", rf, f"random-{seed}")
        model = build_model(scene)
        if eesc_check(model, n_samples=p["eesc_samples"]).passed:
            return scene
    raise GenerationExhausted(f"no {kind} scene passed the exterior sphere audit "
                              f"in {p['max_tries']} tries")
