"""Deterministic SVG drawings of scenes, query points and certificate balls."""

from __future__ import annotations

import numpy as np
from shapely.geometry import Point as ShPoint
from shapely.geometry import Polygon, box
from shapely.ops import unary_union

from .core import AsymptoticBallFamily, ClosedBall
from .sets import DiskComplement, HalfPlane, PointPrim, Ray, Segment, SetModel

SIZE = 600
S_FILL = "#c9d3e0"
BALL_STROKE = "#c0392b"
NORMAL_STROKE = "#27ae60"


def _bbox(model: SetModel, extra_pts=(), balls=()):
    pts = []
    for p in model.scene.primitives:
        if isinstance(p, DiskComplement):
            pts += [p.center - p.radius, p.center + p.radius]
        elif isinstance(p, Ray):
            pts += [p.origin, p.origin + p.direction]
        elif isinstance(p, Segment):
            pts += [p.a, p.b]
        elif isinstance(p, HalfPlane):
            pts.append(p.normal * p.offset)
        elif isinstance(p, PointPrim):
            pts.append(p.p)
    pts += [np.asarray(q, dtype=float) for q in extra_pts]
    for b in balls:
        pts += [b.center - b.radius, b.center + b.radius]
    pts = np.array(pts)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = np.maximum(hi - lo, 1.0)
    mid = (lo + hi) / 2
    lo, hi = mid - span / 2, mid + span / 2
    margin = 0.1 * span
    return lo - margin, hi + margin


def _fmt(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def _s_region(model: SetModel, lo, hi):
    """S intersected with the drawing box, as a shapely geometry."""
    frame = box(lo[0], lo[1], hi[0], hi[1])
    parts = []
    if model.has_disks:
        disks = [ShPoint(c).buffer(r, quad_segs=128) for c, r in zip(model.disk_c, model.disk_r)]
        hole = unary_union(disks)
        if model.scene.fill_gaps and model.holes is not None:
            hole = unary_union([hole, model.holes])
        parts.append(frame.difference(hole))
    big = 4.0 * float(np.max(hi - lo))
    for p in model.scene.primitives:
        if isinstance(p, HalfPlane):
            n = p.normal
            t = np.array([-n[1], n[0]])
            base = n * p.offset
            poly = [base + big * t, base - big * t, base - big * t - big * n, base + big * t - big * n]
            parts.append(Polygon(poly).intersection(frame))
    return unary_union(parts) if parts else None


def render_svg(model: SetModel, certificates=(), query_points=()) -> str:
    """SVG text: S shaded, certificate balls outlined, zeta_x drawn at each x."""
    balls = [c.result for c in certificates if isinstance(c.result, ClosedBall)]
    pts = [c.x for c in certificates] + [np.asarray(q, dtype=float) for q in query_points]
    lo, hi = _bbox(model, pts, balls)
    scale = SIZE / float(np.max(hi - lo))
    W, H = (hi - lo) * scale

    def X(p):
        return _fmt((p[0] - lo[0]) * scale), _fmt((hi[1] - p[1]) * scale)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(W)}" height="{_fmt(H)}" '
           f'viewBox="0 0 {_fmt(W)} {_fmt(H)}">',
           f'<rect width="{_fmt(W)}" height="{_fmt(H)}" fill="white"/>']
    region = _s_region(model, lo, hi)
    if region is not None and not region.is_empty:
        polys = getattr(region, "geoms", [region])
        for poly in polys:
            if poly.geom_type != "Polygon":
                continue
            d = []
            for ring in [poly.exterior, *poly.interiors]:
                xy = [X(q) for q in ring.coords]
                d.append("M" + " L".join(f"{a} {b}" for a, b in xy) + " Z")
            out.append(f'<path d="{" ".join(d)}" fill="{S_FILL}" fill-rule="evenodd" stroke="none"/>')
    far = 4.0 * float(np.max(hi - lo))
    for p in model.scene.primitives:
        if isinstance(p, Ray):
            a, b = X(p.origin), X(p.origin + far * p.direction)
            out.append(f'<line x1="{a[0]}" y1="{a[1]}" x2="{b[0]}" y2="{b[1]}" '
                       f'stroke="#34495e" stroke-width="2"/>')
        elif isinstance(p, Segment):
            a, b = X(p.a), X(p.b)
            out.append(f'<line x1="{a[0]}" y1="{a[1]}" x2="{b[0]}" y2="{b[1]}" '
                       f'stroke="#34495e" stroke-width="2"/>')
        elif isinstance(p, PointPrim):
            a = X(p.p)
            out.append(f'<circle cx="{a[0]}" cy="{a[1]}" r="3" fill="#34495e"/>')
    for cert in certificates:
        res = cert.result
        if isinstance(res, ClosedBall):
            c = X(res.center)
            out.append(f'<circle cx="{c[0]}" cy="{c[1]}" r="{_fmt(res.radius * scale)}" '
                       f'fill="none" stroke="{BALL_STROKE}" stroke-width="1.5"/>')
        # zeta_x; a fixed length for tangent families
        length = 0.25 * float(np.max(hi - lo)) if isinstance(res, AsymptoticBallFamily) else res.radius
        a, b = X(cert.x), X(cert.x + length * cert.zeta_x)
        out.append(f'<line x1="{a[0]}" y1="{a[1]}" x2="{b[0]}" y2="{b[1]}" '
                   f'stroke="{NORMAL_STROKE}" stroke-width="1.5"/>')
    for q in pts:
        a = X(q)
        out.append(f'<circle cx="{a[0]}" cy="{a[1]}" r="2.5" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
