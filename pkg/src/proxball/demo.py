"""End-to-end checks on the two bundled scenes, shared by the CLI ``demo``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import Unbounded
from .oracle import GRID_TOL, gamma_tightness_experiment, max_inscribed_through, oracle_distance
from .proxcheck import FAILS, HOLDS_NONSTRICT, eesc_check, proximal_margin
from .radius import evaluate, rho, varrho_gamma
from .sets import RadiusFnSpec, build_model, distance, load_scene
from .synth import case2_inequality_audit, manual_certificate, synthesize, verify_certificate

INV_SQRT3 = 1.0 / math.sqrt(3.0)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def three_disks() -> list[Check]:
    model = build_model(load_scene("example-2.2"))
    c1 = model.disk_c[0]
    out = []
    rep = eesc_check(model)
    out.append(Check("exterior sphere condition, r = 1", rep.passed,
                     f"{len(rep.points)} boundary points audited"))
    d_c1 = distance(model, c1)
    d_c1_or = oracle_distance(model, c1)
    out.append(Check("d_S(c1)", abs(d_c1 - 1) <= 1e-9 and abs(d_c1_or - 1) <= GRID_TOL,
                     f"d_S(c1) = {d_c1:.3f} (oracle {d_c1_or:.4f})"))
    d0 = distance(model, (0.0, 0.0))
    out.append(Check("d_S(0,0)", abs(d0 - INV_SQRT3) <= 1e-9, f"d_S(0,0) = {d0:.5f}"))
    r0, s0 = rho(model, (0.0, 0.0))
    out.append(Check("rho(0,0)", r0 == 0.5, f"rho(0,0) = {float(r0)} at s_x = {np.round(s0, 6).tolist()}"))
    ob = max_inscribed_through(model, (0.0, 0.0), open_variant=True)
    out.append(Check("largest open ball through (0,0)", abs(ob.radius - INV_SQRT3) <= GRID_TOL,
                     f"radius {ob.radius:.4f}"))
    cb = max_inscribed_through(model, c1, open_variant=True)
    out.append(Check("largest open ball through c1", abs(cb.radius - 1) <= GRID_TOL,
                     f"radius {cb.radius:.4f}"))
    tight = gamma_tightness_experiment(model)
    st = tight["steps"]
    out.append(Check("gamma = 1 is not admissible", tight["passed"],
                     f"critical radius {st['a']['varrho_gamma_1']:.5f} touches S at "
                     f"{np.round(st['b']['witness'], 5).tolist()}; shrunken ball "
                     f"{st['d']['radius']:.4f} fits"))
    cert = synthesize(model, 0.69, (0.0, 0.0))
    expect = varrho_gamma(0.69, INV_SQRT3, 0.5).value
    audit = case2_inequality_audit(cert)
    out.append(Check("certificate at (0,0), gamma = 0.69",
                     cert.case_tag == "C2_2_2_2_1" and abs(cert.varrho.value - expect) <= 1e-12
                     and all(audit.values()),
                     f"{cert.case_tag}, radius {cert.varrho.value:.6f}, "
                     f"centre {np.round(cert.result.center, 6).tolist()}"))
    return out


def two_rays() -> list[Check]:
    scene = load_scene("example-2.1")
    model = build_model(scene)
    out = []
    rep = eesc_check(model)
    out.append(Check("exterior sphere condition, r = 1", rep.passed,
                     f"{len(rep.points)} boundary points audited"))
    inf_model = build_model(scene.with_radius_fn(RadiusFnSpec.constant(math.inf)))
    rep_inf = eesc_check(inf_model)
    bad = sorted({tuple(np.round(p.point, 6).tolist()) for p in rep_inf.failures})
    out.append(Check("exterior sphere condition fails for r = +inf", not rep_inf.passed,
                     f"failing points {bad}"))
    s, zeta = np.array([1.0, 0.0]), np.array([-1.0, 0.0])
    m0 = proximal_margin(model, s, zeta, 0.0)
    mh = proximal_margin(model, s, zeta, 0.5)
    out.append(Check("(-1,0) at (1,0) needs sigma > 0", m0.verdict == FAILS and mh.verdict != FAILS,
                     f"sigma = 0: {m0.verdict}, sigma = 1/2: {mh.verdict}"))
    cert = manual_certificate((0.0, 0.0), math.inf, (0.0, 1.0))
    vr = verify_certificate(model, cert)
    at = np.abs(vr.argmin_point)
    out.append(Check("tangent family at (0,0) is only non-strict",
                     vr.verdict == HOLDS_NONSTRICT and abs(vr.min_margin) <= 1e-9
                     and np.allclose(at, [1.0, 0.0], atol=1e-9),
                     f"max <zeta, s - x> = {abs(vr.min_margin):.1e} at {vr.argmin_point.tolist()}"))
    try:
        max_inscribed_through(model, (0.0, 0.0))
        out.append(Check("balls through (0,0) are unbounded", False, "finite supremum found"))
    except Unbounded as exc:
        out.append(Check("balls through (0,0) are unbounded", True,
                         f"radius {exc.largest_radius:g} still fits"))
    ev = evaluate(model, 0.7, (0.0, 10.0))
    c = synthesize(model, 0.7, (0.0, 10.0))
    out.append(Check("certificate at (0,10), gamma = 0.7",
                     abs(ev.varrho.value - c.varrho.value) <= 1e-12,
                     f"{c.case_tag}, rho_x = {ev.rho_x:.4f}, radius {c.varrho.value:.4f}"))
    return out


DEMOS = {"example-2.1": two_rays, "example-2.2": three_disks}
