"""Acceptance criteria, one test per criterion, at their stated tolerances.

Each test records a one-line verdict in ``RESULTS``; ``conftest.py`` prints
them in the terminal summary.
"""

import math
import time

import numpy as np
import pytest

from helpers import C1, INV_SQRT3, named_scenes, query_points, random_models, three_disks, two_rays
from proxball.core import ClosedBall, diametric_product
from proxball.errors import Unbounded
from proxball.oracle import gamma_tightness_experiment, max_inscribed_through, oracle_distance
from proxball.proxcheck import (FAILS, HOLDS_NONSTRICT, HOLDS_STRICT, ball_in_complement,
                                equivalence_triplet)
from proxball.radius import evaluate, lsc_spot_check, rho
from proxball.sets import (RadiusFnSpec, SceneSpec, boundary_array, build_model, distance,
                           proximal_normal_cone, ray)
from proxball.synth import (ball_to_cert, case2_inequality_audit, cert_to_ball,
                            manual_certificate, synthesize, verify_certificate)

RESULTS = {}
GAMMAS = (0.6831, 0.7, 0.8, 0.9, 0.99)
N_QUERY = 50
SAMPLES = 10_000
ALL_TAGS = {"C1", "C2_1_1", "C2_1_2", "C2_2_1", "C2_2_2_1", "C2_2_2_2_1", "C2_2_2_2_2"}


def record(k, ok, detail):
    RESULTS[k] = (bool(ok), detail)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}")


@pytest.fixture(scope="module")
def sweep():
    """Certificates for every (gamma, scene, query point) of the soundness sweep."""
    models = {**named_scenes(), **random_models(20)}
    rows, errors = [], []
    t0 = time.perf_counter()
    for name, model in models.items():
        for x in query_points(model, N_QUERY, seed=len(rows)):
            for g in GAMMAS:
                try:
                    cert = synthesize(model, g, x, verify=False)
                    rep = verify_certificate(model, cert, SAMPLES)
                except Exception as exc:  # recorded and reported below
                    errors.append((name, x.tolist(), g, repr(exc)))
                    continue
                rows.append((name, model, cert, rep))
    elapsed = time.perf_counter() - t0
    return {"models": models, "rows": rows, "errors": errors, "elapsed": elapsed}


def test_criterion_1_three_disk_values():
    t0 = time.perf_counter()
    model = three_disks()
    d_c1 = distance(model, C1)
    d_c1_oracle = oracle_distance(model, C1)
    d0 = distance(model, (0.0, 0.0))
    r0, _ = rho(model, (0.0, 0.0))
    ob = max_inscribed_through(model, (0.0, 0.0), open_variant=True)
    elapsed = time.perf_counter() - t0
    ok = (abs(d_c1 - 1.0) <= 1e-9 and abs(d_c1_oracle - 1.0) <= 2e-3
          and abs(d0 - 0.5773502692) <= 1e-9 and r0 == 0.5
          and abs(ob.radius - 0.5774) <= 2e-3 and elapsed < 10)
    record(1, ok, f"d_S(c1)={d_c1:.12f} oracle={d_c1_oracle:.6f} d_S(0)={d0:.10f} "
                  f"rho(0)={float(r0)} open radius={ob.radius:.5f} in {elapsed:.2f}s")
    assert ok


def test_criterion_2_gamma_tightness():
    t0 = time.perf_counter()
    model = three_disks()
    rep = gamma_tightness_experiment(model)
    witness = np.array([INV_SQRT3, 0.0])
    margin = float(np.linalg.norm(witness)) - INV_SQRT3
    shrunk = ball_in_complement(model, ClosedBall((0.0, 0.0), INV_SQRT3 * 0.98), closed=True)
    best = max_inscribed_through(model, (0.0, 0.0), open_variant=False)
    elapsed = time.perf_counter() - t0
    ok = (rep["passed"] and rep["steps"]["b"]["witness_in_S"] and abs(margin) <= 1e-9
          and shrunk.verdict == HOLDS_STRICT and best.radius < INV_SQRT3 + 2e-3 and elapsed < 30)
    record(2, ok, f"witness margin={margin:.1e}, 0.98 ball {shrunk.verdict}, "
                  f"grid best closed radius={best.radius:.5f} < {INV_SQRT3 + 2e-3:.5f}, "
                  f"{elapsed:.2f}s")
    assert ok


def test_criterion_3_soundness_sweep(sweep):
    rows, errors = sweep["rows"], sweep["errors"]
    bad = []
    for name, _, cert, rep in rows:
        if cert.is_finite:
            good = rep.min_margin > 1e-9
        else:
            good = -rep.min_margin <= 1e-9
        if not good:
            bad.append((name, cert.x.tolist(), cert.gamma, rep.min_margin))
    total = len(rows) + len(errors)
    expected = len(GAMMAS) * len(sweep["models"]) * N_QUERY
    ok = not errors and not bad and total == expected and sweep["elapsed"] < 60
    record(3, ok, f"{len(rows) - len(bad)}/{expected} certificates verified over >= {SAMPLES} "
                  f"samples in {sweep['elapsed']:.1f}s; errors={errors[:3]} bad={bad[:3]}")
    assert ok


def test_criterion_4_dominance(sweep):
    rows = sweep["rows"]
    worst_rho = math.inf
    by_point = {}
    for name, model, cert, _ in rows:
        worst_rho = min(worst_rho, float(cert.varrho) - float(cert.eval.rho))
        key = (name, tuple(cert.x))
        by_point.setdefault(key, (model, []))[1].append(cert)
    worst_gap, inf_bad = -math.inf, []
    for (name, x), (model, certs) in by_point.items():
        finite = [c.varrho.value for c in certs if c.is_finite]
        try:
            best = max_inscribed_through(model, x, open_variant=False).radius
        except Unbounded:
            best = math.inf
        if finite:
            worst_gap = max(worst_gap, max(finite) - best)
        if len(finite) < len(certs) and math.isfinite(best):
            inf_bad.append((name, x))
    ok = worst_rho >= 0 and worst_gap <= 2e-3 and not inf_bad
    record(4, ok, f"min(varrho - rho)={worst_rho:.3e}, max(varrho - oracle)={worst_gap:.3e} "
                  f"over {len(by_point)} points; infinite radii with bounded oracle: {inf_bad[:3]}")
    assert ok


def test_criterion_5_round_trip(sweep):
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(1000):
        x = rng.normal(size=2) * 3
        varrho = rng.uniform(0.01, 10)
        zeta = rng.normal(size=2)
        zeta /= np.linalg.norm(zeta)
        t = rng.uniform(0, varrho * (1 - 1e-6))
        z2, t2 = ball_to_cert(x, cert_to_ball(x, varrho, zeta, t), varrho)
        worst = max(worst, float(np.abs(z2 - zeta).max()), abs(t2 - t))
    disagree = []
    for name, model, cert, rep in sweep["rows"]:
        if cert.is_finite:
            ball_ok = ball_in_complement(model, cert.result, closed=True, samples=SAMPLES).passed
            if ball_ok != rep.passed:
                disagree.append((name, cert.x.tolist()))
        else:
            for delta in (1.0, 10.0, 100.0):
                member = cert.result.member(delta)
                if ball_in_complement(model, member, closed=False, samples=SAMPLES).verdict == FAILS:
                    disagree.append((name, cert.x.tolist(), delta))
    ok = worst <= 1e-9 and not disagree
    record(5, ok, f"round-trip max error {worst:.2e}; margin/ball disagreements {len(disagree)} "
                  f"of {len(sweep['rows'])}")
    assert ok


def test_criterion_6_two_rays_non_strict():
    model = two_rays()
    cert = manual_certificate((0.0, 0.0), math.inf, (0.0, 1.0))
    rep = verify_certificate(model, cert, SAMPLES)
    at = rep.argmin_point
    ok = (rep.min_margin == 0.0 and rep.verdict == HOLDS_NONSTRICT
          and abs(abs(at[0]) - 1.0) <= 1e-9 and abs(at[1]) <= 1e-9)
    record(6, ok, f"max <zeta, s - x> = {abs(rep.min_margin):.1e} at {at.tolist()}")
    assert ok


def test_criterion_7_equivalence_and_trichotomy():
    rng = np.random.default_rng(7)
    mismatches, counts, tri_bad = [], {}, 0
    for name, model in named_scenes().items():
        pts, _ = boundary_array(model, 400)
        for k in range(200):
            s = pts[rng.integers(len(pts))]
            if rng.uniform() < 0.5:
                gens = proximal_normal_cone(model, s, with_radii=False).generators
                zeta = np.asarray(gens[rng.integers(len(gens))])
            else:
                zeta = rng.normal(size=2)
            zeta = zeta / np.linalg.norm(zeta)
            sigma = float(np.exp(rng.uniform(np.log(0.05), np.log(5.0))))
            v = equivalence_triplet(model, s, zeta, sigma, samples=2000)
            counts[v[0]] = counts.get(v[0], 0) + 1
            if len(set(v)) != 1:
                mismatches.append((name, s.tolist(), zeta.tolist(), sigma, v))
            if k < 5:
                R = 1.0 / (2.0 * sigma)
                c = s + R * zeta
                y, z = c - R * zeta, c + R * zeta
                g = np.linspace(-1.5 * R, 1.5 * R, 100)
                P = c + np.stack(np.meshgrid(g, g), -1).reshape(-1, 2)
                val = diametric_product(P, y, z)
                gap = np.linalg.norm(P - c, axis=1) - R
                clear = np.abs(gap) > 1e-9 * max(1.0, R)
                tri_bad += int(np.sum(np.sign(val[clear]) != np.sign(gap[clear])))
                th = rng.uniform(0, 2 * math.pi, 100)
                on = c + R * np.stack([np.cos(th), np.sin(th)], -1)
                tri_bad += int(np.sum(np.abs(diametric_product(on, y, z)) > 1e-9 * max(1.0, R * R)))
    ok = not mismatches and tri_bad == 0
    record(7, ok, f"verdict mix {counts}; mismatches {len(mismatches)}; trichotomy errors {tri_bad}")
    assert ok


def pinned_certificates():
    import helpers
    line = build_model(SceneSpec((ray((0, 0), (1, 0)), ray((0, 0), (-1, 0))), False,
                                 RadiusFnSpec.constant(math.inf), "line"))
    hole, ex21, ex22 = helpers.disk_hole(), two_rays(), three_disks()
    half = helpers.lower_half_plane()
    return {
        "C1": synthesize(hole, 0.7, (0.0, 0.0)),
        "C2_1_1": synthesize(line, 0.7, (0.3, 1.0)),
        "C2_1_2": synthesize(ex21, 0.7, (0.5, 0.3)),
        "C2_2_1": synthesize(half, 0.7, (0.0, 1.0)),
        "C2_2_2_1": synthesize(hole, 0.7, (1.0, 0.0)),
        "C2_2_2_2_1": synthesize(ex22, 0.69, (0.0, 0.0)),
        "C2_2_2_2_2": synthesize(hole, 0.7, (1.9, 0.0)),
    }


def test_criterion_8_case_coverage(sweep):
    pinned = pinned_certificates()
    pinned_ok = all(c.case_tag == tag for tag, c in pinned.items())
    seen = {}
    audits, failed = 0, []
    certs = [row[2] for row in sweep["rows"]] + list(pinned.values())
    for cert in certs:
        seen[cert.case_tag] = seen.get(cert.case_tag, 0) + 1
        audit = case2_inequality_audit(cert)
        if audit:
            audits += 1
            if not all(audit.values()):
                failed.append((cert.x.tolist(), cert.gamma, cert.case_tag))
    sweep_tags = {row[2].case_tag for row in sweep["rows"]}
    ok = pinned_ok and ALL_TAGS <= sweep_tags and not failed
    record(8, ok, f"tag counts {dict(sorted(seen.items()))}; {audits} audits, "
                  f"{len(failed)} failed; pinned fixtures ok={pinned_ok}")
    assert ok


def test_criterion_9_lower_semicontinuity():
    violations, checked = [], 0
    for model in (two_rays(), three_disks()):
        for x in query_points(model, 100, seed=9):
            checked += 1
            if not lsc_spot_check(model, 0.7, x, k=16, seed=checked):
                violations.append(x.tolist())
    ok = not violations
    record(9, ok, f"{checked} points, 3 dyadic levels, violations {violations[:3]}")
    assert ok


def test_evaluate_matches_formula_at_origin():
    ev = evaluate(three_disks(), 0.69, (0.0, 0.0))
    a = 0.69 * INV_SQRT3
    assert ev.varrho.value == pytest.approx(max(a, 0.5 * math.sqrt(a * a + 1.0)), abs=1e-15)
