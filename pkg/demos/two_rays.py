"""Two opposite rays on the x-axis with a unit gap around the origin.

With r = 1 the set satisfies the exterior sphere condition; with r = +inf
the two ray endpoints break it and synthesis reports the failure.
"""

import math

from proxball.core import INF
from proxball.errors import Unbounded, VerificationFailure
from proxball.oracle import max_inscribed_through
from proxball.proxcheck import eesc_check
from proxball.sets import RadiusFnSpec, build_model, load_scene
from proxball.synth import manual_certificate, synthesize, verify_certificate


def main():
    scene = load_scene("example-2.1")
    model = build_model(scene)
    print("exterior sphere condition (r = 1):", eesc_check(model).passed)

    flat = build_model(scene.with_radius_fn(RadiusFnSpec.constant(math.inf)))
    bad = [p.point.tolist() for p in eesc_check(flat).failures]
    print("exterior sphere condition (r = inf) fails at:", bad)

    rep = verify_certificate(model, manual_certificate((0.0, 0.0), INF, (0.0, 1.0)))
    print(f"upper half-plane through 0: {rep.verdict}, touching at {rep.argmin_point.tolist()}")

    try:
        max_inscribed_through(model, (0.0, 1.0))
    except Unbounded as exc:
        print("grid search:", exc)

    cert = synthesize(model, 0.7, (0.0, 10.0))
    print(f"certificate at (0, 10): {cert.case_tag}, radius {cert.varrho.value:.4f}")

    try:
        synthesize(flat, 0.7, (0.0, 1.0))
    except VerificationFailure as exc:
        print("r = inf:", exc)


if __name__ == "__main__":
    main()
