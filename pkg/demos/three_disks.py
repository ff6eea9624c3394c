"""Three mutually tangent unit disks with the central gap filled.

Walks through the distance, the radius functions and a certificate at the
origin, then shows why gamma cannot reach 1 on this scene.
"""

import math

import numpy as np

from proxball.oracle import gamma_tightness_experiment, max_inscribed_through
from proxball.proxcheck import eesc_check
from proxball.radius import evaluate
from proxball.sets import build_model, distance, load_scene
from proxball.synth import case2_inequality_audit, synthesize


def main():
    model = build_model(load_scene("example-2.2"))
    print("exterior sphere condition (r = 1):", eesc_check(model).passed)

    x = np.zeros(2)
    print(f"d_S(0) = {distance(model, x):.6f}  (1/sqrt3 = {1 / math.sqrt(3):.6f})")

    for gamma in (0.69, 0.8, 0.95):
        ev = evaluate(model, gamma, x)
        print(f"gamma = {gamma}: rho_x = {ev.rho_x:.6f}, rho = {float(ev.rho)}, "
              f"varrho = {ev.varrho.value:.6f}")

    cert = synthesize(model, 0.69, x)
    print("certificate:", cert.case_tag, "centre", (np.round(cert.result.center, 6) + 0.0).tolist(),
          "radius", round(cert.varrho.value, 6))
    for name, ok in case2_inequality_audit(cert).items():
        print(f"  {'ok ' if ok else 'BAD'} {name}")

    best = max_inscribed_through(model, x, open_variant=True)
    print(f"largest open ball through 0 (grid search): {best.radius:.4f}")

    tight = gamma_tightness_experiment(model)
    print("gamma = 1 inadmissible:", tight["passed"])


if __name__ == "__main__":
    main()
