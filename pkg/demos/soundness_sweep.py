"""Certificates on random scenes, each re-verified over 10^4 samples of S."""

import collections
import time

import numpy as np

from proxball.oracle import random_scene
from proxball.sets import build_model, contains
from proxball.synth import synthesize, verify_certificate


def sweep(n_scenes=8, n_points=25, gamma=0.75, seed=0):
    rng = np.random.default_rng(seed)
    tags = collections.Counter()
    failures = 0
    for k in range(n_scenes):
        model = build_model(random_scene(k))
        x0, x1, y0, y1 = model.window
        done = 0
        while done < n_points:
            x = rng.uniform((x0, y0), (x1, y1))
            if contains(model, x):
                continue
            cert = synthesize(model, gamma, x, verify=False)
            failures += not verify_certificate(model, cert).passed
            tags[cert.case_tag] += 1
            done += 1
    return tags, failures


if __name__ == "__main__":
    t0 = time.perf_counter()
    tags, failures = sweep()
    print(f"{sum(tags.values())} certificates, {failures} failed verification, "
          f"{time.perf_counter() - t0:.1f} s")
    for tag, n in sorted(tags.items()):
        print(f"  {tag:12s} {n}")
