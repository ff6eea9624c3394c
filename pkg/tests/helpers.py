"""Scenes and query-point generators shared by the test modules.

Models are cached: they are immutable apart from their sample caches.
"""

import math
from functools import lru_cache

import numpy as np

from proxball.oracle import random_scene
from proxball.sets import (RadiusFnSpec, SceneSpec, build_model, contains, disk_complement,
                           distance, half_plane, load_scene)

INV_SQRT3 = 1.0 / math.sqrt(3.0)
C1 = np.array([-2.0 / math.sqrt(3.0), 0.0])


@lru_cache(maxsize=None)
def two_rays():
    return build_model(load_scene("example-2.1"))


@lru_cache(maxsize=None)
def three_disks():
    return build_model(load_scene("example-2.2"))


@lru_cache(maxsize=None)
def disk_hole():
    """S = complement of the open disk B(0; 2), r = 2."""
    return build_model(SceneSpec((disk_complement((0, 0), 2.0),), False,
                                 RadiusFnSpec.constant(2.0), "disk-hole"))


@lru_cache(maxsize=None)
def lower_half_plane():
    """S = {p2 <= 0}, r = +inf."""
    return build_model(SceneSpec((half_plane((0, 1), 0.0),), False,
                                 RadiusFnSpec.constant(math.inf), "half-plane"))


def named_scenes():
    return {"example-2.1": two_rays(), "example-2.2": three_disks(),
            "disk-hole": disk_hole(), "half-plane": lower_half_plane()}


@lru_cache(maxsize=None)
def random_models(n=20):
    return {f"random-{k}": build_model(random_scene(k)) for k in range(n)}


def query_points(model, n, seed=0, min_dist=0.02):
    """``n`` points of S^c at distance >= min_dist from S, uniform in the model window."""
    rng = np.random.default_rng(seed)
    x0, x1, y0, y1 = model.window
    out = []
    while len(out) < n:
        P = np.column_stack([rng.uniform(x0, x1, 4 * n), rng.uniform(y0, y1, 4 * n)])
        P = P[~contains(model, P)]
        P = P[distance(model, P) >= min_dist]
        out.extend(P[: n - len(out)])
    return np.array(out)
