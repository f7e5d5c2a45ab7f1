import numpy as np
import pytest

from erlangen.numerics import rng_from
from erlangen.projective import ProjPoint, ProjMap, Quadric


@pytest.fixture
def rng():
    return rng_from(0xE1A9)


def random_proj_map(rng, dim, complex_entries=False, max_cond=50.0):
    while True:
        m = rng.uniform(-1, 1, (dim + 1, dim + 1))
        if complex_entries:
            m = m + 1j * rng.uniform(-1, 1, (dim + 1, dim + 1))
        if np.linalg.cond(m) < max_cond:
            return ProjMap(m)


def random_point(rng, dim, complex_entries=False):
    v = rng.uniform(-1, 1, dim + 1)
    if complex_entries:
        v = v + 1j * rng.uniform(-1, 1, dim + 1)
    return ProjPoint(v)


def random_nondegenerate_quadric(rng, dim, complex_entries=True):
    while True:
        m = rng.uniform(-1, 1, (dim + 1, dim + 1))
        if complex_entries:
            m = m + 1j * rng.uniform(-1, 1, (dim + 1, dim + 1))
        m = (m + m.T) / 2.0
        scale = np.max(np.abs(m))
        if abs(np.linalg.det(m / scale)) > 1e-3:
            return Quadric(m)


def quadric_point(rng, q, complex_entries=True):
    """A point on the quadric found by intersecting with a random chord."""
    from erlangen.projective import line_quadric_intersections, GeometryError
    while True:
        a = random_point(rng, q.dim, complex_entries)
        b = random_point(rng, q.dim, complex_entries)
        try:
            hit = line_quadric_intersections(a, b, q)
        except GeometryError:
            continue
        if not hit.tangent:
            return hit.first if rng.random() < 0.5 else hit.second
