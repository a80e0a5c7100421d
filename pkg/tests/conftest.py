import itertools
import math

import pytest

from lpiforms.complexes import MetricComplex, barycentric_subdivide, build_complex


def regular_simplex(k: int) -> MetricComplex:
    """Single regular k-simplex with unit edges (vertices e_i / sqrt 2)."""
    s = 1.0 / math.sqrt(2.0)
    verts = {
        i: tuple(s if j == i else 0.0 for j in range(k + 1)) for i in range(k + 1)
    }
    return build_complex(verts, [tuple(range(k + 1))])


def simplex_complex(n: int) -> MetricComplex:
    verts = {i: tuple(1.0 if j == i else 0.0 for j in range(n)) for i in range(n + 1)}
    return build_complex(verts, [tuple(range(n + 1))])


def sphere_complex(n: int) -> MetricComplex:
    """Boundary of the (n+1)-simplex: a triangulated n-sphere."""
    verts = {
        i: tuple(1.0 if j == i else 0.0 for j in range(n + 1)) for i in range(n + 2)
    }
    tops = list(itertools.combinations(range(n + 2), n + 1))
    return build_complex(verts, tops)


@pytest.fixture
def triangle() -> MetricComplex:
    return build_complex(
        {0: (0.0, 0.0), 1: (1.0, 0.0), 2: (0.5, math.sqrt(3) / 2)}, [(0, 1, 2)]
    )


@pytest.fixture
def subdivided_triangle(triangle) -> MetricComplex:
    return barycentric_subdivide(triangle)
