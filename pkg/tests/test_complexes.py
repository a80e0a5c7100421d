import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpiforms.complexes import (
    PiSequence,
    barycentric_subdivide,
    build_complex,
    cube_boundary_complex,
    is_subcomplex,
    ray_complex,
    read_complex,
    skeleton,
    star,
    validate_bounded_geometry,
    write_complex,
)
from lpiforms.errors import BadDimension, DegenerateSimplex, MissingVertex

from conftest import simplex_complex, sphere_complex


def test_face_closure_counts():
    K = simplex_complex(3)
    assert [len(K.simplices_of_dim(k)) for k in range(4)] == [4, 6, 4, 1]
    assert K.euler_characteristic() == 1


def test_degenerate_simplex_rejected():
    with pytest.raises(DegenerateSimplex):
        build_complex({0: (0.0,), 1: (1.0,)}, [(0, 0)])


def test_missing_vertex_rejected():
    with pytest.raises(MissingVertex):
        build_complex({0: (0.0,)}, [(0, 5)])


def test_isolated_vertex_kept():
    K = build_complex({0: (0.0,), 1: (1.0,), 2: (5.0,)}, [(0, 1), (2,)])
    assert K.has_simplex((2,))


def test_bounded_geometry_pass(triangle):
    rep = validate_bounded_geometry(triangle, L=1.0, N=6)
    assert rep.passes
    assert rep.max_vertex_degree == 2
    assert rep.min_edge_length == pytest.approx(1.0)


def test_bounded_geometry_edge_window():
    K = build_complex({0: (0.0,), 1: (3.0,)}, [(0, 1)])
    rep = validate_bounded_geometry(K, L=2.0, N=6)
    assert not rep.passes
    assert any("edge length" in msg for _, msg in rep.violations)


def test_bounded_geometry_degree_and_connectivity():
    # star with 7 edges at vertex 0
    verts = {i: (math.cos(i), math.sin(i)) for i in range(1, 8)}
    verts[0] = (0.0, 0.0)
    K = build_complex(verts, [(0, i) for i in range(1, 8)])
    assert not validate_bounded_geometry(K, L=2.0, N=6).passes
    # two components
    K2 = build_complex({0: (0.0,), 1: (1.0,), 2: (3.0,), 3: (4.0,)}, [(0, 1), (2, 3)])
    rep = validate_bounded_geometry(K2, L=1.0, N=6)
    assert not rep.passes


def test_skeleton_and_star():
    K = simplex_complex(3)
    S1 = skeleton(K, 1)
    assert S1.dim == 1
    assert len(S1.simplices_of_dim(1)) == 6
    assert is_subcomplex(S1, K)
    with pytest.raises(BadDimension):
        skeleton(K, 7)
    st0 = star(K, 0)
    assert st0.has_simplex((0, 1, 2, 3))
    assert is_subcomplex(st0, K)


def test_subdivision_flag_counts(triangle):
    Kp = barycentric_subdivide(triangle)
    assert len(Kp.maximal_simplices()) == 6  # (2+1)! flags
    K3p = barycentric_subdivide(simplex_complex(3))
    assert len(K3p.maximal_simplices()) == 24  # (3+1)!


def test_subdivision_preserves_euler_and_vertices(triangle):
    Kp = barycentric_subdivide(triangle)
    assert Kp.euler_characteristic() == triangle.euler_characteristic()
    for v in triangle.vertices:
        assert Kp.has_simplex((v,))
    # barycenter of the triangle sits at the centroid
    cents = [xy for v, xy in Kp.vertices.items() if v not in triangle.vertices]
    assert any(
        abs(x - 0.5) < 1e-12 and abs(y - math.sqrt(3) / 6) < 1e-12 for x, y in cents
    )


def test_pi_sequence_validity():
    assert PiSequence((2.0, 4.0), 1).is_valid()
    assert not PiSequence((1.0, 4.0), 1).is_valid()  # p must exceed 1
    # Sobolev step violated: 1/1.5 - 1/10 = 0.567 > 1/2
    assert not PiSequence((10.0, 1.5, 2.0), 2).is_valid()
    assert PiSequence((4.0, 2.0), 1).is_non_increasing()
    assert not PiSequence((2.0, 4.0), 1).is_non_increasing()


def test_ray_complex_counts():
    K = ray_complex(1, 5)
    assert len(K.simplices_of_dim(0)) == 6
    assert len(K.simplices_of_dim(1)) == 5
    S = ray_complex(2, 4)
    assert len(S.maximal_simplices()) == 8
    assert validate_bounded_geometry(S, L=1.5, N=8).passes


def test_cube_boundary():
    assert cube_boundary_complex(1).dim == 0
    sq = cube_boundary_complex(2)
    assert len(sq.simplices_of_dim(1)) == 4
    assert sq.euler_characteristic() == 0
    with pytest.raises(BadDimension):
        cube_boundary_complex(3)


def test_volumes(triangle):
    assert triangle.volume((0, 1)) == pytest.approx(1.0)
    assert triangle.volume((0, 1, 2)) == pytest.approx(math.sqrt(3) / 4)
    K3 = sphere_complex(2)
    # faces of the unit-coordinate 3-simplex boundary: side lengths sqrt 2
    assert K3.volume((0, 1, 2)) == pytest.approx(math.sqrt(3) / 2)


def test_io_round_trip(subdivided_triangle):
    text = write_complex(subdivided_triangle)
    K2 = read_complex(text)
    assert write_complex(K2) == text
    assert K2.simplices == subdivided_triangle.simplices


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=12))
def test_path_subdivision_euler(m):
    K = ray_complex(1, m)
    Kp = barycentric_subdivide(K)
    assert Kp.euler_characteristic() == K.euler_characteristic() == 1
    assert len(Kp.simplices_of_dim(1)) == 2 * m
