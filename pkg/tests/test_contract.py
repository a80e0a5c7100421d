import numpy as np
import pytest

from lpiforms.complexes import barycentric_subdivide, build_complex, ray_complex
from lpiforms.contract import (
    Contraction,
    ContractionFailure,
    MatrixComplex,
    assemble,
    cohomology_dims,
    contract,
    rational_cohomology_dims,
    verify_contraction,
)

from conftest import simplex_complex, sphere_complex


def test_assemble_single_edge():
    M = assemble(build_complex({0: (0.0,), 1: (1.0,)}, [(0, 1)]))
    assert M.dims == (2, 1)
    assert np.array_equal(M.matrix(0), [[-1.0, 1.0]])


def test_dd_zero_matrix():
    M = assemble(simplex_complex(2))
    assert np.abs(M.matrix(1) @ M.matrix(0)).max() == 0.0
    assert M.dims == (3, 3, 1)


def test_cohomology_known_spaces():
    assert cohomology_dims(assemble(sphere_complex(1))) == [1, 1]
    assert cohomology_dims(assemble(sphere_complex(2))) == [1, 0, 1]
    assert cohomology_dims(assemble(simplex_complex(3))) == [1, 0, 0, 0]
    assert cohomology_dims(assemble(ray_complex(1, 6))) == [1, 0]


@pytest.mark.parametrize(
    "K",
    [
        simplex_complex(2),
        simplex_complex(3),
        sphere_complex(1),
        sphere_complex(2),
        ray_complex(2, 3),
    ],
    ids=["tri", "tet", "circle", "sphere", "strip"],
)
def test_rational_oracle_agrees(K):
    M = assemble(K)
    assert cohomology_dims(M) == rational_cohomology_dims(M)


def test_contract_acyclic_augmented():
    for K in (simplex_complex(1), simplex_complex(2), simplex_complex(3),
              barycentric_subdivide(simplex_complex(2))):
        M = assemble(K, augmented=True)
        h = contract(M)
        assert isinstance(h, Contraction)
        rep = verify_contraction(M, h, tol=1e-8)
        assert rep.passed


def test_contract_positive_degrees_unaugmented():
    M = assemble(simplex_complex(2))
    h = contract(M)
    assert isinstance(h, Contraction)
    assert verify_contraction(M, h, tol=1e-8).passed


def test_contract_fails_on_spheres():
    res1 = contract(assemble(sphere_complex(1)))
    assert isinstance(res1, ContractionFailure)
    assert res1.degree == 1
    assert res1.residual > 1e-3
    res2 = contract(assemble(sphere_complex(2)))
    assert isinstance(res2, ContractionFailure)
    assert res2.degree == 2


def test_identity_two_term_complex():
    M = MatrixComplex((1, 1), (np.eye(1),))
    h = contract(M)
    assert isinstance(h, Contraction)
    assert verify_contraction(M, h).max_residual == 0.0


def test_zero_homotopy_has_unit_residual():
    M = assemble(simplex_complex(2), augmented=True)
    h = Contraction({i: np.zeros((M.dims[i - 1], M.dims[i]))
                     for i in range(1, M.top + 1)})
    assert verify_contraction(M, h).max_residual == pytest.approx(1.0)


def test_size_refusal():
    K = ray_complex(1, 1500)  # 3001 simplices
    with pytest.raises(ValueError):
        assemble(K)


def test_dump_format():
    M = assemble(simplex_complex(1))
    lines = M.dump().splitlines()
    assert lines[0] == "D 0 1 2"
