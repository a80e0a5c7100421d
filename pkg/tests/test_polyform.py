import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpiforms.cochains import Cochain
from lpiforms.complexes import PiSequence, cube_boundary_complex
from lpiforms.derham import whitney
from lpiforms.errors import BadCarrier, BadDimension, BadExponent
from lpiforms.polyform import (
    PolyForm,
    monomial_integral,
    prism_extend,
    simplex_rule,
    t_add,
    t_d,
    t_wedge,
)

from conftest import regular_simplex, simplex_complex


def test_monomial_integral_values():
    # relative to unit total mass: int_0^1 t^a dt / 1 = 1/(a+1)
    assert monomial_integral((2,), 1) == pytest.approx(1.0 / 3.0)
    assert monomial_integral((1, 1), 2) == pytest.approx(
        2.0 * 1.0 / math.factorial(4)
    )
    assert monomial_integral((), 0) == 1.0


@pytest.mark.parametrize("m", [1, 2, 3])
def test_quadrature_matches_monomials(m):
    pts, wts = simplex_rule(m, 6)
    rng = np.random.default_rng(1)
    for _ in range(10):
        exps = tuple(int(rng.integers(0, 3)) for _ in range(m))
        approx = sum(w * np.prod(x**np.array(exps)) for x, w in zip(pts, wts))
        assert approx == pytest.approx(monomial_integral(exps, m), abs=1e-13)


def test_exterior_derivative_known():
    # d(t1) = dt1 on a triangle
    terms = {((1, 0), ()): 1.0}
    assert t_d(terms, 2) == {((0, 0), (1,)): 1.0}
    # d(t1 dt2) = dt1 ^ dt2
    assert t_d({((1, 0), (2,)): 1.0}, 2) == {((0, 0), (1, 2)): 1.0}
    # d(t2 dt1) = -dt1 ^ dt2
    assert t_d({((0, 1), (1,)): 1.0}, 2) == {((0, 0), (1, 2)): -1.0}


def _random_terms(rng, m, k, nterms=3):
    terms = {}
    for _ in range(nterms):
        exps = tuple(int(rng.integers(0, 3)) for _ in range(m))
        idx = tuple(sorted(rng.choice(m, size=k, replace=False) + 1))
        terms[(exps, idx)] = float(rng.normal())
    return terms


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2), st.integers(0, 10_000))
def test_dd_zero_symbolic(k, seed):
    rng = np.random.default_rng(seed)
    m = 3
    terms = _random_terms(rng, m, k)
    assert t_d(t_d(terms, m), m) == {}


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 1), st.integers(1, 2), st.integers(0, 10_000))
def test_leibniz_rule(k, l, seed):
    rng = np.random.default_rng(seed)
    m = 3
    a = _random_terms(rng, m, k)
    b = _random_terms(rng, m, l)
    lhs = t_d(t_wedge(a, b), m)
    rhs = t_add(t_wedge(t_d(a, m), b), t_wedge(a, t_d(b, m)), (-1.0) ** k)
    diff = t_add(lhs, rhs, -1.0)
    assert all(abs(v) < 1e-10 for v in diff.values())


def test_wedge_anticommutes():
    rng = np.random.default_rng(3)
    a = _random_terms(rng, 3, 1)
    b = _random_terms(rng, 3, 1)
    diff = t_add(t_wedge(a, b), t_wedge(b, a))
    assert all(abs(v) < 1e-12 for v in diff.values())


def test_wedge_degree_overflow():
    K = simplex_complex(1)
    one = PolyForm(1, K, {(0, 1): {((0,), (1,)): 1.0}})
    with pytest.raises(BadDimension):
        one.wedge(one)


def test_integrate_weighted_vs_plain():
    # dt1 over a unit edge: plain integral 1, weighted = length = 1
    K = simplex_complex(1)
    om = PolyForm(1, K, {(0, 1): {((0,), (1,)): 1.0}})
    assert om.integrate((0, 1), weighted=False) == pytest.approx(1.0)
    assert om.integrate((0, 1), weighted=True) == pytest.approx(1.0)
    # orientation flip
    assert om.integrate((1, 0), weighted=False) == pytest.approx(-1.0)
    # on a regular triangle dt1^dt2: plain 1/2, weighted vol
    T = regular_simplex(2)
    om2 = PolyForm(2, T, {(0, 1, 2): {((0, 0), (1, 2)): 1.0}})
    assert om2.integrate((0, 1, 2), weighted=False) == pytest.approx(0.5)
    assert om2.integrate((0, 1, 2), weighted=True) == pytest.approx(
        math.sqrt(3) / 4
    )


def test_trace_and_restrict(triangle):
    om = PolyForm(0, triangle, {(0, 1, 2): {((1, 0), ()): 1.0}})  # t_1
    tr = om.trace_on((0, 1))
    # on edge (0,1), t_1 restricts to the edge coordinate
    assert tr == {((1,), ()): 1.0}
    assert om.trace_on((0, 2)) == {}  # t_1 = 0 there
    from lpiforms.complexes import skeleton

    rest = om.restrict(skeleton(triangle, 1))
    assert rest.trace_on((0, 1)) == {((1,), ()): 1.0}


def test_lp_norm_constant():
    K = simplex_complex(1)  # one unit edge
    one = PolyForm.constant(K, 1.0)
    assert one.lp_norm(2.0) == pytest.approx(1.0)
    assert one.lp_norm(3.0) == pytest.approx(1.0)
    with pytest.raises(BadExponent):
        one.lp_norm(0.5)


def test_norm_at_one_form():
    # f dt1 on an edge of length 2: |omega| = |f| / 2
    from lpiforms.complexes import build_complex

    K = build_complex({0: (0.0,), 1: (2.0,)}, [(0, 1)])
    om = PolyForm(1, K, {(0, 1): {((0,), (1,)): 3.0}})
    assert om.norm_at((0, 1), np.array([0.5])) == pytest.approx(1.5)


def test_sup_and_sl_pi_norms():
    K = simplex_complex(1)
    om = PolyForm(0, K, {(0, 1): {((1,), ()): 1.0}})  # t_1 on the edge
    assert om.sup_norm((0, 1)) == pytest.approx(1.0)
    pi = PiSequence((2.0, 2.0), 1)
    # sup|t_1| = 1 and sup|dt_1| = 1
    assert om.sl_pi_norm(pi) == pytest.approx(2.0)
    assert om.omega_pi_norm(pi) == pytest.approx(1.0 / math.sqrt(3) + 1.0)


def test_continuity_defect_whitney(subdivided_triangle):
    rng = np.random.default_rng(5)
    sig = subdivided_triangle.simplices_of_dim(1)
    c = Cochain(1, {s: float(rng.normal()) for s in sig}, subdivided_triangle)
    assert whitney(c).continuity_defect() <= 1e-12


def test_prism_extend_base_and_top():
    K = cube_boundary_complex(1)
    om = PolyForm(0, K, {(0,): {((), ()): 2.0}, (1,): {((), ()): -1.0}})
    ext = prism_extend(om, 1)
    # base vertex of the prism edge over point 0 carries value 2, top carries 0
    found = {v: xy for v, xy in ext.complex.vertices.items()}
    for T in ext.complex.maximal_simplices():
        base = [v for v in T if found[v][-1] == 0.0][0]
        top = [v for v in T if found[v][-1] == 1.0][0]
        vals = {}
        for v, t in ((base, None), (top, None)):
            tr = ext.trace_on((v,))
            vals[v] = tr.get(((), ()), 0.0)
        assert vals[top] == pytest.approx(0.0)
        assert abs(vals[base]) in (pytest.approx(2.0), pytest.approx(1.0))


def test_prism_extend_rejects_bad_carrier(triangle):
    om = PolyForm.constant(triangle, 1.0)
    with pytest.raises(BadCarrier):
        prism_extend(om, 2)


def test_holder_embedding_on_triangle(subdivided_triangle):
    S = subdivided_triangle
    mes = sum(S.volume(T) for T in S.maximal_simplices())
    rng = np.random.default_rng(11)
    for _ in range(10):
        pieces = {T: _random_terms(rng, 2, 0) for T in S.maximal_simplices()}
        g = PolyForm(0, S, pieces)
        assert g.lp_norm(2.0) <= mes ** (1 / 2 - 1 / 4) * g.lp_norm(4.0) + 1e-8
