import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpiforms.complexes import PiSequence
from lpiforms.errors import BadEpsilon, NotACounterexample
from lpiforms.nontrivial import (
    build_family,
    bump_profile,
    derham_kernel_check,
    family_norm_series,
    integral_test_brackets,
    p_series,
    subdivision_image,
    swapped_series,
    verify_nontriviality,
)

PI = PiSequence((2.0, 4.0), 1)


def test_bump_profile_values():
    assert bump_profile(0.0) == pytest.approx(math.exp(-1.0))
    assert bump_profile(1.0) == 0.0
    assert bump_profile(-2.5) == 0.0
    assert bump_profile(0.37) == pytest.approx(bump_profile(-0.37))
    # 2-D
    assert bump_profile(np.array([0.0, 0.0]), n=2) == pytest.approx(math.exp(-1.0))
    assert bump_profile(np.array([0.8, 0.8]), n=2) == 0.0


def test_build_family_preconditions():
    with pytest.raises(NotACounterexample):
        build_family(0, PiSequence((4.0, 2.0), 1), 1.0, 10)
    with pytest.raises(BadEpsilon):
        build_family(0, PI, 2.0, 10)  # boundary of (0, 2)
    with pytest.raises(BadEpsilon):
        build_family(0, PI, 0.0, 10)


def test_weights_decreasing_and_values():
    fam = build_family(0, PI, 1.0, 100)
    ws = fam.weight(np.arange(1, 101))
    assert np.all(np.diff(ws) < 0)
    assert fam.weight(1) == pytest.approx(1.0)
    assert fam.weight(8) == pytest.approx(0.5)  # (1/8)^(1/3)
    assert fam.sup_omega(1) == pytest.approx(math.exp(-1.0))


def test_support_disjointness():
    fam = build_family(0, PI, 1.0, 20)
    # bump i vanishes outside the open edge (i-1, i)
    for i in (1, 5, 20):
        assert fam.evaluate(i, i - 1.0) == 0.0
        assert fam.evaluate(i, float(i)) == 0.0
        assert fam.evaluate(i, i - 0.5) == pytest.approx(
            float(fam.weight(i)) * math.exp(-1.0)
        )


@settings(max_examples=30, deadline=None)
@given(st.floats(0.2, 3.0, allow_nan=False))
def test_series_verdict_sound(a):
    v = p_series(a, [10, 100, 1000])
    assert (v.verdict == "converges") == (a > 1.0)
    for m, s in v.partial_sums:
        lo, hi = integral_test_brackets(a, m)
        assert lo - 1e-9 <= s <= hi + 1e-9


def test_divergent_growth_rate():
    v = p_series(2.0 / 3.0, [10**4, 10**5])
    for m, s in v.partial_sums:
        assert 0.9 <= s / (3.0 * m ** (1.0 / 3.0)) <= 1.1


def test_family_norm_series_exponents():
    fam = build_family(0, PI, 1.0, 1000)
    hi = family_norm_series(fam, 4.0, "form")
    lo = family_norm_series(fam, 2.0, "dform")
    assert hi.exponent == pytest.approx(4.0 / 3.0)
    assert hi.verdict == "converges"
    assert lo.exponent == pytest.approx(2.0 / 3.0)
    assert lo.verdict == "diverges"
    # boundary p = p_{k+1} - eps gives the harmonic series
    assert family_norm_series(fam, 3.0, "sup").verdict == "diverges"


def test_kernel_check():
    fam = build_family(0, PI, 1.0, 50)
    rep = derham_kernel_check(fam)
    assert rep.max_residual <= 1e-12


def test_subdivision_image_entries():
    fam = build_family(0, PI, 1.0, 50)
    rep = subdivision_image(fam)
    assert rep.magnitude_constant == pytest.approx(math.exp(-1.0))
    assert rep.max_constant_error <= 1e-12
    assert rep.opposite_signs
    assert rep.lp_high.verdict == "converges"
    assert rep.lp_low.verdict == "diverges"
    # each bump contributes exactly two half-edge entries
    assert len(rep.cochain.values) == 2 * fam.geometry_cap


def test_verify_nontriviality_and_csv():
    rep = verify_nontriviality(PI, 1.0, [100, 10**4])
    assert rep.passed
    lines = rep.csv().splitlines()
    assert lines[0] == "m,S_pk,S_pk1,tail_bound"
    assert len(lines) >= 4


def test_swapped_sequence_all_converge():
    out = swapped_series(PiSequence((4.0, 2.0), 1), 1.0, 10**4)
    assert all(v.verdict == "converges" for v in out.values())
    assert sorted(v.exponent for v in out.values()) == [2.0, 4.0]
