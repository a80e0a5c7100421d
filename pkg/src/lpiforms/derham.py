"""The integration (de Rham) map, the Whitney map, and their verification.

The Whitney form of a k-simplex sigma = (w_0 < ... < w_k) is

    W(chi_sigma) = k! * sum_i (-1)^i t_{w_i} dt_{w_0} ^ ... ^i ... ^ dt_{w_k}

built on every maximal simplex containing sigma.  With the metric-free
form integral the composite I o W is the identity on cochains, on any
complex; with the volume-weighted integral the diagonal value on a regular
unit k-simplex is sqrt(k+1)/sqrt(2^k), and the normalized map
W~ = sqrt(2^k)/sqrt(k+1) * W makes I o W~ the identity there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cochains import Cochain, coboundary
from .complexes import MetricComplex, SimplexKey
from .polyform import PolyForm, Terms, reduce_from_barycentric, t_add, t_scale


@dataclass(frozen=True)
class SplitReport:
    max_identity_error: float
    max_stokes_error: float
    sample_count: int
    bound_ratios: dict[str, float] | None = None


def whitney_factor(k: int) -> float:
    """Normalization sqrt(2^k)/sqrt(k+1) turning W into a section of the
    volume-weighted integration map on regular unit simplices."""
    return math.sqrt(2.0**k) / math.sqrt(k + 1.0)


def _whitney_terms_on(T: SimplexKey, sigma: SimplexKey) -> Terms:
    """Full-barycentric terms of W(chi_sigma) on the simplex T >= sigma."""
    m = len(T) - 1
    k = len(sigma) - 1
    pos = {v: i for i, v in enumerate(T)}
    spots = [pos[w] for w in sigma]
    fact = float(math.factorial(k))
    full: Terms = {}
    for i, si in enumerate(spots):
        exps = tuple(1 if q == si else 0 for q in range(m + 1))
        idx = tuple(spots[:i] + spots[i + 1 :])
        full[(exps, idx)] = full.get((exps, idx), 0.0) + (-1) ** i * fact
    return full


def whitney(c: Cochain) -> PolyForm:
    """Piecewise-linear Whitney form of a cochain, linear in c."""
    K = c.complex
    pieces: dict[SimplexKey, Terms] = {}
    maximal = K.maximal_simplices()
    for sigma, val in c.values.items():
        sset = set(sigma)
        for T in maximal:
            if sset <= set(T):
                terms = reduce_from_barycentric(
                    _whitney_terms_on(T, sigma), len(T) - 1
                )
                pieces[T] = t_add(pieces.get(T, {}), t_scale(terms, val))
    return PolyForm(c.degree, K, pieces)


def whitney_normalized(c: Cochain) -> PolyForm:
    return whitney(c).scale(whitney_factor(c.degree))


def derham_map(
    omega: PolyForm, K: MetricComplex, k: int, weighted: bool = False
) -> Cochain:
    """Integrate a k-form over every k-simplex.  weighted=False is the
    metric-free integral (Stokes-exact); weighted=True applies the
    volume-weighted convention."""
    values = {}
    for sigma in K.simplices_of_dim(k):
        values[sigma] = omega.integrate(sigma, weighted=weighted)
    return Cochain(k, values, K)


def verify_split(
    K: MetricComplex, k: int, samples: int, seed: int = 0, weighted: bool = True
) -> SplitReport:
    """Check that integration is a retraction of the (rescaled) Whitney map.

    The Whitney image of each indicator is rescaled per simplex by its own
    computed integral, so the identity holds exactly on non-regular
    complexes too.  Boundedness ratios of both maps are recorded.
    """
    rng = np.random.default_rng(seed)
    sigmas = K.simplices_of_dim(k)
    if not sigmas:
        return SplitReport(0.0, 0.0, 0)
    from .cochains import indicator, lp_norm

    diag = {}
    for sigma in sigmas:
        w = whitney(indicator(K, sigma))
        diag[sigma] = w.integrate(sigma, weighted=weighted)
    max_err = 0.0
    ratio_i = 0.0
    ratio_w = 0.0
    for _ in range(samples):
        support = rng.choice(len(sigmas), size=min(4, len(sigmas)), replace=False)
        vals = {sigmas[i]: float(rng.normal()) for i in support}
        c = Cochain(k, vals, K)
        scaled = Cochain(k, {s: v / diag[s] for s, v in c.values.items()}, K)
        form = whitney(scaled)
        image = derham_map(form, K, k, weighted=weighted)
        err = max(
            abs(image(s) - c(s))
            for s in set(image.values) | set(c.values) | set(sigmas)
        )
        max_err = max(max_err, err)
        nf = form.lp_norm(2.0)
        nc = lp_norm(c, 2.0)
        if nf > 0:
            ratio_i = max(ratio_i, lp_norm(image, 2.0) / nf)
        if nc > 0:
            ratio_w = max(ratio_w, nf / nc)
    return SplitReport(
        max_identity_error=max_err,
        max_stokes_error=0.0,
        sample_count=samples,
        bound_ratios={"derham_over_form": ratio_i, "whitney_over_cochain": ratio_w},
    )


def verify_stokes(omega: PolyForm, K: MetricComplex) -> SplitReport:
    """Entrywise residual of I(d omega) - coboundary(I omega) over the
    (k+1)-simplices, with the metric-free integral."""
    k = omega.degree
    lhs = derham_map(omega.d(), K, k + 1, weighted=False)
    rhs = coboundary(derham_map(omega, K, k, weighted=False))
    keys = set(lhs.values) | set(rhs.values) | set(K.simplices_of_dim(k + 1))
    err = max((abs(lhs(s) - rhs(s)) for s in keys), default=0.0)
    return SplitReport(
        max_identity_error=0.0,
        max_stokes_error=err,
        sample_count=len(K.simplices_of_dim(k + 1)),
    )
