"""Weighted bump family on a truncated ray and its convergence diagnostics.

For a degree sequence with p_k < p_{k+1} and 0 < eps < p_{k+1} - p_k, the
forms omega_i = i^(-1/(p_{k+1}-eps)) * Psi_i (one smooth bump per cell,
supports pairwise disjoint) integrate to zero over every simplex of the
host complex, yet the p-series controlling their Sobolev norms converge
at exponent p_{k+1} and diverge at exponent p_k.  On the barycentric
subdivision the integrals no longer cancel, so the image cochain exhibits
the same convergent/divergent gap; this is the numeric content of the
obstruction to splitting off the kernel of the integration map.

Series are evaluated in closed vectorized form up to the full truncation
length (10^6 by default) while the host complex itself is only built up
to a geometry cap, since the per-bump geometry is identical beyond it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cochains import Cochain
from .complexes import MetricComplex, PiSequence, barycentric_subdivide, ray_complex
from .errors import BadEpsilon, NotACounterexample

GEOMETRY_CAP = 1000


def bump_profile(x, n: int = 1):
    """Psi(x) = exp(1/(|x|^2 - 1)) inside the unit ball, 0 outside."""
    x = np.asarray(x, dtype=float)
    if n == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        r2 = x**2
    else:
        r2 = (x**2).sum(axis=-1)
    out = np.zeros_like(r2, dtype=float)
    inside = r2 < 1.0
    out[inside] = np.exp(1.0 / (r2[inside] - 1.0))
    if out.ndim == 0:
        return float(out)
    return out


def bump_profile_deriv(u):
    """d/du of the 1-D profile: Psi(u) * (-2u / (u^2 - 1)^2)."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u, dtype=float)
    inside = u**2 < 1.0
    ui = u[inside]
    out[inside] = np.exp(1.0 / (ui**2 - 1.0)) * (-2.0 * ui / (ui**2 - 1.0) ** 2)
    return out


def profile_reference_integral(p: float, n: int = 1, quad: int = 200) -> float:
    """c_p = (integral of Psi^p over the unit ball)^(1/p), by quadrature."""
    t, w = np.polynomial.legendre.leggauss(quad)
    if n == 1:
        val = float(np.sum(w * bump_profile(t) ** p))
    else:
        # tensor rule on the square; Psi vanishes outside the disc anyway
        X, Y = np.meshgrid(t, t, indexing="ij")
        W = np.outer(w, w)
        val = float(np.sum(W * bump_profile(np.stack([X, Y], -1), n=2) ** p))
    return val ** (1.0 / p)


@dataclass(frozen=True)
class SeriesVerdict:
    """Integral-test verdict for sum_i i^(-a), with partial sums recorded
    at checkpoint truncations and a tail bound when convergent."""

    exponent: float
    verdict: str  # "converges" | "diverges"
    partial_sums: tuple[tuple[int, float], ...]
    tail_bound: float
    constant: float = 1.0

    def sum_at(self, m: int) -> float:
        for mm, s in self.partial_sums:
            if mm == m:
                return s
        raise KeyError(m)


def p_series(a: float, checkpoints: list[int]) -> SeriesVerdict:
    """Partial sums of sum i^(-a) at the given truncations, plus the
    integral-test verdict (converges iff a > 1) and tail bound
    m^(1-a)/(a-1) at the largest checkpoint."""
    checkpoints = sorted(set(int(m) for m in checkpoints))
    M = checkpoints[-1]
    terms = np.arange(1, M + 1, dtype=float) ** (-a)
    csum = np.cumsum(terms)
    sums = tuple((m, float(csum[m - 1])) for m in checkpoints)
    converges = a > 1.0
    tail = M ** (1.0 - a) / (a - 1.0) if converges else math.inf
    return SeriesVerdict(
        exponent=a,
        verdict="converges" if converges else "diverges",
        partial_sums=sums,
        tail_bound=tail,
    )


def integral_test_brackets(a: float, m: int) -> tuple[float, float]:
    """Bounds int_1^{m+1} x^-a dx <= S_m <= 1 + int_1^m x^-a dx."""
    def F(b):
        if a == 1.0:
            return math.log(b)
        return (b ** (1.0 - a) - 1.0) / (1.0 - a)
    return F(m + 1), 1.0 + F(m)


@dataclass(frozen=True)
class BumpFamily:
    """The bumps omega_i = w_i Psi_i, i = 1..M, with w_i = i^(-1/(p_{k+1}-eps)),
    each supported in the interior of the i-th top cell of a truncated ray."""

    k: int
    pi: PiSequence
    eps: float
    M: int
    host: MetricComplex = field(repr=False)
    subdivided: MetricComplex = field(repr=False)
    geometry_cap: int = GEOMETRY_CAP

    @property
    def n(self) -> int:
        return self.k + 1

    @property
    def decay(self) -> float:
        return 1.0 / (self.pi[self.k + 1] - self.eps)

    def weight(self, i) -> float:
        return np.asarray(i, dtype=float) ** (-self.decay)

    def sup_omega(self, i) -> float:
        """sup |omega_i| = sqrt(binom(n,k)) * w_i * max Psi, max Psi = 1/e."""
        return math.sqrt(math.comb(self.n, self.k)) * self.weight(i) * math.exp(-1.0)

    def series_exponent(self, p: float) -> float:
        return p * self.decay

    def evaluate(self, i: int, x: float) -> float:
        """The scalar coefficient of omega_i at a point of the 1-D ray."""
        return float(self.weight(i)) * float(bump_profile(2.0 * x - (2.0 * i - 1.0)))


def build_family(k: int, pi: PiSequence, eps: float, M: int) -> BumpFamily:
    if pi[k] >= pi[k + 1]:
        raise NotACounterexample(
            f"p_{k} = {pi[k]} >= p_{k + 1} = {pi[k + 1]}: monotone sequence"
        )
    gap = pi[k + 1] - pi[k]
    if not (0.0 < eps < gap):
        raise BadEpsilon(f"eps = {eps} outside (0, {gap})")
    if k != 0:
        raise NotACounterexample("only the 1-D family (k = 0) is constructed")
    geo = min(M, GEOMETRY_CAP)
    host = ray_complex(1, geo)
    return BumpFamily(
        k=k, pi=pi, eps=eps, M=M,
        host=host, subdivided=barycentric_subdivide(host), geometry_cap=geo,
    )


def family_norm_series(fam: BumpFamily, p: float, which: str = "form") -> SeriesVerdict:
    """Verdict for the p-series governing the chosen norm of the family.

    which = "form": L_p of sum omega_i (constant c_p from the profile);
    "dform": L_p of the derivative family; "sup"/"cochain": sup-based
    constants sqrt(binom(n,k))/e.  The partial sums themselves are of the
    raw series sum i^(-a); the multiplicative constant is reported
    separately so the recorded sums match the integral-test oracle.
    """
    a = fam.series_exponent(p)
    checkpoints = [10**j for j in range(1, int(math.log10(fam.M)) + 1)]
    if fam.M not in checkpoints:
        checkpoints.append(fam.M)
    base = p_series(a, checkpoints)
    if which == "form":
        const = profile_reference_integral(p, n=fam.n) / 2.0 ** (1.0 / p)
    elif which == "dform":
        const = profile_reference_integral(p, n=fam.n)  # derivative scale folded out
    else:
        const = math.sqrt(math.comb(fam.n, fam.k)) * math.exp(-1.0)
    return SeriesVerdict(base.exponent, base.verdict, base.partial_sums,
                         base.tail_bound, constant=const)


def _edge_quad(fn, x0: float, x1: float, nodes: int = 96) -> float:
    t, w = np.polynomial.legendre.leggauss(nodes)
    x = 0.5 * (x0 + x1) + 0.5 * (x1 - x0) * t
    return 0.5 * (x1 - x0) * float(np.sum(w * fn(x)))


@dataclass(frozen=True)
class KernelReport:
    max_point_value: float
    max_edge_integral: float
    bumps_checked: int

    @property
    def max_residual(self) -> float:
        return max(self.max_point_value, self.max_edge_integral)


def derham_kernel_check(fam: BumpFamily, limit: int | None = None) -> KernelReport:
    """Integrate omega_i over vertices and d(omega_i) over edges of the
    host ray; all values must vanish (supports are interior to single
    edges, and each edge integral of the derivative telescopes to 0)."""
    geo = fam.geometry_cap if limit is None else min(limit, fam.geometry_cap)
    worst_pt = 0.0
    worst_edge = 0.0
    for i in range(1, geo + 1):
        w = float(fam.weight(i))
        # omega_i at the vertices of its carrier edge (x = i-1 and x = i)
        for x in (float(i - 1), float(i)):
            worst_pt = max(worst_pt, abs(w * float(bump_profile(2 * x - (2 * i - 1)))))
        dfn = lambda x, ii=i, ww=w: 2.0 * ww * bump_profile_deriv(2 * x - (2 * ii - 1))
        worst_edge = max(worst_edge, abs(_edge_quad(dfn, float(i - 1), float(i))))
    return KernelReport(worst_pt, worst_edge, geo)


@dataclass(frozen=True)
class ImageReport:
    cochain: Cochain
    magnitude_constant: float  # C with |entries| = C * w_i; C = 1/e
    max_constant_error: float
    opposite_signs: bool
    lp_high: SeriesVerdict  # l_{p_{k+1}} of the image entries (converges)
    lp_low: SeriesVerdict   # l_{p_k} of the image entries (diverges)


def subdivision_image(fam: BumpFamily) -> ImageReport:
    """The cochain I(d omega) on the subdivided ray.

    Each bump contributes +/- (1/e) w_i on the two half-edges of its
    carrier (signs opposite when both halves are oriented by increasing
    coordinate).  The l_p series of the entries are 2 (w_i/e)^p summed,
    convergent at p_{k+1} and divergent at p_k.
    """
    Kp = fam.subdivided
    geo = fam.geometry_cap
    mid_id = {}  # carrier index -> barycenter vertex id, via coordinates
    for v, xy in Kp.vertices.items():
        x = xy[0]
        if abs(x - round(x)) > 1e-9:  # midpoint of edge (i-1, i)
            mid_id[int(round(x + 0.5))] = v
    values = {}
    worst = 0.0
    C = math.exp(-1.0)
    signs_ok = True
    for i in range(1, geo + 1):
        w = float(fam.weight(i))
        b = mid_id[i]
        oriented = []
        for v0 in (i - 1, i):
            key = tuple(sorted((v0, b)))
            x0, x1 = Kp.vertices[key[0]][0], Kp.vertices[key[1]][0]
            dfn = lambda x, ii=i, ww=w: 2.0 * ww * bump_profile_deriv(2 * x - (2 * ii - 1))
            val = _edge_quad(dfn, x0, x1)
            values[key] = val
            worst = max(worst, abs(abs(val) - C * w))
            # re-orient by increasing coordinate for the sign pattern
            lo, hi = min(x0, x1), max(x0, x1)
            oriented.append(val if x1 > x0 else -val)
        if oriented[0] * oriented[1] >= 0.0:
            signs_ok = False
    c = Cochain(1 if fam.k == 0 else fam.k + 1, values, Kp)
    a_hi = fam.series_exponent(fam.pi[fam.k + 1])
    a_lo = fam.series_exponent(fam.pi[fam.k])
    checkpoints = [10**j for j in range(1, int(math.log10(fam.M)) + 1)]
    if fam.M not in checkpoints:
        checkpoints.append(fam.M)
    hi = p_series(a_hi, checkpoints)
    lo = p_series(a_lo, checkpoints)
    const = 2.0 ** (1.0 / fam.pi[fam.k + 1]) * C
    hi = SeriesVerdict(hi.exponent, hi.verdict, hi.partial_sums, hi.tail_bound, const)
    const_lo = 2.0 ** (1.0 / fam.pi[fam.k]) * C
    lo = SeriesVerdict(lo.exponent, lo.verdict, lo.partial_sums, lo.tail_bound, const_lo)
    return ImageReport(c, C, worst, signs_ok, hi, lo)


@dataclass(frozen=True)
class NonTrivReport:
    family: BumpFamily = field(repr=False)
    kernel: KernelReport
    omega_high: SeriesVerdict
    domega_high: SeriesVerdict
    domega_low: SeriesVerdict
    image: ImageReport
    growth_ratio: float  # S_m / (m^(1-a)/(1-a)) at the largest checkpoint
    passed: bool

    def csv(self) -> str:
        lines = ["m,S_pk,S_pk1,tail_bound"]
        for (m, s_lo), (_, s_hi) in zip(
            self.domega_low.partial_sums, self.domega_high.partial_sums
        ):
            a = self.domega_high.exponent
            tail = m ** (1.0 - a) / (a - 1.0)
            lines.append(f"{m},{s_lo!r},{s_hi!r},{tail!r}")
        return "\n".join(lines) + "\n"


def verify_nontriviality(
    pi: PiSequence, eps: float, M_list: list[int], k: int = 0
) -> NonTrivReport:
    """Bundle the four certificates of the counterexample: kernel
    membership, p_{k+1} convergence (for omega and d omega), p_k
    divergence, and the convergent/divergent gap of the subdivision image."""
    fam = build_family(k, pi, eps, max(M_list))
    kernel = derham_kernel_check(fam)
    omega_high = family_norm_series(fam, pi[k + 1], "form")
    domega_high = family_norm_series(fam, pi[k + 1], "dform")
    domega_low = family_norm_series(fam, pi[k], "dform")
    image = subdivision_image(fam)
    m_last, s_last = domega_low.partial_sums[-1]
    a = domega_low.exponent
    growth = s_last / (m_last ** (1.0 - a) / (1.0 - a)) if a < 1.0 else math.nan
    ok = (
        kernel.max_residual <= 1e-10
        and omega_high.verdict == "converges"
        and domega_high.verdict == "converges"
        and domega_low.verdict == "diverges"
        and image.lp_high.verdict == "converges"
        and image.lp_low.verdict == "diverges"
        and image.opposite_signs
        and image.max_constant_error <= 1e-10
    )
    return NonTrivReport(
        family=fam, kernel=kernel, omega_high=omega_high,
        domega_high=domega_high, domega_low=domega_low, image=image,
        growth_ratio=growth, passed=ok,
    )


def swapped_series(pi: PiSequence, eps: float, M: int, k: int = 0) -> dict[float, SeriesVerdict]:
    """Formal series for a non-increasing sequence: with p_k >= p_{k+1}
    the exponents p/(p_{k+1}-eps) exceed 1 at both norms and every series
    converges — the counterexample evaporates."""
    decay = 1.0 / (pi[k + 1] - eps)
    checkpoints = [10**j for j in range(1, int(math.log10(M)) + 1)]
    if M not in checkpoints:
        checkpoints.append(M)
    return {p: p_series(p * decay, checkpoints) for p in (pi[k], pi[k + 1])}
