"""Piecewise polynomial differential forms in barycentric coordinates.

A form of degree k is stored per maximal simplex of its carrier complex.
On a simplex T = (v_0 < ... < v_m) the coordinates are the reduced
barycentric variables t_1..t_m (t_0 = 1 - sum t_i is eliminated, and
dt_0 = -sum dt_i), so every piece has a unique canonical expansion

    sum_j  c_j * t^(a_j) * dt_{I_j},   I_j an ascending k-subset of {1..m}.

Terms are held as a dict mapping (exponents, diff-indices) to the
coefficient; zero coefficients are dropped.

Integration follows the volume-weighted barycentric monomial formula

    int_T t_1^{a_1} ... t_m^{a_m} dV = vol(T) * m! * prod(a_i!) / (m + sum a_i)!

so that the integral of dt_1 ^ ... ^ dt_k over a k-simplex equals its
Riemannian k-volume.  The metric-free (affine-invariant) integral, which
satisfies Stokes' theorem exactly against the alternating-sum coboundary,
is available with weighted=False; it differs by the factor k! * vol.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi

from .complexes import (
    MetricComplex,
    PiSequence,
    SimplexKey,
    build_complex,
    is_subcomplex,
)
from .errors import BadCarrier, BadDimension, BadExponent, BadSubcomplex

# a term key: (exponent tuple over t_1..t_m, ascending diff index tuple)
TermKey = tuple[tuple[int, ...], tuple[int, ...]]
Terms = dict[TermKey, float]


# ---------------------------------------------------------------------------
# canonical term algebra
# ---------------------------------------------------------------------------

def t_clean(terms: Terms) -> Terms:
    return {k: v for k, v in terms.items() if v != 0.0}

def t_add(a: Terms, b: Terms, bs: float = 1.0) -> Terms:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0.0) + bs * v
    return t_clean(out)

def t_scale(a: Terms, s: float) -> Terms:
    return t_clean({k: s * v for k, v in a.items()})

def _wedge_indices(i: tuple[int, ...], j: tuple[int, ...]):
    """Merge two ascending index tuples; return (sorted tuple, sign) or None."""
    if set(i) & set(j):
        return None
    merged = i + j
    order = sorted(range(len(merged)), key=lambda q: merged[q])
    # parity of the sorting permutation
    sign = 1
    seen = [False] * len(order)
    for s in range(len(order)):
        if seen[s]:
            continue
        q, cl = s, 0
        while not seen[q]:
            seen[q] = True
            q = order[q]
            cl += 1
        if cl % 2 == 0:
            sign = -sign
    return tuple(sorted(merged)), sign

def t_wedge(a: Terms, b: Terms) -> Terms:
    out: Terms = {}
    for (ea, ia), ca in a.items():
        for (eb, ib), cb in b.items():
            w = _wedge_indices(ia, ib)
            if w is None:
                continue
            idx, sign = w
            exps = tuple(x + y for x, y in zip(ea, eb))
            key = (exps, idx)
            out[key] = out.get(key, 0.0) + sign * ca * cb
    return t_clean(out)

def t_d(a: Terms, m: int) -> Terms:
    out: Terms = {}
    for (exps, idx), c in a.items():
        for j in range(1, m + 1):
            e = exps[j - 1]
            if e == 0 or j in idx:
                continue
            nexps = tuple(x - 1 if q == j - 1 else x for q, x in enumerate(exps))
            below = sum(1 for i in idx if i < j)
            nidx = tuple(sorted(idx + (j,)))
            key = (nexps, nidx)
            out[key] = out.get(key, 0.0) + (-1) ** below * c * e
    return t_clean(out)

def t_eval(a: Terms, t: np.ndarray) -> dict[tuple[int, ...], float]:
    """Evaluate at reduced coordinates; returns per-diff-index component values."""
    comp: dict[tuple[int, ...], float] = {}
    for (exps, idx), c in a.items():
        val = c
        for x, e in zip(t, exps):
            if e:
                val *= x ** e
        comp[idx] = comp.get(idx, 0.0) + val
    return comp


def t_subst(a: Terms, var_map: list[tuple[Terms, Terms]], m_dst: int) -> Terms:
    """Substitute each source variable t_i -> (scalar poly, one-form) in dst
    coordinates; var_map[i-1] gives the images of t_i and dt_i."""
    zero_exp = (0,) * m_dst
    out: Terms = {}
    for (exps, idx), c in a.items():
        acc: Terms = {(zero_exp, ()): c}
        for i, e in enumerate(exps, start=1):
            for _ in range(e):
                acc = t_wedge(acc, var_map[i - 1][0])
                if not acc:
                    break
            if not acc:
                break
        if not acc:
            continue
        for i in idx:
            acc = t_wedge(acc, var_map[i - 1][1])
            if not acc:
                break
        if not acc:
            continue
        out = t_add(out, acc)
    return out


def reduce_from_barycentric(full: Terms, m: int) -> Terms:
    """Rewrite terms given in full barycentric variables t_0..t_m (exponent
    tuples of length m+1, diff indices in 0..m) into reduced form."""
    zero = (0,) * m
    one_minus: Terms = {(zero, ()): 1.0}
    minus_sum_d: Terms = {}
    for j in range(1, m + 1):
        mono = tuple(1 if q == j - 1 else 0 for q in range(m))
        one_minus[(mono, ())] = -1.0
        minus_sum_d[(zero, (j,))] = -1.0
    var_map = [(one_minus, minus_sum_d)]
    for j in range(1, m + 1):
        mono = tuple(1 if q == j - 1 else 0 for q in range(m))
        var_map.append(({(mono, ()): 1.0}, {(zero, (j,)): 1.0}))
    shifted = {
        (tuple(exps), tuple(i + 1 for i in idx)): c for (exps, idx), c in full.items()
    }
    # treat the m+1 full variables as sources indexed 1..m+1
    return t_subst(shifted, var_map, m)


def _face_var_map(T: SimplexKey, sigma: SimplexKey) -> list[tuple[Terms, Terms]]:
    """Substitution images of T's reduced variables on the face sigma."""
    l = len(sigma) - 1
    zero = (0,) * l
    pos = {v: j for j, v in enumerate(sigma)}
    one_minus: Terms = {(zero, ()): 1.0}
    minus_sum_d: Terms = {}
    for j in range(1, l + 1):
        mono = tuple(1 if q == j - 1 else 0 for q in range(l))
        one_minus[(mono, ())] = -1.0
        minus_sum_d[(zero, (j,))] = -1.0
    var_map = []
    for v in T[1:]:
        if v not in pos:
            var_map.append(({}, {}))
        elif pos[v] == 0:
            var_map.append((dict(one_minus), dict(minus_sum_d)))
        else:
            j = pos[v]
            mono = tuple(1 if q == j - 1 else 0 for q in range(l))
            var_map.append(({(mono, ()): 1.0}, {(zero, (j,)): 1.0}))
    return var_map


# ---------------------------------------------------------------------------
# quadrature on simplices
# ---------------------------------------------------------------------------

_rule_cache: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}

def simplex_rule(m: int, degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Conical-product rule on the reference m-simplex, exact for total
    degree <= degree.  Returns (points in reduced coords (npts, m), weights
    summing to 1); the integral of f dV is vol * sum w_i f(x_i)."""
    q = max(1, (degree + 2) // 2)
    key = (m, q)
    if key in _rule_cache:
        return _rule_cache[key]
    if m == 0:
        pts, wts = np.zeros((1, 0)), np.ones(1)
    else:
        axes = []
        for j in range(1, m + 1):
            alpha = m - j
            x, w = roots_jacobi(q, alpha, 0.0)
            x = (x + 1.0) / 2.0
            w = w / (2.0 ** (alpha + 1))
            axes.append((x, w))
        pts_list, wts_list = [], []
        for combo in itertools.product(*(range(q) for _ in range(m))):
            u = np.zeros(m)
            rem = 1.0
            wt = 1.0
            for j, ci in enumerate(combo):
                x, w = axes[j]
                u[j] = rem * x[ci]
                wt *= w[ci]
                rem *= 1.0 - x[ci]
            pts_list.append(u)
            wts_list.append(wt)
        pts = np.array(pts_list)
        wts = np.array(wts_list)
        wts = wts / wts.sum()  # normalize: weights vs. volume measure
    _rule_cache[key] = (pts, wts)
    return pts, wts


def monomial_integral(exps: tuple[int, ...], m: int) -> float:
    """int over the reference m-simplex of t_1^a1 ... t_m^am relative to the
    normalized volume measure (total mass 1): m! * prod a_i! / (m + sum a)!"""
    s = sum(exps)
    val = math.factorial(m) / math.factorial(m + s)
    for a in exps:
        val *= math.factorial(a)
    return val


# ---------------------------------------------------------------------------
# the piecewise form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FormNormReport:
    lp: float
    sup_per_simplex: dict[SimplexKey, float]
    sl_pi: float
    omega_pi: float


@dataclass(frozen=True)
class PolyForm:
    """Degree-k piecewise polynomial form on the maximal simplices of K."""

    degree: int
    complex: MetricComplex
    pieces: dict[SimplexKey, Terms]

    def __post_init__(self):
        clean = {T: t_clean(p) for T, p in self.pieces.items()}
        object.__setattr__(self, "pieces", {T: p for T, p in clean.items() if p})

    # -- construction -------------------------------------------------------

    @staticmethod
    def zero(K: MetricComplex, k: int) -> "PolyForm":
        return PolyForm(k, K, {})

    @staticmethod
    def from_barycentric(
        K: MetricComplex, k: int, pieces_full: dict[SimplexKey, Terms]
    ) -> "PolyForm":
        """Build from terms over full barycentric variables t_0..t_m."""
        pieces = {
            T: reduce_from_barycentric(full, len(T) - 1)
            for T, full in pieces_full.items()
        }
        return PolyForm(k, K, pieces)

    @staticmethod
    def constant(K: MetricComplex, value: float) -> "PolyForm":
        pieces = {
            T: {((0,) * (len(T) - 1), ()): value} for T in K.maximal_simplices()
        }
        return PolyForm(0, K, pieces)

    # -- linear structure ---------------------------------------------------

    def __add__(self, other: "PolyForm") -> "PolyForm":
        if other.degree != self.degree:
            raise BadDimension("degree mismatch in form sum")
        pieces = dict(self.pieces)
        for T, p in other.pieces.items():
            pieces[T] = t_add(pieces.get(T, {}), p)
        return PolyForm(self.degree, self.complex, pieces)

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self + other.scale(-1.0)

    def scale(self, s: float) -> "PolyForm":
        return PolyForm(
            self.degree, self.complex, {T: t_scale(p, s) for T, p in self.pieces.items()}
        )

    def __rmul__(self, s: float) -> "PolyForm":
        return self.scale(s)

    def piece(self, T: SimplexKey) -> Terms:
        return self.pieces.get(T, {})

    def poly_degree(self) -> int:
        return max(
            (sum(exps) for p in self.pieces.values() for (exps, _idx) in p),
            default=0,
        )

    # -- calculus -----------------------------------------------------------

    def d(self) -> "PolyForm":
        pieces = {T: t_d(p, len(T) - 1) for T, p in self.pieces.items()}
        return PolyForm(self.degree + 1, self.complex, pieces)

    def wedge(self, other: "PolyForm") -> "PolyForm":
        K = self.complex
        k = self.degree + other.degree
        if any(k > len(T) - 1 for T in set(self.pieces) | set(other.pieces)):
            raise BadDimension("wedge degree exceeds carrier dimension")
        pieces = {}
        for T in set(self.pieces) & set(other.pieces):
            pieces[T] = t_wedge(self.pieces[T], other.pieces[T])
        return PolyForm(k, K, pieces)

    def trace_on(self, sigma: SimplexKey) -> Terms:
        """Tangential trace onto a simplex, in sigma's reduced coordinates.

        sigma must be a face of some maximal simplex carrying a piece; the
        continuity invariant makes the choice of carrier immaterial.
        """
        sigma = tuple(sigma)
        sset = set(sigma)
        for T in sorted(self.pieces):
            if sset <= set(T):
                if T == sigma:
                    return self.pieces[T]
                vm = _face_var_map(T, sigma)
                return t_subst(self.pieces[T], vm, len(sigma) - 1)
        return {}

    def restrict(self, S: MetricComplex) -> "PolyForm":
        """Pullback along the inclusion of a subcomplex."""
        if not is_subcomplex(S, self.complex):
            raise BadSubcomplex("restriction target is not a subcomplex")
        pieces = {}
        for T in S.maximal_simplices():
            tr = self.trace_on(T)
            if tr:
                pieces[T] = tr
        return PolyForm(self.degree, S, pieces)

    def evaluate(self, T: SimplexKey, t: np.ndarray) -> dict[tuple[int, ...], float]:
        """Components at reduced barycentric coordinates t on piece T."""
        return t_eval(self.pieces.get(T, {}), np.asarray(t, dtype=float))

    # -- integration --------------------------------------------------------

    def integrate(self, tau: tuple[int, ...], weighted: bool = True) -> float:
        """Integral over the oriented simplex tau (dim tau = degree).

        The orientation is that of ascending vertex order; an odd
        permutation of tau flips the sign.  weighted=True applies the
        volume-weighted monomial formula; weighted=False is the metric-free
        form integral (Stokes-exact).
        """
        tau = tuple(tau)
        k = self.degree
        if len(tau) - 1 != k:
            raise BadDimension(f"cannot integrate a {k}-form over {tau}")
        sign = _permutation_sign(tau)
        key = tuple(sorted(tau))
        tr = self.trace_on(key)
        if not tr:
            return 0.0
        full_idx = tuple(range(1, k + 1))
        total = 0.0
        for (exps, idx), c in tr.items():
            if idx != full_idx:
                continue
            total += c * monomial_integral(exps, k)
        vol = self.complex.volume(key)
        if weighted:
            return sign * total * vol
        return sign * total / math.factorial(k) if k > 0 else sign * total

    # -- norms --------------------------------------------------------------

    def _gram_inverse(self, T: SimplexKey) -> np.ndarray:
        pts = self.complex.coords(T)
        edges = pts[1:] - pts[0]
        G = edges @ edges.T
        return np.linalg.inv(G)

    def _norm_sq_poly_value(self, T: SimplexKey, t: np.ndarray, Minor) -> float:
        comp = self.evaluate(T, t)
        keys = list(comp)
        val = 0.0
        for i, I in enumerate(keys):
            for J in keys[i:]:
                m = Minor(I, J)
                contrib = comp[I] * comp[J] * m
                val += contrib if I == J else 2.0 * contrib
        return max(val, 0.0)

    def _minor_fn(self, T: SimplexKey):
        k = self.degree
        if k == 0:
            return lambda I, J: 1.0
        Ginv = self._gram_inverse(T)
        cache: dict[tuple, float] = {}
        def minor(I, J):
            key = (I, J) if I <= J else (J, I)
            if key not in cache:
                sub = Ginv[np.ix_([i - 1 for i in key[0]], [j - 1 for j in key[1]])]
                cache[key] = float(np.linalg.det(sub))
            return cache[key]
        return minor

    def norm_at(self, T: SimplexKey, t: np.ndarray) -> float:
        """Pointwise Euclidean norm |omega(x)| in the simplex metric."""
        return math.sqrt(self._norm_sq_poly_value(T, np.asarray(t, float), self._minor_fn(T)))

    def lp_norm(self, p: float, quad_degree: int | None = None) -> float:
        """||omega||_{Omega_p}: per-simplex integral of |omega|^p, p-th root.

        Exact (up to the rule's polynomial exactness) for even integer p;
        otherwise the quadrature order is raised until two consecutive
        conical rules agree to 1e-10 relative.
        """
        if p < 1:
            raise BadExponent(f"p = {p} < 1")
        total = 0.0
        for T in self.pieces:
            m = len(T) - 1
            if m < self.degree:
                continue
            vol = self.complex.volume(T)
            minor = self._minor_fn(T)
            pd = self.poly_degree() + 1
            if quad_degree is not None:
                deg = quad_degree
            elif float(p).is_integer() and int(p) % 2 == 0:
                deg = int(p) * pd
            else:
                deg = None
            if deg is not None:
                pts, wts = simplex_rule(m, deg)
                acc = sum(
                    w * self._norm_sq_poly_value(T, x, minor) ** (p / 2.0)
                    for x, w in zip(pts, wts)
                )
            else:
                acc = self._adaptive_piece(T, m, p, minor)
            total += vol * acc
        return total ** (1.0 / p)

    def _adaptive_piece(self, T, m, p, minor) -> float:
        prev = None
        for deg in (8, 14, 20, 28, 38):
            pts, wts = simplex_rule(m, deg)
            acc = sum(
                w * self._norm_sq_poly_value(T, x, minor) ** (p / 2.0)
                for x, w in zip(pts, wts)
            )
            if prev is not None and abs(acc - prev) <= 1e-10 * (1.0 + abs(acc)):
                return acc
            prev = acc
        return prev

    def sup_norm(self, T: SimplexKey, resolution: int = 8) -> float:
        """Lattice lower bound of ess-sup |omega| on T."""
        T = tuple(T)
        if T not in self.pieces:
            tr = self.trace_on(T)
            if not tr:
                return 0.0
            sub = PolyForm(self.degree, self.complex, {T: tr})
            return sub.sup_norm(T, resolution)
        m = len(T) - 1
        minor = self._minor_fn(T)
        best = 0.0
        for combo in _lattice(m, resolution):
            v = self._norm_sq_poly_value(T, np.array(combo), minor)
            if v > best:
                best = v
        return math.sqrt(best)

    def sl_pi_norm(self, pi: PiSequence, resolution: int = 8) -> float:
        """Per-simplex sup-norm Sobolev norm; the second sum runs over d(omega)."""
        k = self.degree
        first = sum(
            self.sup_norm(T, resolution) ** pi[k] for T in self.pieces
        ) ** (1.0 / pi[k])
        if k >= self.complex.dim:
            return first
        dw = self.d()
        second = sum(
            dw.sup_norm(T, resolution) ** pi[k + 1] for T in dw.pieces
        )
        return first + second ** (1.0 / pi[k + 1]) if second else first

    def omega_pi_norm(self, pi: PiSequence) -> float:
        k = self.degree
        total = self.lp_norm(pi[k])
        if k < self.complex.dim:
            total += self.d().lp_norm(pi[k + 1])
        return total

    def norm_report(self, pi: PiSequence, p: float | None = None,
                    resolution: int = 8) -> FormNormReport:
        k = self.degree
        return FormNormReport(
            lp=self.lp_norm(p if p is not None else pi[k]),
            sup_per_simplex={T: self.sup_norm(T, resolution) for T in self.pieces},
            sl_pi=self.sl_pi_norm(pi, resolution),
            omega_pi=self.omega_pi_norm(pi),
        )

    def continuity_defect(self, samples: int = 4) -> float:
        """Max mismatch of traces of adjacent pieces on shared faces."""
        worst = 0.0
        tops = list(self.pieces)
        for i, T in enumerate(tops):
            for S in tops[i + 1 :]:
                shared = tuple(sorted(set(T) & set(S)))
                if len(shared) < 1:
                    continue
                l = len(shared) - 1
                a = t_subst(self.pieces[T], _face_var_map(T, shared), l)
                b = t_subst(self.pieces[S], _face_var_map(S, shared), l)
                diff = t_add(a, b, -1.0)
                for t in _lattice(l, samples):
                    for v in t_eval(diff, np.array(t)).values():
                        worst = max(worst, abs(v))
        return worst


def _permutation_sign(tau: tuple[int, ...]) -> int:
    sign = 1
    tau = list(tau)
    for i in range(len(tau)):
        for j in range(i + 1, len(tau)):
            if tau[i] > tau[j]:
                sign = -sign
    return sign


def _lattice(m: int, r: int):
    """Reduced barycentric lattice points with coordinates i/r."""
    if m == 0:
        yield ()
        return
    for combo in itertools.product(range(r + 1), repeat=m):
        if sum(combo) <= r:
            yield tuple(c / r for c in combo)


# ---------------------------------------------------------------------------
# prism extension
# ---------------------------------------------------------------------------

def _check_cube_boundary(K: MetricComplex, n: int) -> None:
    for xs in K.vertices.values():
        if len(xs) != n or any(x not in (0.0, 1.0) for x in xs):
            raise BadCarrier("carrier is not a unit cube boundary")
    if K.dim != n - 1:
        raise BadCarrier("carrier has the wrong dimension for a cube boundary")


def prism_complex(K: MetricComplex, n: int) -> tuple[MetricComplex, dict[int, tuple[int, int]]]:
    """Triangulated prism (cube boundary) x [0,1]; returns the complex and a
    map prism-vertex-id -> (base vertex id, level)."""
    base = sorted(K.vertices)
    vid: dict[tuple[int, int], int] = {}
    vertices = {}
    for i, v in enumerate(base):
        for level in (0, 1):
            nid = 2 * i + level
            vid[(v, level)] = nid
            vertices[nid] = tuple(K.vertices[v]) + (float(level),)
    tops = []
    for cell in K.maximal_simplices():
        if len(cell) == 1:
            (a,) = cell
            tops.append(tuple(sorted((vid[(a, 0)], vid[(a, 1)]))))
        else:
            a, b = cell
            a0, a1 = vid[(a, 0)], vid[(a, 1)]
            b0, b1 = vid[(b, 0)], vid[(b, 1)]
            tops.append(tuple(sorted((a0, b0, b1))))
            tops.append(tuple(sorted((a0, a1, b1))))
    P = build_complex(vertices, tops)
    reverse = {nid: key for key, nid in vid.items()}
    return P, reverse


def prism_extend(omega: PolyForm, n: int) -> PolyForm:
    """Extend a form on the cube boundary to (1-t) * omega on the prism.

    The restriction at t=0 recovers omega; at t=1 the extension vanishes.
    """
    if n not in (1, 2):
        raise BadDimension("prism extension supports n in {1, 2}")
    K = omega.complex
    _check_cube_boundary(K, n)
    P, reverse = prism_complex(K, n)
    pieces: dict[SimplexKey, Terms] = {}
    for T in P.maximal_simplices():
        m = len(T) - 1
        basecell = tuple(sorted({reverse[v][0] for v in T}))
        tr = omega.trace_on(basecell)
        if not tr:
            continue
        l = len(basecell) - 1
        zero = (0,) * m
        # image of base reduced variable s_j: sum of prism barycentrics of
        # vertices over basecell[j]; position 0 expands to 1 - sum others
        groups: dict[int, list[int]] = {j: [] for j in range(l + 1)}
        pos = {v: j for j, v in enumerate(basecell)}
        for q, v in enumerate(T):
            groups[pos[reverse[v][0]]].append(q)  # q: position in T
        def group_poly(idxs):
            poly: Terms = {}
            form: Terms = {}
            for q in idxs:
                if q == 0:
                    # t_0 of the prism simplex = 1 - sum reduced
                    poly = t_add(poly, {(zero, ()): 1.0})
                    for j in range(1, m + 1):
                        mono = tuple(1 if w == j - 1 else 0 for w in range(m))
                        poly = t_add(poly, {(mono, ()): -1.0})
                        form = t_add(form, {(zero, (j,)): -1.0})
                else:
                    mono = tuple(1 if w == q - 1 else 0 for w in range(m))
                    poly = t_add(poly, {(mono, ()): 1.0})
                    form = t_add(form, {(zero, (q,)): 1.0})
            return poly, form
        var_map = [group_poly(groups[j]) for j in range(1, l + 1)]
        ext = t_subst(tr, var_map, m)
        # height coordinate t = sum of barycentrics of level-1 vertices
        height, _hform = group_poly([q for q, v in enumerate(T) if reverse[v][1] == 1])
        one_minus_t = t_add({(zero, ()): 1.0}, height, -1.0)
        pieces[T] = t_wedge(one_minus_t, ext)
    return PolyForm(omega.degree, P, pieces)
