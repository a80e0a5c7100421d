"""Sparse simplicial cochains, the coboundary, and counting-measure norms.

Sign convention: the coboundary of a k-cochain c at a (k+1)-simplex
tau = (v_0 < ... < v_{k+1}) is the alternating sum over removed vertices,
(dc)(tau) = sum_i (-1)^i c(tau \\ v_i).  This matches the orientation
induced by ascending vertex order, which is also the orientation used when
integrating forms over simplices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import MetricComplex, PiSequence, SimplexKey
from .errors import BadExponent, MissingSimplex


@dataclass(frozen=True)
class Cochain:
    """Degree-k real-valued function on k-simplices; absent keys are 0."""

    degree: int
    values: dict[SimplexKey, float]
    complex: MetricComplex = field(repr=False)

    def __post_init__(self):
        clean = {k: float(v) for k, v in self.values.items() if v != 0.0}
        object.__setattr__(self, "values", clean)

    def __call__(self, key: SimplexKey) -> float:
        return self.values.get(tuple(key), 0.0)

    def __add__(self, other: "Cochain") -> "Cochain":
        vals = dict(self.values)
        for k, v in other.values.items():
            vals[k] = vals.get(k, 0.0) + v
        return Cochain(self.degree, vals, self.complex)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + other.scale(-1.0)

    def scale(self, a: float) -> "Cochain":
        return Cochain(self.degree, {k: a * v for k, v in self.values.items()}, self.complex)

    def __rmul__(self, a: float) -> "Cochain":
        return self.scale(a)


def indicator(K: MetricComplex, sigma: SimplexKey) -> Cochain:
    """The characteristic cochain of a single simplex."""
    sigma = tuple(sigma)
    if not K.has_simplex(sigma):
        raise MissingSimplex(f"{sigma} not in complex")
    return Cochain(len(sigma) - 1, {sigma: 1.0}, K)


def zero_cochain(K: MetricComplex, k: int) -> Cochain:
    return Cochain(k, {}, K)


def coboundary(c: Cochain) -> Cochain:
    """Alternating-sum coboundary; degree k -> k+1."""
    K = c.complex
    k = c.degree
    out: dict[SimplexKey, float] = {}
    for key, v in c.values.items():
        for tau in K.cofaces.get(key, ()):
            if len(tau) != k + 2:
                continue
            # position of the vertex of tau missing from key
            missing = next(i for i, w in enumerate(tau) if w not in key)
            out[tau] = out.get(tau, 0.0) + (-1) ** missing * v
    return Cochain(k + 1, out, K)


def lp_norm(c: Cochain, p: float) -> float:
    """Counting-measure l_p norm over the k-simplices."""
    if p < 1:
        raise BadExponent(f"p = {p} < 1")
    if not c.values:
        return 0.0
    return sum(abs(v) ** p for v in c.values.values()) ** (1.0 / p)


def pi_norm(c: Cochain, pi: PiSequence) -> float:
    """Sobolev norm ||c||_{p_k} + ||dc||_{p_{k+1}}."""
    k = c.degree
    total = lp_norm(c, pi[k])
    if k < c.complex.dim:
        total += lp_norm(coboundary(c), pi[k + 1])
    return total


def write_cochain(c: Cochain) -> str:
    lines = [f"degree {c.degree}"]
    for key in sorted(c.values):
        lines.append(" ".join(str(v) for v in key) + f" {c.values[key]!r}")
    return "\n".join(lines) + "\n"


def read_cochain(text: str, K: MetricComplex) -> Cochain:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("degree "):
        raise ValueError("missing `degree` header")
    k = int(lines[0].split()[1])
    values: dict[SimplexKey, float] = {}
    for ln in lines[1:]:
        parts = ln.split()
        key = tuple(int(x) for x in parts[:-1])
        if len(key) != k + 1:
            raise ValueError(f"key {key} has wrong dimension for degree {k}")
        if not K.has_simplex(key):
            raise MissingSimplex(f"{key} not in complex")
        values[key] = float(parts[-1])
    return Cochain(k, values, K)


def coboundary_norm_bound(K: MetricComplex, p: float, N: int) -> float:
    """The crude bounded-geometry operator bound (n+1) * N^(1/p) for the
    coboundary in l_p."""
    return (K.dim + 1) * N ** (1.0 / p)
