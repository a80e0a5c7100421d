"""Finite metric simplicial complexes.

A complex stores embedded vertex coordinates and, per dimension, the ordered
set of simplex keys (strictly increasing vertex-id tuples).  Complexes are
immutable after construction; every operation returns a new complex.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadDimension, DegenerateSimplex, MissingVertex

SimplexKey = tuple[int, ...]


@dataclass(frozen=True)
class MetricComplex:
    """Face-closed simplicial complex with embedded vertex coordinates."""

    vertices: dict[int, tuple[float, ...]]
    simplices: dict[int, tuple[SimplexKey, ...]]  # dim -> sorted keys
    cofaces: dict[SimplexKey, frozenset[SimplexKey]]
    dim: int

    def has_simplex(self, key: SimplexKey) -> bool:
        k = len(key) - 1
        return key in set(self.simplices.get(k, ()))

    def simplices_of_dim(self, k: int) -> tuple[SimplexKey, ...]:
        return self.simplices.get(k, ())

    def coords(self, key: SimplexKey) -> np.ndarray:
        """Vertex coordinates of a simplex, one row per vertex."""
        return np.array([self.vertices[v] for v in key], dtype=float)

    def maximal_simplices(self) -> tuple[SimplexKey, ...]:
        """Simplices that are not a proper face of any other simplex."""
        out = []
        for k in sorted(self.simplices):
            for key in self.simplices[k]:
                if not self.cofaces.get(key):
                    out.append(key)
        return tuple(out)

    def simplex_count(self) -> int:
        return sum(len(v) for v in self.simplices.values())

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(keys) for k, keys in self.simplices.items())

    def edge_length(self, edge: SimplexKey) -> float:
        a, b = edge
        return float(
            np.linalg.norm(
                np.asarray(self.vertices[a]) - np.asarray(self.vertices[b])
            )
        )

    def volume(self, key: SimplexKey) -> float:
        """Riemannian k-volume from the Gram determinant of edge vectors."""
        k = len(key) - 1
        if k == 0:
            return 1.0
        pts = self.coords(key)
        edges = pts[1:] - pts[0]
        gram = edges @ edges.T
        det = float(np.linalg.det(gram))
        if det <= 0.0:
            return 0.0
        return math.sqrt(det) / math.factorial(k)


@dataclass(frozen=True)
class GeometryReport:
    """Outcome of a bounded-geometry check."""

    max_vertex_degree: int
    min_edge_length: float
    max_edge_length: float
    passes: bool
    violations: tuple[tuple[SimplexKey, str], ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class PiSequence:
    """Exponent sequence p_0..p_n with the Sobolev step condition."""

    exponents: tuple[float, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(float(p) for p in self.exponents))

    def __getitem__(self, i: int) -> float:
        return self.exponents[i]

    def is_valid(self) -> bool:
        ps = self.exponents
        if len(ps) != self.n + 1 or self.n < 0:
            return False
        if any(not (1.0 < p < math.inf) for p in ps):
            return False
        if self.n == 0:
            return True
        return all(
            1.0 / ps[i + 1] - 1.0 / ps[i] <= 1.0 / self.n + 1e-15
            for i in range(self.n)
        )

    def is_non_increasing(self) -> bool:
        ps = self.exponents
        return all(ps[i + 1] <= ps[i] for i in range(len(ps) - 1))


def _faces(key: SimplexKey):
    for r in range(1, len(key) + 1):
        yield from itertools.combinations(key, r)


def _close_and_index(
    vertices: dict[int, tuple[float, ...]], tops: list[SimplexKey]
) -> tuple[dict[int, tuple[SimplexKey, ...]], dict[SimplexKey, frozenset[SimplexKey]]]:
    by_dim: dict[int, set[SimplexKey]] = {}
    for t in tops:
        for f in _faces(t):
            by_dim.setdefault(len(f) - 1, set()).add(f)
    for v in vertices:
        by_dim.setdefault(0, set()).add((v,))
    simplices = {k: tuple(sorted(keys)) for k, keys in sorted(by_dim.items())}
    cofaces: dict[SimplexKey, set[SimplexKey]] = {
        key: set() for keys in simplices.values() for key in keys
    }
    for k in simplices:
        if k == 0:
            continue
        for key in simplices[k]:
            for f in itertools.combinations(key, k):
                cofaces[f].add(key)
    return simplices, {key: frozenset(s) for key, s in cofaces.items()}


def build_complex(
    vertices: dict[int, tuple[float, ...]],
    top_simplices: list[tuple[int, ...]],
) -> MetricComplex:
    """Build a face-closed metric complex from vertices and top simplices."""
    vertices = {int(v): tuple(float(c) for c in xs) for v, xs in vertices.items()}
    lengths = {len(xs) for xs in vertices.values()}
    if len(lengths) > 1:
        raise ValueError("vertex coordinate vectors must share one length")
    tops: list[SimplexKey] = []
    for t in top_simplices:
        if len(set(t)) != len(t):
            raise DegenerateSimplex(f"repeated vertex id in {t}")
        for v in t:
            if v not in vertices:
                raise MissingVertex(f"unknown vertex id {v}")
        tops.append(tuple(sorted(int(v) for v in t)))
    simplices, cofaces = _close_and_index(vertices, tops)
    dim = max(simplices) if simplices else 0
    return MetricComplex(vertices, simplices, cofaces, dim)


def _vertex_degrees(K: MetricComplex) -> dict[int, int]:
    deg = {v: 0 for v in K.vertices}
    for a, b in K.simplices_of_dim(1):
        deg[a] += 1
        deg[b] += 1
    return deg


def _is_connected(K: MetricComplex) -> bool:
    verts = list(K.vertices)
    if len(verts) <= 1:
        return True
    adj: dict[int, list[int]] = {v: [] for v in verts}
    for a, b in K.simplices_of_dim(1):
        adj[a].append(b)
        adj[b].append(a)
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(verts)


def validate_bounded_geometry(K: MetricComplex, L: float, N: int) -> GeometryReport:
    """Check the star bound N, the edge-length window [1/L, L], and connectivity."""
    if L < 1 or N < 1:
        raise ValueError("require L >= 1 and N >= 1")
    violations: list[tuple[SimplexKey, str]] = []
    lengths = [K.edge_length(e) for e in K.simplices_of_dim(1)]
    for e, ell in zip(K.simplices_of_dim(1), lengths):
        if not (1.0 / L - 1e-12 <= ell <= L + 1e-12):
            violations.append((e, f"edge length {ell:.6g} outside [{1/L:.6g}, {L:.6g}]"))
    degrees = _vertex_degrees(K)
    for v, d in sorted(degrees.items()):
        if d > N:
            violations.append(((v,), f"vertex degree {d} exceeds {N}"))
    if not _is_connected(K):
        violations.append(((), "complex is disconnected"))
    return GeometryReport(
        max_vertex_degree=max(degrees.values(), default=0),
        min_edge_length=min(lengths, default=math.inf),
        max_edge_length=max(lengths, default=0.0),
        passes=not violations,
        violations=tuple(violations),
    )


def skeleton(K: MetricComplex, m: int) -> MetricComplex:
    """The subcomplex of all simplices of dimension <= m."""
    if not (0 <= m <= K.dim):
        raise BadDimension(f"skeleton dimension {m} outside [0, {K.dim}]")
    tops = [key for k in range(m + 1) for key in K.simplices_of_dim(k)]
    return build_complex(dict(K.vertices), tops)


def star(K: MetricComplex, v: int) -> MetricComplex:
    """Closed star: all simplices containing v, plus their faces."""
    if v not in K.vertices:
        raise MissingVertex(f"unknown vertex id {v}")
    tops = [key for keys in K.simplices.values() for key in keys if v in key]
    used = {w for key in tops for w in key} | {v}
    return build_complex({w: K.vertices[w] for w in used}, tops)


def is_subcomplex(S: MetricComplex, K: MetricComplex) -> bool:
    for k, keys in S.simplices.items():
        have = set(K.simplices.get(k, ()))
        if any(key not in have for key in keys):
            return False
    return True


def barycentric_subdivide(K: MetricComplex) -> MetricComplex:
    """First barycentric subdivision; new vertices at arithmetic barycenters.

    Original vertex ids are kept for 0-simplices; each simplex of dimension
    >= 1 receives a fresh id, assigned in (dimension, key) order.
    """
    next_id = max(K.vertices, default=-1) + 1
    bary_id: dict[SimplexKey, int] = {}
    new_vertices = dict(K.vertices)
    for k in sorted(K.simplices):
        for key in K.simplices[k]:
            if k == 0:
                bary_id[key] = key[0]
            else:
                bary_id[key] = next_id
                pts = K.coords(key)
                new_vertices[next_id] = tuple(pts.mean(axis=0))
                next_id += 1
    tops = []
    for top in K.maximal_simplices():
        m = len(top) - 1
        if m == 0:
            tops.append((bary_id[top],))
            continue
        for perm in itertools.permutations(top):
            flag = [tuple(sorted(perm[: r + 1])) for r in range(m + 1)]
            tops.append(tuple(sorted(bary_id[f] for f in flag)))
    return build_complex(new_vertices, tops)


def ray_complex(n: int, M: int) -> MetricComplex:
    """Truncated ray: a path of M unit edges (n=1) or a strip of 2M unit
    right triangles (n=2)."""
    if n not in (1, 2):
        raise BadDimension("ray_complex supports n in {1, 2}")
    if M < 1:
        raise ValueError("M >= 1 required")
    if n == 1:
        vertices = {i: (float(i),) for i in range(M + 1)}
        tops = [(i, i + 1) for i in range(M)]
        return build_complex(vertices, tops)
    vertices = {}
    for j in range(M + 1):
        vertices[2 * j] = (float(j), 0.0)
        vertices[2 * j + 1] = (float(j), 1.0)
    tops = []
    for j in range(M):
        a, b = 2 * j, 2 * j + 1
        c, d = 2 * j + 2, 2 * j + 3
        tops.append((a, c, d))
        tops.append((a, b, d))
    return build_complex(vertices, tops)


def cube_boundary_complex(n: int) -> MetricComplex:
    """The boundary of the unit cube I^n as a complex: two points for n=1,
    the four unit edges of the square for n=2."""
    if n == 1:
        return build_complex({0: (0.0,), 1: (1.0,)}, [(0,), (1,)])
    if n == 2:
        vertices = {0: (0.0, 0.0), 1: (1.0, 0.0), 2: (1.0, 1.0), 3: (0.0, 1.0)}
        return build_complex(vertices, [(0, 1), (1, 2), (2, 3), (0, 3)])
    raise BadDimension("cube boundary supported for n in {1, 2}")


def write_complex(K: MetricComplex) -> str:
    """Line-oriented text form: `dim`, `vertices`, `simplices` sections."""
    lines = [f"dim {K.dim}", "vertices"]
    for v in sorted(K.vertices):
        coords = " ".join(repr(c) for c in K.vertices[v])
        lines.append(f"{v} {coords}".rstrip())
    lines.append("simplices")
    for key in K.maximal_simplices():
        lines.append(" ".join(str(v) for v in key))
    return "\n".join(lines) + "\n"


def read_complex(text: str) -> MetricComplex:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("dim "):
        raise ValueError("missing `dim` header")
    try:
        idx_v = lines.index("vertices")
        idx_s = lines.index("simplices")
    except ValueError as exc:
        raise ValueError("missing vertices/simplices section") from exc
    vertices: dict[int, tuple[float, ...]] = {}
    for ln in lines[idx_v + 1 : idx_s]:
        parts = ln.split()
        vertices[int(parts[0])] = tuple(float(x) for x in parts[1:])
    tops = [tuple(int(x) for x in ln.split()) for ln in lines[idx_s + 1 :]]
    return build_complex(vertices, tops)
