"""H-representations, vertex enumeration and the vertex-edge graph."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, islice

import numpy as np

from .errors import (
    Degenerate,
    DimensionError,
    EmptyPolytope,
    InconsistentAdjacency,
    SizeTooLarge,
    Unbounded,
)
from .numerics import adjugate, is_exact, normalize_rows, normalize_rows_exact

DEFAULT_VERTEX_BUDGET = 10**7


@dataclass(frozen=True)
class Tolerances:
    tight: float = 1e-9
    feas: float = 1e-9
    det: float = 1e-10
    dup: float = 1e-8
    zero: float = 1e-12
    argmax: float = 1e-12  # relative to max |c.x|
    coef: float = 1e-10


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True, eq=False)
class HRepresentation:
    """The polytope ``{x : A x <= b}`` with unit-norm rows.

    ``A_exact``/``b_exact`` keep the rational data when the input was exact
    and every row norm is rational; they are ``None`` otherwise.
    """

    A: np.ndarray
    b: np.ndarray
    A_exact: tuple | None = None
    b_exact: tuple | None = None

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def exact(self) -> bool:
        return self.A_exact is not None

    @classmethod
    def from_arrays(cls, A, b, *, eps_zero: float = DEFAULT_TOL.zero):
        """Validate ``m > n >= 2`` and normalise rows."""
        if is_exact(A) and is_exact([list(b)]):
            rows = [list(r) for r in A]
            _check_shape(len(rows), len(rows[0]) if rows else 0, len(b), rows)
            exact = normalize_rows_exact(rows, list(b))
            if exact is not None:
                Ae, be = exact
                return cls(
                    np.array([[float(x) for x in r] for r in Ae]),
                    np.array([float(x) for x in be]),
                    tuple(tuple(r) for r in Ae),
                    tuple(be),
                )
            A = [[float(x) for x in r] for r in rows]
            b = [float(x) for x in b]
        A = np.asarray(A, dtype=float)
        b = np.asarray(b, dtype=float).ravel()
        if A.ndim != 2:
            raise DimensionError("A must be a 2-d matrix")
        _check_shape(A.shape[0], A.shape[1], b.shape[0])
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValueError("A and b must be finite")
        A, b = normalize_rows(A, b, eps_zero)
        return cls(A, b)

    def perturbed(self, sigma: float, seed: int = 0) -> "HRepresentation":
        """Copy with uniform noise in [-sigma, sigma] added to ``b`` only."""
        if sigma < 0:
            raise ValueError("sigma must be >= 0")
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0x9E7,)))
        noise = rng.uniform(-sigma, sigma, size=self.m)
        return HRepresentation(self.A.copy(), self.b + noise)


def _check_shape(m, n, len_b, rows=None):
    if rows is not None and any(len(r) != n for r in rows):
        raise DimensionError("rows of A have different lengths")
    if len_b != m:
        raise DimensionError(f"b has length {len_b}, expected {m}")
    if n < 2:
        raise DimensionError(f"dimension n={n} must be at least 2")
    if m <= n:
        raise DimensionError(f"need m > n, got m={m}, n={n}")


@dataclass(frozen=True, eq=False)
class Vertex:
    id: int
    point: np.ndarray
    tight_rows: tuple
    basis: np.ndarray  # A_v, rows in tight_rows order
    basis_det: float  # |det(A_v)|


@dataclass(eq=False)
class PolytopeGraph:
    H: HRepresentation
    vertices: list
    adjacency: tuple  # sorted neighbour ids per vertex
    _by_rows: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._by_rows = {v.tight_rows: v.id for v in self.vertices}
        self.points = np.array([v.point for v in self.vertices])

    def __len__(self):
        return len(self.vertices)

    @property
    def n(self) -> int:
        return self.H.n

    def neighbors(self, vid: int) -> tuple:
        return self.adjacency[vid]

    def vertex_by_rows(self, rows):
        return self._by_rows.get(tuple(sorted(rows)))

    def edges(self):
        """Each undirected edge once, as ``(u, w)`` with ``u < w``."""
        return [(u, w) for u in range(len(self)) for w in self.adjacency[u] if u < w]

    def shared_rows(self, u: int, w: int) -> tuple:
        return tuple(sorted(set(self.vertices[u].tight_rows) & set(self.vertices[w].tight_rows)))

    def dropped_row(self, u: int, w: int) -> int:
        """The tight row of ``u`` that is not tight at its neighbour ``w``."""
        (r,) = set(self.vertices[u].tight_rows) - set(self.vertices[w].tight_rows)
        return r


def enumerate_vertices(H: HRepresentation, tol: Tolerances = DEFAULT_TOL,
                       budget: int = DEFAULT_VERTEX_BUDGET) -> list:
    """All vertices of ``H`` by exhaustive enumeration of ``n``-row bases.

    Raises :class:`Degenerate` if some vertex has more than ``n`` tight rows.
    """
    A, b, m, n = H.A, H.b, H.m, H.n
    count = math.comb(m, n)
    if count > budget:
        raise SizeTooLarge(count, budget, "row bases")

    found = []
    chunk = max(1, (1 << 20) // (n * n))
    combo_iter = combinations(range(m), n)
    while True:
        S = np.array(list(islice(combo_iter, chunk)), dtype=np.intp)
        if S.size == 0:
            break
        M = A[S]
        dets = np.linalg.det(M)
        keep = np.abs(dets) > tol.det
        if not keep.any():
            continue
        X = np.linalg.solve(M[keep], b[S[keep]][..., None])[..., 0]
        viol = (X @ A.T - b).max(axis=1)
        for x in X[viol <= tol.feas]:
            if not any(np.linalg.norm(x - y) < tol.dup for y in found):
                found.append(x)
    if not found:
        raise EmptyPolytope("no basic feasible solution found")

    raw = []
    bad = []
    for x in found:
        tight = tuple(int(i) for i in np.flatnonzero(np.abs(A @ x - b) <= tol.tight))
        if len(tight) > n:
            bad.append((x, tight))
        raw.append((tight, x))
    if bad:
        bad.sort(key=lambda t: t[1])
        raise Degenerate(bad[0][0], bad[0][1],
                         [([float(c) + 0.0 for c in p], list(t)) for p, t in bad])
    raw.sort(key=lambda t: t[0])
    vertices = []
    for vid, (tight, x) in enumerate(raw):
        Av = A[list(tight)]
        vertices.append(Vertex(vid, x, tight, Av, abs(float(np.linalg.det(Av)))))
    return vertices


def build_graph(H: HRepresentation, vertices: list,
                tol: Tolerances = DEFAULT_TOL) -> PolytopeGraph:
    """Adjacency by pivoting along every edge ray out of every vertex.

    The ray leaving vertex ``v`` when tight row ``k`` is released points along
    minus the k-th adjugate column of ``A_v``; a ratio test over the remaining
    rows finds the neighbour. An unblocked ray means the polyhedron is unbounded.
    """
    A, b = H.A, H.b
    by_rows = {v.tight_rows: v.id for v in vertices}
    adjacency = []
    for v in vertices:
        adj = adjugate(v.basis)
        sign = math.copysign(1.0, np.linalg.det(v.basis))
        tight = set(v.tight_rows)
        nbrs = set()
        for k, row in enumerate(v.tight_rows):
            d = -sign * adj[:, k]
            d /= np.linalg.norm(d)
            rate = A @ d
            slack = np.maximum(b - A @ v.point, 0.0)
            cand = [i for i in range(H.m) if i not in tight and rate[i] > tol.zero]
            if not cand:
                raise Unbounded(v.id, d)
            ratios = slack[cand] / rate[cand]
            j = int(np.argmin(ratios))
            hit = cand[j]
            new_rows = tuple(sorted((tight - {row}) | {hit}))
            wid = by_rows.get(new_rows)
            if wid is None:
                raise InconsistentAdjacency(
                    f"pivot from vertex {v.id} releasing row {row} reaches unknown "
                    f"basis {list(new_rows)}")
            target = v.point + ratios[j] * d
            if np.linalg.norm(target - vertices[wid].point) > tol.dup * max(1.0, ratios[j]):
                raise InconsistentAdjacency(
                    f"pivot from vertex {v.id} lands {target} away from vertex {wid}")
            nbrs.add(wid)
        adjacency.append(tuple(sorted(nbrs)))
    for u, nb in enumerate(adjacency):
        for w in nb:
            if u not in adjacency[w] or u == w:
                raise InconsistentAdjacency(f"edge {u}-{w} is not symmetric")
    return PolytopeGraph(H, list(vertices), tuple(adjacency))


def polytope_graph(H: HRepresentation, tol: Tolerances = DEFAULT_TOL,
                   budget: int = DEFAULT_VERTEX_BUDGET) -> PolytopeGraph:
    return build_graph(H, enumerate_vertices(H, tol, budget), tol)


def bfs_distances(G: PolytopeGraph, start: int) -> list:
    dist = [-1] * len(G)
    dist[start] = 0
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in G.adjacency[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def diameter(G: PolytopeGraph):
    """Exact graph diameter and a witness pair ``(u, w)`` realising it."""
    best, pair = -1, (0, 0)
    for s in range(len(G)):
        dist = bfs_distances(G, s)
        if min(dist) < 0:
            raise InconsistentAdjacency("polytope graph is disconnected")
        far = max(range(len(dist)), key=dist.__getitem__)
        if dist[far] > best:
            best, pair = dist[far], (s, far)
    return best, pair


def neighborhood(G: PolytopeGraph, I) -> frozenset:
    """Vertices outside ``I`` adjacent to some vertex of ``I``."""
    I = frozenset(I)
    return frozenset(w for u in I for w in G.adjacency[u] if w not in I)


def bfs_layers(G: PolytopeGraph, start: int) -> list:
    """Cumulative BFS sets ``I_0 = {start} ⊆ I_1 ⊆ ...`` ending at the full vertex set."""
    layers = [frozenset([start])]
    while len(layers[-1]) < len(G):
        nxt = layers[-1] | neighborhood(G, layers[-1])
        if len(nxt) == len(layers[-1]):
            raise InconsistentAdjacency("polytope graph is disconnected")
        layers.append(nxt)
    return layers
