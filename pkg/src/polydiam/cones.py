"""Normal-cone geometry on the unit ball.

The normal cone of vertex ``v`` is generated by the tight rows ``A_v``; a
direction ``c`` belongs to it exactly when ``v`` maximises ``c . x`` over the
polytope. Cone volumes are estimated from uniform directions assigned to the
vertex they select, facet areas from uniform directions inside each facet's
hyperplane.

Every random stream is a Philox (counter-based) generator keyed by
``(seed, stream, block)`` with a fixed block length, so the result does not
depend on how blocks are distributed over worker threads.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import EmptySet, SingularBasis, TooManyTies
from .numerics import adjugate, ball_volume, orthonormal_subspace_basis
from .polytope import DEFAULT_TOL, PolytopeGraph, Tolerances

TIE = -1
BLOCK = 1 << 16
MAX_TIE_FRACTION = 1e-3

_CONE_STREAM = 0
_FACET_STREAM = 1


def _block_rng(seed: int, key: tuple, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(*key, block))
    return np.random.Generator(np.random.Philox(ss))


def _blocks(samples: int):
    return [(i, min(BLOCK, samples - i * BLOCK)) for i in range((samples + BLOCK - 1) // BLOCK)]


def _run_blocks(fn, samples, workers):
    blocks = _blocks(samples)
    if workers and workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda blk: fn(*blk), blocks))
    return [fn(*blk) for blk in blocks]


def binomial_stderr(hits, total, scale=1.0):
    """Standard error of ``scale * hits / total``.

    The variance uses the add-one smoothed proportion so that empty and full
    counts still carry a non-zero error.
    """
    p = (np.asarray(hits, dtype=float) + 1.0) / (total + 2.0)
    return scale * np.sqrt(p * (1.0 - p) / total)


def uniform_directions(n: int, count: int, seed: int, key=(2,)) -> np.ndarray:
    """``count`` uniform unit vectors in R^n from the keyed stream."""
    parts = []
    for blk, size in _blocks(count):
        z = _block_rng(seed, key, blk).standard_normal((size, n))
        parts.append(z / np.linalg.norm(z, axis=1, keepdims=True))
    return np.concatenate(parts) if parts else np.empty((0, n))


def assign_directions(points: np.ndarray, C: np.ndarray,
                      tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Index of the maximising vertex for every row of ``C`` (``TIE`` on near-ties)."""
    vals = np.atleast_2d(C) @ points.T
    best = vals.argmax(axis=1)
    if vals.shape[1] < 2:
        return best
    top2 = np.partition(vals, vals.shape[1] - 2, axis=1)[:, -2:]
    eps = tol.argmax * np.abs(vals).max(axis=1)
    return np.where(top2[:, 1] - top2[:, 0] < eps, TIE, best)


def locate_vertex(G: PolytopeGraph, c, tol: Tolerances = DEFAULT_TOL) -> int:
    """Vertex whose normal cone contains ``c``, or ``TIE`` on a cone boundary."""
    c = np.asarray(c, dtype=float)
    return int(assign_directions(G.points, c[None, :], tol)[0])


@dataclass(frozen=True)
class ConeVolumes:
    """Monte Carlo hit counts of uniform directions per normal cone."""

    hits: np.ndarray
    accepted: int
    ties: int
    ball_volume: float

    @property
    def volumes(self) -> np.ndarray:
        return self.hits / self.accepted * self.ball_volume

    @property
    def stderrs(self) -> np.ndarray:
        return binomial_stderr(self.hits, self.accepted, self.ball_volume)

    def union(self, ids):
        """Volume and stderr of the union of the spherical cones of ``ids``."""
        h = int(self.hits[list(ids)].sum()) if len(ids) else 0
        vol = h / self.accepted * self.ball_volume
        return vol, float(binomial_stderr(h, self.accepted, self.ball_volume))


def estimate_cone_volumes(G: PolytopeGraph, samples: int = 10**6, seed: int = 0,
                          workers: int = 1, tol: Tolerances = DEFAULT_TOL) -> ConeVolumes:
    """Estimate every ``vol(C_v ∩ B_n)`` from ``samples`` uniform directions.

    Directions landing on a cone boundary (ties) are discarded and counted;
    more than 0.1% ties raises :class:`TooManyTies`.
    """
    if samples < 1000:
        raise ValueError("samples must be at least 1000")
    n, points = G.n, G.points
    nv = len(points)

    def block(blk, size):
        # argmax and the relative tie test are scale invariant, no normalisation needed
        z = _block_rng(seed, (_CONE_STREAM,), blk).standard_normal((size, n))
        ids = assign_directions(points, z, tol)
        ties = int(np.count_nonzero(ids == TIE))
        return np.bincount(ids[ids != TIE], minlength=nv), ties

    results = _run_blocks(block, samples, workers)
    hits = np.zeros(nv, dtype=np.int64)
    ties = 0
    for h, t in results:
        hits += h
        ties += t
    if ties > MAX_TIE_FRACTION * samples:
        raise TooManyTies(ties, samples)
    return ConeVolumes(hits, samples - ties, ties, ball_volume(n).volume)


def facet_height(basis, dropped: int, check: bool = True) -> float:
    """Distance from generator ``dropped`` to the hyperplane of the other generators.

    Computed as ``|det(A_v)| / ||adj(A_v)[:, dropped]||``: the adjugate column
    is orthogonal to every other generator and has inner product ``det`` with
    the dropped one.
    """
    Av = np.asarray(basis, dtype=float)
    det = float(np.linalg.det(Av))
    if abs(det) <= DEFAULT_TOL.det:
        raise SingularBasis(f"|det(A_v)| = {abs(det):.3g}")
    h = abs(det) / float(np.linalg.norm(adjugate(Av)[:, dropped]))
    if check:
        ref = projection_height(Av, dropped)
        if abs(h - ref) > 1e-9:
            warnings.warn(f"facet height mismatch: adjugate {h!r}, projection {ref!r}",
                          RuntimeWarning, stacklevel=2)
    return h


def projection_height(basis, dropped: int) -> float:
    """Same quantity as :func:`facet_height`, by least-squares projection."""
    Av = np.asarray(basis, dtype=float)
    a = Av[dropped]
    others = np.delete(Av, dropped, axis=0)
    coef, *_ = np.linalg.lstsq(others.T, a, rcond=None)
    return float(np.linalg.norm(a - others.T @ coef))


def simplex_volume(basis) -> float:
    """Volume of the simplex spanned by the origin and the rows of ``basis``."""
    Av = np.asarray(basis, dtype=float)
    det = abs(float(np.linalg.det(Av)))
    if det <= DEFAULT_TOL.det:
        raise SingularBasis(f"|det(A_v)| = {det:.3g}")
    return det / math.factorial(Av.shape[0])


def sector_area(g1, g2) -> float:
    """Area of the unit-radius circular sector between two unit vectors."""
    c = float(np.clip(np.dot(g1, g2), -1.0, 1.0))
    return math.acos(c) / 2.0


def facet_generators(G: PolytopeGraph, vid: int, dropped: int) -> tuple:
    """Row indices and vectors generating the facet of ``C_v`` opposite ``dropped``."""
    rows = tuple(r for r in G.vertices[vid].tight_rows if r != dropped)
    if len(rows) != G.n - 1:
        raise ValueError(f"row {dropped} is not tight at vertex {vid}")
    return rows, G.H.A[list(rows)]


def spherical_cone_fraction(gens: np.ndarray, samples: int, seed: int, key: tuple,
                            tol: Tolerances = DEFAULT_TOL):
    """Fraction (and count) of uniform directions in span(gens) lying in cone(gens)."""
    Q = orthonormal_subspace_basis(gens)
    k = Q.shape[0]
    coords = gens @ Q.T  # row i: generator i in subspace coordinates
    inv = np.linalg.inv(coords)
    inside = 0
    for blk, size in _blocks(samples):
        z = _block_rng(seed, key, blk).standard_normal((size, k))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        lam = z @ inv
        inside += int(np.count_nonzero((lam >= -tol.coef).all(axis=1)))
    return inside


def facet_area(G: PolytopeGraph, vid: int, dropped: int, samples: int = 10**5,
               seed: int = 0, method: str = "auto", tol: Tolerances = DEFAULT_TOL):
    """(n-1)-volume of a facet of the spherical cone ``S_v`` and its stderr.

    ``method``: ``"mc"`` samples directions inside the facet hyperplane;
    ``"exact"`` is available for n = 2 (unit segment) and n = 3 (sector);
    ``"auto"`` is exact for n = 2 and Monte Carlo otherwise. The random stream
    is keyed by the facet's generator rows, so both cones sharing a facet see
    the same estimate.
    """
    rows, gens = facet_generators(G, vid, dropped)
    n = G.n
    if method not in ("auto", "mc", "exact"):
        raise ValueError(f"unknown method {method!r}")
    if method == "exact" or (method == "auto" and n == 2):
        if n == 2:
            return 1.0, 0.0
        if n == 3:
            return sector_area(gens[0], gens[1]), 0.0
        raise ValueError("exact facet areas exist only for n <= 3")
    inside = spherical_cone_fraction(gens, samples, seed, (_FACET_STREAM, *rows), tol)
    vb = ball_volume(n - 1).volume
    return inside / samples * vb, float(binomial_stderr(inside, samples, vb))


class FacetTable:
    """Lazily computed facet areas keyed by the facet's generator rows."""

    def __init__(self, G: PolytopeGraph, samples: int = 10**5, seed: int = 0,
                 method: str = "auto", tol: Tolerances = DEFAULT_TOL):
        self.G = G
        self.samples = samples
        self.seed = seed
        self.method = method
        self.tol = tol
        self._cache = {}

    def edge(self, u: int, w: int):
        rows = self.G.shared_rows(u, w)
        if rows not in self._cache:
            self._cache[rows] = facet_area(self.G, u, self.G.dropped_row(u, w),
                                           self.samples, self.seed, self.method, self.tol)
        return self._cache[rows]

    def vertex(self, vid: int):
        """Per-neighbour facet areas of ``S_v``, in adjacency order."""
        return [self.edge(vid, w) for w in self.G.adjacency[vid]]


def boundary_area(G: PolytopeGraph, I, samples: int = 10**5, seed: int = 0,
                  table: FacetTable | None = None):
    """Dockable surface ``D(S_I)`` of the union of the cones of ``I``.

    Each polytope edge with exactly one endpoint in ``I`` contributes the
    facet the two cones share. Returns ``(area, stderr)``.
    """
    I = frozenset(I)
    if not I:
        raise EmptySet("vertex set is empty")
    if len(I) == len(G):
        warnings.warn("vertex set covers the whole polytope; boundary is empty",
                      RuntimeWarning, stacklevel=2)
        return 0.0, 0.0
    table = table or FacetTable(G, samples, seed)
    area, var = 0.0, 0.0
    for u in sorted(I):
        for w in G.adjacency[u]:
            if w not in I:
                a, s = table.edge(u, w)
                area += a
                var += s * s
    return area, math.sqrt(var)


@dataclass(frozen=True)
class ConeStats:
    vertex_id: int
    volume: float
    volume_stderr: float
    facet_rows: tuple  # dropped row per facet
    facet_heights: tuple
    facet_areas: tuple
    facet_area_stderrs: tuple
    dockable_surface: float
    dockable_stderr: float
    simplex_volume: float


def cone_stats(G: PolytopeGraph, vid: int, volumes: ConeVolumes,
               table: FacetTable) -> ConeStats:
    v = G.vertices[vid]
    dropped, heights, areas, errs = [], [], [], []
    for w in G.adjacency[vid]:
        r = G.dropped_row(vid, w)
        a, s = table.edge(vid, w)
        dropped.append(r)
        heights.append(facet_height(v.basis, v.tight_rows.index(r), check=False))
        areas.append(a)
        errs.append(s)
    return ConeStats(
        vertex_id=vid,
        volume=float(volumes.volumes[vid]),
        volume_stderr=float(volumes.stderrs[vid]),
        facet_rows=tuple(dropped),
        facet_heights=tuple(heights),
        facet_areas=tuple(areas),
        facet_area_stderrs=tuple(errs),
        dockable_surface=float(sum(areas)),
        dockable_stderr=math.sqrt(sum(s * s for s in errs)),
        simplex_volume=simplex_volume(v.basis),
    )
