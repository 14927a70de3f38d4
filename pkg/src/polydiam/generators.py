"""Deterministic test polytopes in normalised H-representation."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import Degenerate, EmptyPolytope, GenerationFailed, InconsistentAdjacency, Unbounded
from .polytope import HRepresentation, polytope_graph

FAMILIES = ("hypercube", "simplex", "regular_polygon", "cross_polytope", "random_tangent")
MAX_ATTEMPTS = 100


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    n: int = 2
    m: int | None = None
    seed: int = 0

    def build(self) -> HRepresentation:
        if self.family == "hypercube":
            return hypercube(self.n)
        if self.family == "simplex":
            return simplex(self.n)
        if self.family == "regular_polygon":
            if self.m is None:
                raise ValueError("regular_polygon needs the number of sides m")
            return regular_polygon(self.m)
        if self.family == "cross_polytope":
            return cross_polytope(self.n)
        if self.family == "random_tangent":
            if self.m is None:
                raise ValueError("random_tangent needs the row count m")
            return random_tangent(self.m, self.n, self.seed)
        raise ValueError(f"unknown family {self.family!r}; choose from {FAMILIES}")


def _check_dim(n):
    if n < 2:
        raise ValueError("n must be >= 2")


def hypercube(n: int) -> HRepresentation:
    """[-1, 1]^n as rows e_1..e_n, -e_1..-e_n with b = 1 (kept exact)."""
    _check_dim(n)
    eye = [[int(i == j) for j in range(n)] for i in range(n)]
    A = eye + [[-x for x in row] for row in eye]
    return HRepresentation.from_arrays(A, [1] * (2 * n))


def simplex(n: int) -> HRepresentation:
    """Standard simplex: x_i >= 0 and sum(x) <= 1."""
    _check_dim(n)
    A = [[-int(i == j) for j in range(n)] for i in range(n)] + [[1] * n]
    return HRepresentation.from_arrays(A, [0] * n + [1])


def regular_polygon(k: int) -> HRepresentation:
    if k < 3:
        raise ValueError("a polygon needs k >= 3 sides")
    t = 2.0 * np.pi * np.arange(k) / k
    return HRepresentation.from_arrays(np.column_stack([np.cos(t), np.sin(t)]), np.ones(k))


def cross_polytope(n: int) -> HRepresentation:
    """{sum(±x_i) <= 1}; degenerate for n >= 3 (2^(n-1) tight rows per vertex)."""
    _check_dim(n)
    A = [list(s) for s in product((1, -1), repeat=n)]
    return HRepresentation.from_arrays(A, [1] * len(A))


def random_tangent(m: int, n: int, seed: int = 0) -> HRepresentation:
    """``m`` uniform unit rows with b = 1, every facet tangent to the unit sphere.

    Draws are repeated with fresh sub-seeds until the polytope is bounded and
    non-degenerate.
    """
    _check_dim(n)
    if m < 2 * n:
        raise ValueError("random_tangent needs m >= 2n")
    for attempt in range(MAX_ATTEMPTS):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(attempt,)))
        A = rng.standard_normal((m, n))
        A /= np.linalg.norm(A, axis=1, keepdims=True)
        H = HRepresentation.from_arrays(A, np.ones(m))
        try:
            polytope_graph(H)
        except (Unbounded, Degenerate, EmptyPolytope, InconsistentAdjacency):
            continue
        return H
    raise GenerationFailed(
        f"no bounded non-degenerate instance for m={m}, n={n}, seed={seed} "
        f"after {MAX_ATTEMPTS} attempts")

