"""Estimator-style front end to the whole analysis pipeline."""

from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .bounds import condition_numbers, expansion_trace, theorem_bound, verify_all
from .cones import FacetTable, assign_directions, cone_stats, estimate_cone_volumes
from .numerics import DEFAULT_MINOR_BUDGET
from .polytope import DEFAULT_TOL, HRepresentation, build_graph, diameter, enumerate_vertices


def as_hrep(X) -> HRepresentation:
    """Accept an HRepresentation, an ``(A, b)`` pair or a stacked ``[A | b]`` array."""
    if isinstance(X, HRepresentation):
        return X
    if isinstance(X, tuple) and len(X) == 2:
        return HRepresentation.from_arrays(*X)
    arr = check_array(X, dtype=None, ensure_min_features=3)
    return HRepresentation.from_arrays(arr[:, :-1], arr[:, -1])


class PolytopeAnalyzer(BaseEstimator):
    """Diameter, condition numbers, bound and lemma checks for ``{x : Ax <= b}``.

    ``fit`` takes the constraints (see :func:`as_hrep`). After fitting,
    ``predict`` maps objective directions to the vertex that maximises them
    (``-1`` on a tie) and ``transform`` returns the objective value at every
    vertex. Setting ``lemmas=()`` skips all Monte Carlo work.
    """

    def __init__(self, samples=10**6, facet_samples=10**5, seed=0, workers=1,
                 all_minors=False, lemmas=(1, 2, 3), perturb=0.0, tol=None,
                 budget=DEFAULT_MINOR_BUDGET):
        self.samples = samples
        self.facet_samples = facet_samples
        self.seed = seed
        self.workers = workers
        self.all_minors = all_minors
        self.lemmas = lemmas
        self.perturb = perturb
        self.tol = tol
        self.budget = budget

    def fit(self, X, y=None):
        tol = self.tol or DEFAULT_TOL
        H = as_hrep(X)
        if self.perturb:
            H = H.perturbed(self.perturb, self.seed)
        self.hrep_ = H
        self.n_features_in_ = H.n
        vertices = enumerate_vertices(H, tol, self.budget)
        self.graph_ = build_graph(H, vertices, tol)
        self.diameter_, self.diameter_witness_ = diameter(self.graph_)
        self.condition_ = condition_numbers(H, vertices, self.all_minors, self.budget)
        self.bound_ = theorem_bound(H.n, self.condition_.delta, self.condition_.det_star)

        self.cone_volumes_ = self.facet_table_ = self.verification_ = self.trace_ = None
        self.cone_stats_ = []
        if self.lemmas:
            G = self.graph_
            self.cone_volumes_ = estimate_cone_volumes(G, self.samples, self.seed,
                                                       self.workers, tol)
            self.facet_table_ = FacetTable(G, self.facet_samples, self.seed, tol=tol)
            self.cone_stats_ = [cone_stats(G, v, self.cone_volumes_, self.facet_table_)
                                for v in range(len(G))]
            self.verification_ = verify_all(G, self.condition_, self.cone_volumes_,
                                            self.facet_table_, tuple(self.lemmas))
            u, w = self.diameter_witness_
            self.trace_ = expansion_trace(G, u, w, self.condition_,
                                          volumes=self.cone_volumes_)
        return self

    def lemmas_hold(self) -> bool:
        """True when every selected check passed (vacuously without Monte Carlo)."""
        check_is_fitted(self)
        if self.verification_ is None:
            return True
        ok = self.verification_.passed
        if self.trace_ is not None:
            ok = ok and self.trace_.meet_bound_holds
            if 3 in self.lemmas:
                ok = ok and self.trace_.growth_holds
        return ok

    def _directions(self, C):
        check_is_fitted(self)
        C = check_array(C, dtype=float)
        if C.shape[1] != self.n_features_in_:
            raise ValueError(f"directions have {C.shape[1]} coordinates, "
                             f"expected {self.n_features_in_}")
        return C

    def transform(self, C):
        """Objective value ``c . x_v`` of every direction at every vertex."""
        return self._directions(C) @ self.graph_.points.T

    def predict(self, C):
        """Vertex id whose normal cone contains each direction (-1 on ties)."""
        C = self._directions(C)
        return assign_directions(self.graph_.points, C, self.tol or DEFAULT_TOL)

    def report(self) -> dict:
        from .report import build_report

        check_is_fitted(self)
        return build_report(self)

