"""Polytope graph diameters and the sub-determinant diameter bound.

Typical use::

    from polydiam import PolytopeAnalyzer, hypercube
    est = PolytopeAnalyzer(samples=10**5).fit(hypercube(3))
    est.diameter_, est.bound_.diameter_bound_paper
"""

from .bounds import (
    ConditionNumbers,
    TheoremBound,
    condition_numbers,
    expansion_trace,
    theorem_bound,
    verify_all,
    verify_lemma1,
    verify_lemma2,
    verify_lemma3,
)
from .cones import (
    TIE,
    boundary_area,
    estimate_cone_volumes,
    facet_area,
    facet_height,
    locate_vertex,
    simplex_volume,
)
from .errors import PolytopeError
from .estimator import PolytopeAnalyzer
from .generators import cross_polytope, hypercube, random_tangent, regular_polygon, simplex
from .hrep import format_hrep, parse_hrep, read_hrep, write_hrep
from .numerics import (
    adjugate,
    ball_volume,
    determinant,
    minor_max,
    normalize_rows,
    orthonormal_subspace_basis,
)
from .polytope import (
    HRepresentation,
    PolytopeGraph,
    Tolerances,
    bfs_layers,
    build_graph,
    diameter,
    enumerate_vertices,
    polytope_graph,
)

__version__ = "0.1.0"
