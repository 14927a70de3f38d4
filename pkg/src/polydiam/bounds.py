"""Condition numbers, the explicit diameter bound and checks of the proof chain.

Monte Carlo quantities enter every inequality with a slack of three standard
errors on the estimated side; exact quantities (facet heights, sub-determinant
extremes, simplex volumes) are compared without slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .cones import ConeVolumes, FacetTable, boundary_area, estimate_cone_volumes, facet_height
from .errors import InvalidConditionNumbers, PreconditionVolume
from .numerics import (
    DEFAULT_MINOR_BUDGET,
    bareiss_determinant,
    ball_volume,
    minor_max,
    minor_min_nonzero,
)
from .polytope import DEFAULT_TOL, HRepresentation, PolytopeGraph, bfs_distances, bfs_layers, neighborhood

SLACK = 3.0


@dataclass(frozen=True)
class ConditionNumbers:
    delta: float
    det_star: float
    per_vertex_dets: tuple
    det_star_all_minors: float | None = None
    exact: bool = False


def condition_numbers(H: HRepresentation, vertices, all_minors: bool = False,
                      budget: int = DEFAULT_MINOR_BUDGET) -> ConditionNumbers:
    """Largest (n-1)-minor of ``A`` and smallest vertex-basis determinant.

    With ``all_minors`` the smallest nonzero n x n minor over all row subsets
    is reported as well. Rational data is scanned exactly.
    """
    n = H.n
    if H.exact:
        delta = float(minor_max(H.A_exact, n - 1, budget))
        dets = tuple(
            float(abs(bareiss_determinant([H.A_exact[r] for r in v.tight_rows])))
            for v in vertices
        )
    else:
        delta = float(minor_max(H.A, n - 1, budget))
        dets = tuple(v.basis_det for v in vertices)
    det_all = None
    if all_minors:
        src = H.A_exact if H.exact else H.A
        found = minor_min_nonzero(src, n, DEFAULT_TOL.det, budget)
        det_all = None if found is None else float(found)
    return ConditionNumbers(delta, min(dets), dets, det_all, H.exact)


@dataclass(frozen=True)
class TheoremBound:
    n: int
    delta: float
    det_star: float
    expansion: float  # sqrt(2/pi) det* / (n^2 delta)
    j_max_paper: int
    diameter_bound_paper: int
    j_max_standard: int
    diameter_bound_standard: int


def expansion_constant(n: int, delta: float, det_star: float) -> float:
    return math.sqrt(2.0 / math.pi) * det_star / (n * n * delta)


def theorem_bound(n: int, delta: float, det_star: float) -> TheoremBound:
    """Explicit iteration bound from the last inequality of the proof.

    The breadth-first frontier stays below half the ball only while
    ``log(half-ball * n! / det*) >= j * det* / (sqrt(2 pi) n^2 delta)``;
    ``j_max`` is the ceiling of the crossing point. ``j_max_paper`` takes
    pi^n / n! as the ball volume, ``j_max_standard`` the true volume.
    """
    if not delta > 0:
        raise InvalidConditionNumbers(f"delta must be positive, got {delta}")
    if not 0 < det_star <= 1 + 1e-12:
        raise InvalidConditionNumbers(f"det* must lie in (0, 1], got {det_star}")
    per_step = det_star / (math.sqrt(2.0 * math.pi) * n * n * delta)
    x_paper = (n * math.log(math.pi) - math.log(2.0 * det_star)) / per_step
    x_std = (math.lgamma(n + 1) + math.log(ball_volume(n).volume)
             - math.log(2.0 * det_star)) / per_step
    j_p = max(0, math.ceil(x_paper))
    j_s = max(0, math.ceil(x_std))
    return TheoremBound(n, delta, det_star, expansion_constant(n, delta, det_star),
                        j_p, 2 * j_p, j_s, 2 * j_s)


@dataclass(frozen=True)
class LemmaCheck:
    lemma: str
    subject: tuple  # vertex ids, or (vertex id, row) for facet heights
    value: float
    bound: float
    stderr: float
    passed: bool

    @property
    def margin(self) -> float:
        """Signed distance to the bound in the direction of the inequality."""
        if self.lemma == "lemma2":
            return self.bound - self.value
        return self.value - self.bound


def _half_ball_check(vol, se, vb, strict=True):
    below = vol <= 0.5 * vb + SLACK * se
    if strict and not below:
        raise PreconditionVolume(vol, 0.5 * vb, se)
    return below


def _ensure(G, volumes, table, samples, facet_samples, seed):
    if volumes is None:
        volumes = estimate_cone_volumes(G, samples, seed)
    if table is None:
        table = FacetTable(G, facet_samples, seed)
    return volumes, table


def verify_lemma1(G: PolytopeGraph, I, samples: int = 10**6, seed: int = 0,
                  volumes: ConeVolumes | None = None, table: FacetTable | None = None,
                  facet_samples: int = 10**5) -> LemmaCheck:
    """Isoperimetric ratio ``D(S_I) / vol(S_I) >= sqrt(2n/pi)`` for a union of cones."""
    volumes, table = _ensure(G, volumes, table, samples, facet_samples, seed)
    I = frozenset(I)
    vol, se_v = volumes.union(I)
    _half_ball_check(vol, se_v, volumes.ball_volume)
    area, se_a = boundary_area(G, I, table=table)
    bound = math.sqrt(2.0 * G.n / math.pi)
    # linear form D - bound * vol avoids dividing by a noisy (possibly zero) volume
    sigma = math.hypot(se_a, bound * se_v)
    passed = area - bound * vol >= -SLACK * sigma
    ratio = area / vol if vol > 0 else math.inf
    return LemmaCheck("lemma1", tuple(sorted(I)), ratio, bound,
                      sigma / vol if vol > 0 else math.inf, passed)


def lemma2_bound(n: int, delta: float, det_star: float) -> float:
    return n**2.5 * delta / det_star


def facet_height_floor(n: int, delta: float, det_star: float) -> float:
    return det_star / (math.sqrt(n) * delta)


def facet_height_checks(G: PolytopeGraph, vid: int, cond: ConditionNumbers) -> list:
    """``h_F >= det*/(sqrt(n) delta)`` for every facet of ``S_v``, no tolerance."""
    v = G.vertices[vid]
    floor = facet_height_floor(G.n, cond.delta, cond.det_star)
    out = []
    for k, row in enumerate(v.tight_rows):
        h = facet_height(v.basis, k, check=False)
        out.append(LemmaCheck("facet_height", (vid, row), h, floor, 0.0, h >= floor))
    return out


def verify_lemma2(G: PolytopeGraph, vid: int, cond: ConditionNumbers,
                  samples: int = 10**6, seed: int = 0,
                  volumes: ConeVolumes | None = None, table: FacetTable | None = None,
                  facet_samples: int = 10**5):
    """``D(S_v) / vol(S_v) <= n^2.5 delta / det*`` plus the per-facet height floor.

    Returns ``(check, height_checks)``.
    """
    volumes, table = _ensure(G, volumes, table, samples, facet_samples, seed)
    vol, se_v = volumes.union([vid])
    area, se_a = boundary_area(G, [vid], table=table)
    bound = lemma2_bound(G.n, cond.delta, cond.det_star)
    sigma = math.hypot(se_a, bound * se_v)
    passed = area - bound * vol <= SLACK * sigma
    ratio = area / vol if vol > 0 else math.inf
    check = LemmaCheck("lemma2", (vid,), ratio, bound,
                       sigma / vol if vol > 0 else math.inf, passed)
    return check, facet_height_checks(G, vid, cond)


def verify_lemma3(G: PolytopeGraph, I, cond: ConditionNumbers,
                  samples: int = 10**6, seed: int = 0,
                  volumes: ConeVolumes | None = None) -> LemmaCheck:
    """Neighbourhood growth ``vol(S_N(I)) >= sqrt(2/pi) det*/(n^2 delta) vol(S_I)``."""
    if volumes is None:
        volumes = estimate_cone_volumes(G, samples, seed)
    I = frozenset(I)
    vol, se_v = volumes.union(I)
    _half_ball_check(vol, se_v, volumes.ball_volume)
    coef = expansion_constant(G.n, cond.delta, cond.det_star)
    lhs, se_n = volumes.union(neighborhood(G, I))
    rhs = coef * vol
    sigma = math.hypot(se_n, coef * se_v)
    return LemmaCheck("lemma3", tuple(sorted(I)), lhs, rhs, sigma, lhs - rhs >= -SLACK * sigma)


@dataclass(frozen=True)
class ExpansionRecord:
    iteration: int
    frontier: tuple
    vol_Ij: float
    vol_Ij_stderr: float
    vol_neighborhood: float
    vol_neighborhood_stderr: float
    lemma3_rhs: float
    growth_factor: float
    growth_bound: float
    growth_stderr: float
    below_half_ball: bool
    growth_pass: bool | None  # None once the frontier is above half the ball


@dataclass(frozen=True)
class ExpansionTrace:
    start: int
    target: int
    from_start: tuple
    from_target: tuple
    meet_iteration: int
    distance: int

    @property
    def meet_bound_holds(self) -> bool:
        return self.distance <= 2 * self.meet_iteration

    @property
    def growth_holds(self) -> bool:
        return all(r.growth_pass is not False for r in self.from_start + self.from_target)


def _expansion_records(G, start, cond, volumes):
    coef = expansion_constant(G.n, cond.delta, cond.det_star)
    vb = volumes.ball_volume
    records = []
    for j, I in enumerate(bfs_layers(G, start)):
        vol, se = volumes.union(I)
        N = neighborhood(G, I)
        vol_n, se_n = volumes.union(N)
        below = _half_ball_check(vol, se, vb, strict=False)
        sigma = math.hypot(se_n, coef * se)
        growth = (vol + vol_n) / vol if vol > 0 else math.inf
        records.append(ExpansionRecord(
            iteration=j, frontier=tuple(sorted(I)), vol_Ij=vol, vol_Ij_stderr=se,
            vol_neighborhood=vol_n, vol_neighborhood_stderr=se_n, lemma3_rhs=coef * vol,
            growth_factor=growth, growth_bound=1.0 + coef,
            growth_stderr=sigma / vol if vol > 0 else math.inf,
            below_half_ball=below,
            growth_pass=(vol_n - coef * vol >= -SLACK * sigma) if below else None,
        ))
    return tuple(records)


def expansion_trace(G: PolytopeGraph, u: int, w: int, cond: ConditionNumbers,
                    samples: int = 10**6, seed: int = 0,
                    volumes: ConeVolumes | None = None) -> ExpansionTrace:
    """Grow BFS frontiers from ``u`` and ``w`` until they share a vertex."""
    if volumes is None:
        volumes = estimate_cone_volumes(G, samples, seed)
    lu, lw = bfs_layers(G, u), bfs_layers(G, w)
    meet = next(j for j in range(max(len(lu), len(lw)))
                if lu[min(j, len(lu) - 1)] & lw[min(j, len(lw) - 1)])
    return ExpansionTrace(u, w, _expansion_records(G, u, cond, volumes),
                          _expansion_records(G, w, cond, volumes), meet,
                          bfs_distances(G, u)[w])


@dataclass
class Verification:
    lemma1: list = field(default_factory=list)
    lemma2: list = field(default_factory=list)
    facet_heights: list = field(default_factory=list)
    lemma3: list = field(default_factory=list)

    def groups(self):
        return {"lemma1": self.lemma1, "lemma2": self.lemma2,
                "facet_height": self.facet_heights, "lemma3": self.lemma3}

    @property
    def failures(self) -> list:
        return [c for checks in self.groups().values() for c in checks if not c.passed]

    @property
    def passed(self) -> bool:
        return not self.failures


def below_half_layers(G: PolytopeGraph, volumes: ConeVolumes, starts=None) -> list:
    """Distinct BFS layers (from every start) whose cone union is not above half the ball."""
    seen = {}
    for s in (range(len(G)) if starts is None else starts):
        for I in bfs_layers(G, s):
            if I in seen:
                continue
            vol, se = volumes.union(I)
            if _half_ball_check(vol, se, volumes.ball_volume, strict=False):
                seen[I] = None
    return sorted(seen, key=lambda I: (len(I), sorted(I)))


def verify_all(G: PolytopeGraph, cond: ConditionNumbers, volumes: ConeVolumes,
               table: FacetTable, lemmas=(1, 2, 3), starts=None) -> Verification:
    """Run the selected lemma checks on every vertex and every eligible BFS layer."""
    out = Verification()
    layers = below_half_layers(G, volumes, starts) if {1, 3} & set(lemmas) else []
    if 1 in lemmas:
        singles = [frozenset([v]) for v in range(len(G))]
        for I in dict.fromkeys(singles + layers):
            vol, se = volumes.union(I)
            if _half_ball_check(vol, se, volumes.ball_volume, strict=False):
                out.lemma1.append(verify_lemma1(G, I, volumes=volumes, table=table))
    if 2 in lemmas:
        for v in range(len(G)):
            check, heights = verify_lemma2(G, v, cond, volumes=volumes, table=table)
            out.lemma2.append(check)
            out.facet_heights.extend(heights)
    if 3 in lemmas:
        for I in layers:
            out.lemma3.append(verify_lemma3(G, I, cond, volumes=volumes))
    return out
