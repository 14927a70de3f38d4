from fractions import Fraction

import networkx as nx
import numpy as np
import pytest

from oracles import (
    halfspace_vertices,
    nx_graph,
    shared_row_adjacency,
    sorted_points,
    vertex_at,
)
from polydiam import (
    HRepresentation,
    bfs_layers,
    build_graph,
    cross_polytope,
    diameter,
    enumerate_vertices,
    hypercube,
    polytope_graph,
    random_tangent,
    regular_polygon,
    simplex,
)
from polydiam.errors import Degenerate, DimensionError, EmptyPolytope, SizeTooLarge, Unbounded
from polydiam.polytope import bfs_distances, neighborhood


class TestHRepresentation:
    def test_exact_rows_kept(self):
        H = HRepresentation.from_arrays([[3, 4], [0, 1], [-1, 0]], [5, 1, 1])
        assert H.exact
        assert H.A_exact[0] == (Fraction(3, 5), Fraction(4, 5)) and H.b_exact[0] == 1
        np.testing.assert_allclose(np.linalg.norm(H.A, axis=1), 1, atol=1e-15)

    def test_irrational_norms_use_floats(self):
        H = HRepresentation.from_arrays([[1, 1], [-1, 0], [0, -1]], [1, 0, 0])
        assert not H.exact
        assert H.b[0] == pytest.approx(2**-0.5)

    @pytest.mark.parametrize("A,b", [([[1, 0], [0, 1]], [1, 1]), ([[1], [2], [3]], [1, 1, 1])])
    def test_dimension_errors(self, A, b):
        with pytest.raises(DimensionError):
            HRepresentation.from_arrays(A, b)

    def test_perturb_is_seeded(self):
        H = hypercube(3)
        P1, P2 = H.perturbed(0.01, 5), H.perturbed(0.01, 5)
        assert np.array_equal(P1.b, P2.b)
        assert np.all(np.abs(P1.b - H.b) <= 0.01)
        assert np.array_equal(P1.A, H.A)


class TestEnumerate:
    def test_square(self):
        V = enumerate_vertices(hypercube(2))
        pts = sorted_points([v.point for v in V])
        np.testing.assert_allclose(pts, [[-1, -1], [-1, 1], [1, -1], [1, 1]])

    def test_simplex_2d(self):
        V = enumerate_vertices(simplex(2))
        np.testing.assert_allclose(sorted_points([v.point for v in V]),
                                   [[0, 0], [0, 1], [1, 0]], atol=1e-12)

    @pytest.mark.parametrize("H,interior", [
        (hypercube(3), [0, 0, 0]),
        (hypercube(4), [0, 0, 0, 0]),
        (simplex(3), [0.2, 0.2, 0.2]),
        (regular_polygon(7), [0, 0]),
        (random_tangent(12, 3, seed=3), [0, 0, 0]),
        (random_tangent(10, 4, seed=1), [0, 0, 0, 0]),
    ])
    def test_matches_halfspace_intersection(self, H, interior):
        ours = sorted_points([v.point for v in enumerate_vertices(H)])
        ref = sorted_points(halfspace_vertices(H.A, H.b, interior))
        assert ours.shape == ref.shape
        np.testing.assert_allclose(ours, ref, atol=1e-8)

    def test_vertex_invariants(self):
        H = random_tangent(14, 3, seed=9)
        for v in enumerate_vertices(H):
            assert (H.A @ v.point - H.b).max() <= 1e-9
            assert len(v.tight_rows) == H.n and list(v.tight_rows) == sorted(v.tight_rows)
            assert v.basis_det == pytest.approx(abs(np.linalg.det(H.A[list(v.tight_rows)])))
            assert v.basis_det > 0

    def test_octahedron_degenerate(self):
        with pytest.raises(Degenerate) as exc:
            enumerate_vertices(cross_polytope(3))
        listed = {tuple(np.round(p, 9)): t for p, t in exc.value.vertices}
        assert len(listed) == 6
        e3 = (0.0, 0.0, 1.0)
        assert e3 in listed and len(listed[e3]) == 4
        assert len(exc.value.tight_rows) == 4

    def test_budget(self):
        with pytest.raises(SizeTooLarge):
            enumerate_vertices(random_tangent(16, 4, seed=0), budget=100)

    def test_infeasible(self):
        H = HRepresentation.from_arrays([[1, 0], [-1, 0], [0, 1], [0, -1]], [-1, -1, 1, 1])
        with pytest.raises(EmptyPolytope):
            enumerate_vertices(H)

    def test_unnormalized_and_normalized_agree(self, rng):
        A = rng.standard_normal((10, 3)) * rng.uniform(0.5, 4, size=(10, 1))
        b = np.linalg.norm(A, axis=1)
        H1 = HRepresentation.from_arrays(A, b)
        H2 = HRepresentation.from_arrays(H1.A, H1.b)
        p1 = sorted_points([v.point for v in enumerate_vertices(H1)])
        p2 = sorted_points([v.point for v in enumerate_vertices(H2)])
        np.testing.assert_allclose(p1, p2, atol=1e-9)


class TestGraph:
    def test_square_cycle(self, square):
        assert all(len(square.neighbors(v)) == 2 for v in range(4))
        assert nx.cycle_basis(nx_graph(square))[0].__len__() == 4

    def test_cube(self, cube):
        assert all(len(cube.neighbors(v)) == 3 for v in range(8))
        assert len(cube.edges()) == 12

    @pytest.mark.parametrize("H", [hypercube(4), simplex(4), regular_polygon(5),
                                   random_tangent(12, 3, seed=2), random_tangent(9, 4, seed=5)])
    def test_pivot_matches_shared_rows(self, H):
        G = polytope_graph(H)
        assert set(G.edges()) == shared_row_adjacency(G)
        for u in range(len(G)):
            assert len(G.neighbors(u)) == H.n
            assert u not in G.neighbors(u)
            for w in G.neighbors(u):
                assert u in G.neighbors(w)

    def test_slab_unbounded(self, slab):
        with pytest.raises(Unbounded) as exc:
            polytope_graph(slab)
        np.testing.assert_allclose(exc.value.direction, [0, -1], atol=1e-12)

    def test_dropped_and_shared_rows(self, square):
        for u, w in square.edges():
            shared = square.shared_rows(u, w)
            assert len(shared) == 1
            assert square.dropped_row(u, w) not in shared


class TestDiameter:
    def test_square(self, square):
        d, (u, w) = diameter(square)
        assert d == 2
        assert np.allclose(square.vertices[u].point, -square.vertices[w].point)

    @pytest.mark.parametrize("n", [3, 4])
    def test_cube(self, n):
        assert diameter(polytope_graph(hypercube(n)))[0] == n

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_simplex(self, n):
        assert diameter(polytope_graph(simplex(n)))[0] == 1

    @pytest.mark.parametrize("k", range(3, 10))
    def test_polygon(self, k):
        assert diameter(polytope_graph(regular_polygon(k)))[0] == k // 2

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_networkx(self, seed):
        G = polytope_graph(random_tangent(8 + seed, 2 + seed % 3, seed=seed))
        d, (u, w) = diameter(G)
        assert d == nx.diameter(nx_graph(G))
        assert nx.shortest_path_length(nx_graph(G), u, w) == d

    def test_row_permutation_invariance(self, rng):
        H = random_tangent(12, 3, seed=4)
        perm = rng.permutation(H.m)
        Hp = HRepresentation.from_arrays(H.A[perm], H.b[perm])
        assert diameter(polytope_graph(H))[0] == diameter(polytope_graph(Hp))[0]

    def test_rotation_invariance(self, rng):
        H = random_tangent(11, 3, seed=6)
        Q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        Hr = HRepresentation.from_arrays(H.A @ Q.T, H.b)
        G, Gr = polytope_graph(H), polytope_graph(Hr)
        assert diameter(G)[0] == diameter(Gr)[0]
        np.testing.assert_allclose(sorted_points(G.points @ Q.T), sorted_points(Gr.points),
                                   atol=1e-9)


class TestBfsLayers:
    def test_square(self, square):
        for s in range(4):
            layers = bfs_layers(square, s)
            assert [len(I) for I in layers] == [1, 3, 4]
            assert layers[0] == {s}

    def test_cube(self, cube):
        corner = vertex_at(cube, [1, 1, 1])
        assert [len(I) for I in bfs_layers(cube, corner)] == [1, 4, 7, 8]

    def test_monotone_and_eccentricity(self):
        G = polytope_graph(random_tangent(13, 3, seed=8))
        for s in range(len(G)):
            layers = bfs_layers(G, s)
            sizes = [len(I) for I in layers]
            assert sizes == sorted(set(sizes))
            assert all(a <= b for a, b in zip(layers, layers[1:]))
            assert len(layers) - 1 == max(bfs_distances(G, s))
            for I, J in zip(layers, layers[1:]):
                assert J == I | neighborhood(G, I)
