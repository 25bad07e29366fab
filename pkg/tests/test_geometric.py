from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pentagram.core import (LiftedPolygon, balanced_frame, extract_invariants, projective_angle,
                            projectively_equal, random_sl, reconstruct)
from pentagram.errors import NotTransverse
from pentagram.geometric import (HEXAGON_OFFSET, SubspaceBasis, classical_pentagram,
                                 fit_homography, geometric_map_invariants, hexagon_involution_residual,
                                 hyperplane_intersection_oracle, intersect_two_subspaces,
                                 map_shift, mapped_polygon, plane_indices_for_vertex,
                                 plane_vertex_indices, projective_residual, reduced_subspaces)
from pentagram.invariant import has_real_lambda, pentagram_map_invariants
from pentagram.sampling import generate_field, random_convex_polygon

from conftest import nondegenerate_fields

GOOD_DIMS = [(2, 5), (2, 7), (3, 5), (4, 7), (5, 7)]


def exact_polygon(n, N, seed):
    inv = generate_field(n, N, np.random.default_rng(seed), accept=has_real_lambda)
    return inv, reconstruct(inv, balanced_frame(inv))


def test_plane_indices():
    assert plane_vertex_indices(0, 2) == [-1, 1]
    assert plane_vertex_indices(0, 3) == [-2, 0, 2]
    assert plane_vertex_indices(5, 4) == [2, 4, 6, 8]
    assert plane_indices_for_vertex(0, 2) == [0, 1]
    assert plane_indices_for_vertex(0, 3) == [-1, 0, 1]
    assert plane_indices_for_vertex(3, 4) == [2, 3, 4, 5]
    with pytest.raises(ValueError):
        plane_vertex_indices(0, 1)


def test_map_shift():
    assert [map_shift(n) for n in (2, 3, 4, 5, 6)] == [1, 2, 2, 3, 3]


@pytest.mark.parametrize("n,N", GOOD_DIMS)
def test_two_paths_agree_exactly(n, N):
    _, lp = exact_polygon(n, N, 1)
    for k in range(N):
        a = intersect_two_subspaces(*reduced_subspaces(lp, k))
        b = hyperplane_intersection_oracle(lp, k)
        assert projectively_equal(a, b)


@pytest.mark.parametrize("n,N", GOOD_DIMS)
def test_two_paths_agree_float(n, N):
    _, lp = exact_polygon(n, N, 2)
    lp = lp.to_float()
    for k in range(N):
        a = intersect_two_subspaces(*reduced_subspaces(lp, k))
        b = hyperplane_intersection_oracle(lp, k)
        assert projective_angle(a, b) < 1e-8


def test_intersection_dimension_check():
    A = SubspaceBasis(np.eye(3)[:1])
    B = SubspaceBasis(np.eye(3)[1:2])
    with pytest.raises(ValueError):
        intersect_two_subspaces(A, B)


def test_intersection_not_transverse():
    # two equal planes in R^3 meet in a plane, not a line
    P = np.array([[F(1), F(0), F(0)], [F(0), F(1), F(0)]], dtype=object)
    with pytest.raises(NotTransverse):
        intersect_two_subspaces(SubspaceBasis(P), SubspaceBasis(P))
    with pytest.raises(NotTransverse):
        intersect_two_subspaces(SubspaceBasis(P.astype(float)), SubspaceBasis(P.astype(float)))


def test_intersection_exact_line():
    A = SubspaceBasis(np.array([[F(1), F(0), F(0)], [F(0), F(1), F(0)]], dtype=object))
    B = SubspaceBasis(np.array([[F(0), F(1), F(0)], [F(0), F(0), F(1)]], dtype=object))
    v = intersect_two_subspaces(A, B)
    assert projectively_equal(v, [0, 1, 0])


@given(nondegenerate_fields(dims=GOOD_DIMS))
def test_geometric_map_matches_invariant_map(inv):
    lp = reconstruct(inv)
    try:
        geo = geometric_map_invariants(lp)
    except NotTransverse:
        return
    assert geo == pentagram_map_invariants(inv)


@pytest.mark.parametrize("n,N", GOOD_DIMS)
def test_projective_equivariance(n, N):
    inv, lp = exact_polygon(n, N, 3)
    g = random_sl(n + 1, np.random.default_rng(4), exact_=True)
    moved = lp.act(g)
    assert extract_invariants(moved) == inv
    assert geometric_map_invariants(moved) == geometric_map_invariants(lp)
    W, Wg = mapped_polygon(lp), mapped_polygon(moved)
    for k in range(N):
        assert projectively_equal(g @ W.points[k], Wg.points[k])


def test_mapped_polygon_keeps_monodromy():
    _, lp = exact_polygon(3, 5, 5)
    W = mapped_polygon(lp)
    assert (W.monodromy == lp.monodromy).all()
    assert isinstance(lp, LiftedPolygon)


def test_classical_pentagram_regular_pentagon():
    t = 2 * np.pi * np.arange(5) / 5
    P = np.column_stack([np.cos(t), np.sin(t), np.ones(5)])
    Q = classical_pentagram(P)
    xy = Q[:, :2] / Q[:, 2:]
    r = np.linalg.norm(xy, axis=1)
    # the inner pentagon of a regular pentagram, rotated by pi/5
    assert np.allclose(r, r[0])
    assert r[0] == pytest.approx(np.cos(2 * np.pi / 5) / np.cos(np.pi / 5))


def test_classical_pentagram_parallel_diagonals():
    P = np.array([[0, 0, 1], [1, 0, 1], [2, 0, 1], [3, 0, 1], [4, 0, 1]], dtype=float)
    with pytest.raises(NotTransverse):
        classical_pentagram(P)


@given(st.integers(0, 2 ** 32 - 1))
def test_fit_homography_recovers_map(seed):
    rng = np.random.default_rng(seed)
    H = rng.normal(size=(3, 3))
    src = rng.normal(size=(4, 3))
    dst = src @ H.T * rng.uniform(0.5, 2, size=(4, 1))
    G = fit_homography(src, dst)
    extra = rng.normal(size=(3, 3))
    assert projective_residual(G, extra, extra @ H.T) < 1e-6


def test_fit_homography_shape():
    with pytest.raises(ValueError):
        fit_homography(np.zeros((3, 3)), np.zeros((3, 3)))


def test_hexagon_involution():
    rng = np.random.default_rng(6)
    assert HEXAGON_OFFSET == 2
    for _ in range(5):
        assert hexagon_involution_residual(random_convex_polygon(6, rng)) < 1e-9


def test_hexagon_shape_check():
    with pytest.raises(ValueError):
        hexagon_involution_residual(np.zeros((5, 3)))


def test_heptagon_is_not_an_involution():
    rng = np.random.default_rng(8)
    P = random_convex_polygon(7, rng)
    Q = np.roll(classical_pentagram(classical_pentagram(P)), -2, axis=0)
    H = fit_homography(P[:4], Q[:4])
    assert projective_residual(H, P[4:], Q[4:]) > 1e-3
