from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pentagram import exact
from pentagram.core import (InvariantField, LiftedPolygon, ProjectivePoint, TwistedPolygon,
                            balanced_frame, extract_invariants, identity_like,
                            lift_and_normalize, mc_matrix, monodromy_product,
                            normalize_monodromy, normalize_up_to_scale, projective_invariants,
                            projectively_equal, random_sl, reconstruct, solve_cyclic_window,
                            twisted_polygon)
from pentagram.errors import (Degenerate, NormalizationBroken, NotCoprime,
                              SignUnsolvable)
from pentagram.sampling import generate_field

from conftest import fields


def regular_polygon(N):
    t = 2 * np.pi * np.arange(N) / N
    return np.column_stack([np.cos(t), np.sin(t), np.ones(N)])


# --- projective points and polygons ---------------------------------------

def test_projective_point_equality_up_to_scale():
    assert ProjectivePoint(np.array([1.0, 2.0, 3.0])) == ProjectivePoint(np.array([-2.0, -4.0, -6.0]))
    assert ProjectivePoint(np.array([1.0, 2.0, 3.0])) != ProjectivePoint(np.array([1.0, 2.0, 3.1]))
    u = np.array([F(1), F(2, 3)], dtype=object)
    assert projectively_equal(u, u * F(-7, 5))
    assert not projectively_equal(u, np.array([F(1), F(1)], dtype=object))


def test_zero_point_rejected():
    with pytest.raises(Degenerate):
        ProjectivePoint(np.zeros(3))


def test_monodromy_must_have_unit_determinant():
    pts = regular_polygon(5)
    with pytest.raises(ValueError):
        TwistedPolygon(2, 5, pts, 2 * np.eye(3))
    poly = twisted_polygon(pts, 2 * np.eye(3))  # rescaled to det 1
    assert np.linalg.det(poly.monodromy) == pytest.approx(1.0)


def test_normalize_monodromy_sign():
    M = np.diag([-1.0, 1.0, 1.0, 1.0])
    with pytest.raises(SignUnsolvable):
        normalize_monodromy(M, 3)
    assert np.linalg.det(normalize_monodromy(-np.eye(3), 2)) == pytest.approx(1.0)


# --- cyclic window solve ----------------------------------------------------

@given(st.sampled_from([(5, 3), (7, 3), (7, 4), (5, 4), (11, 6)]),
       st.lists(st.integers(-20, 20), min_size=11, max_size=11))
def test_solve_cyclic_window(dims, data):
    N, w = dims
    b = [F(x) for x in data[:N]]
    x = solve_cyclic_window(b, w)
    assert [sum(x[(k + r) % N] for r in range(w)) for k in range(N)] == b


def test_solve_cyclic_window_mod2():
    # width 3 (odd): always solvable
    b = [1, 0, 1, 1, 0]
    x = solve_cyclic_window(b, 3, modulus=2)
    assert [sum(x[(k + r) % 5] for r in range(3)) % 2 for k in range(5)] == b
    # width 4 (even): solvable iff the parity condition holds
    with pytest.raises(SignUnsolvable):
        solve_cyclic_window([1, 0, 0, 0, 0], 4, modulus=2)
    x = solve_cyclic_window([1, 1, 0, 0, 0], 4, modulus=2)
    assert [sum(x[(k + r) % 5] for r in range(4)) % 2 for k in range(5)] == [1, 1, 0, 0, 0]


def test_solve_cyclic_window_needs_coprime():
    with pytest.raises(NotCoprime):
        solve_cyclic_window([0.0] * 6, 3)


# --- lift_and_normalize ----------------------------------------------------

def test_regular_pentagon_lifts_have_unit_windows():
    lp = lift_and_normalize(twisted_polygon(regular_polygon(5)))
    # direct 3x3 determinants, not the library det
    for k in range(5):
        a, b, c = lp.vertex(k), lp.vertex(k + 1), lp.vertex(k + 2)
        d = (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
             + a[2] * (b[0] * c[1] - b[1] * c[0]))
        assert d == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n,N", [(2, 5), (3, 5), (4, 7)])
def test_already_normalized_lifts_are_kept(n, N):
    inv = generate_field(n, N, np.random.default_rng(n))
    lp = reconstruct(inv.to_float())
    again = lift_and_normalize(lp.to_polygon())
    np.testing.assert_allclose(again.lifts, lp.lifts, atol=1e-9)


def test_lift_rejects_non_coprime():
    with pytest.raises(NotCoprime):
        lift_and_normalize(twisted_polygon(regular_polygon(6)))


def test_lift_rejects_singular_window():
    pts = regular_polygon(5)
    pts[1] = pts[0]
    with pytest.raises(Degenerate):
        lift_and_normalize(twisted_polygon(pts))


def test_lift_odd_sign_canonical():
    rng = np.random.default_rng(3)
    inv = generate_field(3, 5, rng)
    lp = reconstruct(inv.to_float())
    flipped = TwistedPolygon(3, 5, -lp.lifts, lp.monodromy)
    again = lift_and_normalize(flipped)
    assert again.lifts[0][np.flatnonzero(np.abs(again.lifts[0]) > 1e-12)[0]] > 0


# --- invariants and reconstruction ----------------------------------------

def test_regular_pentagon_invariants_constant():
    inv = extract_invariants(lift_and_normalize(twisted_polygon(regular_polygon(5))))
    arr = inv.as_array()
    np.testing.assert_allclose(arr, np.tile(arr[0], (5, 1)), atol=1e-12)


@given(fields())
def test_reconstruct_extract_roundtrip_exact(inv):
    lp = reconstruct(inv)
    assert lp.exact
    assert all(d == 1 for d in lp.window_determinants())
    assert extract_invariants(lp) == inv


@pytest.mark.parametrize("n,N", [(2, 5), (3, 7), (6, 5)])
def test_roundtrip_with_balanced_frame(n, N):
    inv = generate_field(n, N, np.random.default_rng(N))
    lp = reconstruct(inv, balanced_frame(inv))
    assert extract_invariants(lp) == inv
    # rho_0 differs, so M is conjugated but the invariants agree
    assert exact.det(balanced_frame(inv).tolist()) == 1


def test_perturbed_lifts_rejected():
    inv = generate_field(2, 5, np.random.default_rng(0))
    lp = reconstruct(inv)
    V = lp.lifts.copy()
    V[2] = V[2] * F(11, 10)
    with pytest.raises(NormalizationBroken):
        extract_invariants(LiftedPolygon(2, 5, V, lp.monodromy))
    Vf = lp.to_float().lifts.copy()
    Vf[2] *= 1.001
    with pytest.raises(NormalizationBroken):
        extract_invariants(LiftedPolygon(2, 5, Vf, lp.to_float().monodromy))


def test_mc_matrix_shape():
    inv = InvariantField.exact_from([["1/2", "3"], ["-1", "2/7"], ["0", "1"], ["5", "5"], ["1", "-1"]])
    K = mc_matrix(inv, 1)
    expected = [[0, 0, 1], [1, 0, F(-1)], [0, 1, F(2, 7)]]
    assert K.tolist() == expected
    assert exact.det(K.tolist()) == 1
    K3 = mc_matrix(InvariantField.exact_from([["1", "2", "3"]] * 5), 0)
    assert K3[0, 3] == -1 and list(K3[1:, 3]) == [1, 2, 3]


@given(fields())
def test_monodromy_from_reconstruct(inv):
    rho0 = balanced_frame(inv)
    lp = reconstruct(inv, rho0)
    expected = rho0 @ monodromy_product(inv) @ np.array(exact.inverse(rho0.tolist()), dtype=object)
    assert (lp.monodromy == expected).all()
    assert exact.det(lp.monodromy.tolist()) == 1


@given(fields(dims=[(2, 5), (3, 5), (4, 7)]))
def test_invariants_are_projective(inv):
    lp = reconstruct(inv)
    g = random_sl(inv.n + 1, np.random.default_rng(1), exact_=True)
    assert extract_invariants(lp.act(g)) == inv


def test_projective_invariants_ignore_scale():
    inv = generate_field(3, 7, np.random.default_rng(9))
    lp = reconstruct(inv)
    scales = [F(k + 2, 3) * (-1) ** k for k in range(7)]
    W = np.array([lp.lifts[k] * scales[k] for k in range(7)], dtype=object)
    poly = TwistedPolygon(3, 7, W, lp.monodromy)
    assert projective_invariants(poly) == inv
    U = normalize_up_to_scale(poly)
    dets = U.window_determinants()
    assert len(set(dets)) == 1


def test_random_sl():
    rng = np.random.default_rng(0)
    g = random_sl(4, rng, exact_=True)
    assert exact.det(g.tolist()) == 1
    assert (g @ g.T == identity_like(4, True)).all()
    assert np.linalg.det(random_sl(5, rng)) == pytest.approx(1.0)


def test_relabeled():
    inv = InvariantField.exact_from([[k, k + 1] for k in range(5)])
    assert inv.relabeled(1).row(0) == inv.row(1)
    assert inv.relabeled(-1).row(0) == inv.row(4)
