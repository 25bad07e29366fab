from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given

from pentagram import exact, invariant
from pentagram.core import (InvariantField, extract_invariants, lift_and_normalize, mc_matrix,
                            twisted_polygon)
from pentagram.errors import NoRealSolution, NotCoprime, ZeroDenominator
from pentagram.invariant import (companion_apply, cramer_denominator, cramer_denominators,
                                 cramer_numerator, decomposition_residual, f_decomposition,
                                 f_vector, has_real_lambda, lambda_potential, lambda_ratio,
                                 lambda_solve_float, p_vector, pentagram_map_invariants,
                                 r_vector, shift_down, support_pattern_ok)
from pentagram.sampling import closed_polygon_field, generate_field, random_field

from conftest import fields, nondegenerate_fields


def regular_pentagon_field():
    t = 2 * np.pi * np.arange(5) / 5
    pts = np.column_stack([np.cos(t), np.sin(t), np.ones(5)])
    return extract_invariants(lift_and_normalize(twisted_polygon(pts)))


def test_r_vector_patterns():
    x, y = F(2, 3), F(-5)
    inv2 = InvariantField(2, 5, [[x, y]] * 5)
    assert r_vector(inv2, 0) == [1, 0, y]
    p, q, r = F(1), F(2), F(3)
    inv3 = InvariantField(3, 5, [[p, q, r]] * 5)
    assert r_vector(inv3, 0) == [0, p, 0, r]
    a = [F(1), F(2), F(3), F(4)]
    inv4 = InvariantField(4, 7, [a] * 7)
    assert r_vector(inv4, 0) == [1, 0, a[1], 0, a[3]]


@given(fields())
def test_p_plus_r_is_last_column_of_K(inv):
    for k in range(inv.N):
        K = mc_matrix(inv, k)
        assert [x + y for x, y in zip(p_vector(inv, k), r_vector(inv, k))] == list(K[:, inv.n])


@given(fields())
def test_companion_apply_matches_matrix(inv):
    v = r_vector(inv, 1)
    assert companion_apply(inv, 0, v) == list(mc_matrix(inv, 0) @ np.array(v, dtype=object))


@given(fields())
def test_f_vector_against_direct_product(inv):
    assert f_vector(inv, 2, 0) == r_vector(inv, 2)
    for j in (1, 2, 3):
        P = exact.identity(inv.n + 1)
        for t in range(j):
            P = exact.matmul(P, mc_matrix(inv, 2 + t).tolist())
        assert f_vector(inv, 2, j) == exact.matvec(P, r_vector(inv, 2 + j))


def test_f_vectors_of_zero_field_cycle():
    inv = InvariantField.exact_from([[0, 0]] * 5)
    units = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    for j in range(7):
        assert f_vector(inv, 0, j) == units[j % 3]


def test_shift_down():
    assert shift_down([1, 2, 3]) == [0, 1, 2]


def test_regular_pentagon_D_equal_and_fixed():
    inv = regular_pentagon_field()
    D = cramer_denominators(inv)
    assert np.allclose(D, D[0], atol=1e-12)
    mu = lambda_potential(inv)
    assert np.allclose(mu, 1.0)
    assert np.allclose(pentagram_map_invariants(inv).as_array(), inv.as_array(), atol=1e-12)


@given(nondegenerate_fields())
def test_lambda_ratio_consecutive(inv):
    D = cramer_denominators(inv)
    for k in range(inv.N):
        assert lambda_ratio(inv, k, 0) * D[(k + 1) % inv.N] / D[k] == 1


@given(nondegenerate_fields())
def test_lambda_float_consistent_with_ratios(inv):
    lam = lambda_solve_float(inv)
    D = [float(d) for d in cramer_denominators(inv)]
    n, N = inv.n, inv.N
    for k in range(N):
        window = np.prod([lam[(k + j) % N] for j in range(n + 1)])
        assert window * D[k] == pytest.approx(1.0, rel=1e-10)
        for i in range(n + 1):
            ratio = lam[(k + n + 1) % N] / lam[(k + i) % N]
            assert ratio == pytest.approx(float(lambda_ratio(inv, k, i)), rel=1e-10)


@given(nondegenerate_fields(dims=[(3, 5), (3, 7), (5, 7)]))
def test_odd_n_real_lambdas_exist(inv):
    # observed on every sampled field: prod_k D_k > 0 when n is odd
    assert np.prod([np.sign(float(d)) for d in cramer_denominators(inv)]) > 0
    assert has_real_lambda(inv)


def test_no_real_solution_path(monkeypatch):
    inv = generate_field(3, 5, np.random.default_rng(0))
    monkeypatch.setattr(invariant, "cramer_denominators", lambda _: [-1.0, 1.0, 1.0, 1.0, 1.0])
    with pytest.raises(NoRealSolution):
        lambda_solve_float(inv)
    assert not has_real_lambda(inv)


def test_all_D_one_gives_unit_lambdas(monkeypatch):
    inv = generate_field(2, 5, np.random.default_rng(0))
    monkeypatch.setattr(invariant, "cramer_denominators", lambda _: [1.0] * 5)
    np.testing.assert_allclose(lambda_solve_float(inv), 1.0)


def test_zero_denominator():
    inv = InvariantField.exact_from([[0, 0, 0]] * 5)
    assert cramer_denominator(inv, 0) == 0
    with pytest.raises(ZeroDenominator):
        pentagram_map_invariants(inv)
    with pytest.raises(ZeroDenominator):
        lambda_solve_float(inv)


def test_not_coprime():
    inv = InvariantField.exact_from([[1, 2]] * 6)
    with pytest.raises(NotCoprime):
        pentagram_map_invariants(inv)


def test_numerator_column_range():
    inv = generate_field(2, 5, np.random.default_rng(0))
    with pytest.raises(ValueError):
        cramer_numerator(inv, 0, 0)
    with pytest.raises(ValueError):
        cramer_numerator(inv, 0, 3)


def test_pentagon_identity_for_closed_pentagons():
    rng = np.random.default_rng(7)
    for _ in range(5):
        a = closed_polygon_field(5, rng)
        assert pentagram_map_invariants(a) == a.relabeled(-1)


def test_twisted_pentagons_are_not_fixed():
    # a generic twisted pentagon has 10 invariants and no reason to be fixed
    a = generate_field(2, 5, np.random.default_rng(0))
    Ta = pentagram_map_invariants(a)
    assert all(Ta != a.relabeled(m) for m in range(5))


@given(nondegenerate_fields())
def test_map_is_exact_rational(inv):
    Ta = pentagram_map_invariants(inv)
    assert Ta.exact
    # float pipeline agrees
    Tf = pentagram_map_invariants(inv.to_float())
    np.testing.assert_allclose(Tf.as_array(), Ta.to_float().as_array(), rtol=1e-7, atol=1e-7)


@given(fields(dims=[(2, 5), (3, 5), (4, 7), (5, 7), (6, 5)]))
def test_decomposition_reconstructs_f_vectors(inv):
    for k in range(inv.N):
        for j in range(1, inv.n + 2):
            dec = f_decomposition(inv, k, j)
            assert all(x == 0 for x in decomposition_residual(inv, dec))
            assert support_pattern_ok(inv, dec)
            assert dec.hat == (j % 2 == 1)
            assert set(dec.alphas) == set(range(1 - j % 2, j, 2))


def test_decomposition_base_case():
    inv = random_field(3, 5, np.random.default_rng(2))
    dec = f_decomposition(inv, 0, 1)
    assert dec.alphas[0] == r_vector(inv, 1)[-1]
    lhs = f_vector(inv, 0, 1)
    rhs = [dec.alphas[0] * x + y for x, y in zip(r_vector(inv, 0), dec.residual)]
    assert lhs == rhs
    assert dec.residual[-1] == 0


def test_decomposition_zero_field():
    inv = InvariantField.exact_from([[0, 0, 0, 0]] * 7)
    for j in range(1, 5):
        dec = f_decomposition(inv, 0, j)
        assert all(a == 0 for a in dec.alphas.values())
    # F_{k,n+1} cycles back to r_k = e_0
    assert f_decomposition(inv, 0, 5).alphas[0] == 1
    with pytest.raises(ValueError):
        f_decomposition(inv, 0, 0)
