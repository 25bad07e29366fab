"""
The pentagram map written directly on the invariants a_k^i.

With the shifted convention T(V_k) = lambda_k rho_k r_k the new frame is
rho_k N_k, where N_k has columns lambda_{k+j} F_{k+j}, and the new
invariants solve

    N_k ((-1)^n, T(a_k^1), ..., T(a_k^n))^T = lambda_{k+n+1} F_{k+n+1}.

Cramer's rule turns that into

    T(a_k^i) = (lambda_{k+n+1} / lambda_{k+i}) * D_k^i / D_k

and the lambda ratios are rational functions of the D's, so on exact
input the whole map is exact.

All functions accept exact (Fraction) or float fields; the arithmetic is
whatever the entries support.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from . import exact
from .core import InvariantField, solve_cyclic_window
from .errors import NoRealSolution, NotCoprime, SignUnsolvable, ZeroDenominator


def _zero(inv: InvariantField):
    return Fraction(0) if inv.exact else 0.0


def _det_columns(inv: InvariantField, cols) -> Fraction | float:
    if inv.exact:
        return exact.det(exact.columns_to_matrix(cols))
    return float(np.linalg.det(np.column_stack(cols)))


def r_vector(inv: InvariantField, k: int) -> list:
    """(1, 0, a^2, 0, ..., a^{2s}) for n = 2s; (0, a^1, 0, ..., a^{2s+1}) for n = 2s+1."""
    n = inv.n
    row = inv.row(k)
    zero = _zero(inv)
    v = [zero] * (n + 1)
    if n % 2 == 0:
        v[0] = zero + 1
        for i in range(2, n + 1, 2):
            v[i] = row[i - 1]
    else:
        for i in range(1, n + 1, 2):
            v[i] = row[i - 1]
    return v


def p_vector(inv: InvariantField, k: int) -> list:
    """The complement of r_k: p_k + r_k is the last column of K_k."""
    n = inv.n
    row = inv.row(k)
    zero = _zero(inv)
    v = [zero] * (n + 1)
    if n % 2 == 0:
        for i in range(1, n, 2):
            v[i] = row[i - 1]
    else:
        v[0] = zero - 1
        for i in range(2, n, 2):
            v[i] = row[i - 1]
    return v


def shift_down(v) -> list:
    """[v]^1: entries moved down once, zero on top, last entry dropped."""
    return [v[0] * 0] + list(v[:-1])


def companion_apply(inv: InvariantField, k: int, v) -> list:
    """K_k v without forming K_k: v_n * (last column) + [v]^1."""
    n = inv.n
    last = v[n]
    out = shift_down(v)
    out[0] = out[0] + (-1) ** n * last
    for i, a in enumerate(inv.row(k), start=1):
        out[i] = out[i] + a * last
    return out


def f_vector(inv: InvariantField, k: int, j: int) -> list:
    """F_{k+j} = K_k K_{k+1} ... K_{k+j-1} r_{k+j} (origin k)."""
    if j < 0:
        raise ValueError("offset must be nonnegative")
    v = r_vector(inv, k + j)
    for t in range(j - 1, -1, -1):
        v = companion_apply(inv, k + t, v)
    return v


def f_vectors(inv: InvariantField, k: int, count: int) -> list[list]:
    """[F_k, F_{k+1}, ..., F_{k+count-1}], all with origin k."""
    return [f_vector(inv, k, j) for j in range(count)]


def cramer_denominator(inv: InvariantField, k: int, _fs=None):
    """D_k = det(F_k, F_{k+1}, ..., F_{k+n}), with F_k = r_k."""
    fs = _fs or f_vectors(inv, k, inv.n + 1)
    return _det_columns(inv, fs[: inv.n + 1])


def cramer_numerator(inv: InvariantField, k: int, i: int, _fs=None):
    """D_k^i: column i of D_k replaced by F_{k+n+1} (1 <= i <= n)."""
    n = inv.n
    if not 1 <= i <= n:
        raise ValueError(f"column index {i} outside 1..{n}")
    fs = _fs or f_vectors(inv, k, n + 2)
    cols = list(fs[: n + 1])
    cols[i] = fs[n + 1]
    return _det_columns(inv, cols)


def cramer_denominators(inv: InvariantField) -> list:
    return [cramer_denominator(inv, k) for k in range(inv.N)]


def is_nondegenerate(inv: InvariantField) -> bool:
    return all(d != 0 for d in cramer_denominators(inv))


def _check_coprime(inv: InvariantField):
    if gcd(inv.N, inv.n + 1) != 1:
        raise NotCoprime(f"gcd(N={inv.N}, n+1={inv.n + 1}) != 1")


def lambda_potential(inv: InvariantField, dens=None) -> list:
    """lambda_j / lambda_0 for j = 0..N-1, as exact products of D-ratios.

    Consecutive normalization equations give
    lambda_{j+n+1} = (D_j / D_{j+1}) lambda_j; stepping by n+1 reaches every
    residue because gcd(N, n+1) = 1.
    """
    _check_coprime(inv)
    N, m = inv.N, inv.n + 1
    D = dens if dens is not None else cramer_denominators(inv)
    if any(d == 0 for d in D):
        raise ZeroDenominator("some D_k vanishes")
    mu = [None] * N
    mu[0] = D[0] / D[0]
    j = 0
    for _ in range(N - 1):
        nxt = (j + m) % N
        mu[nxt] = mu[j] * D[j] / D[(j + 1) % N]
        j = nxt
    return mu


def lambda_ratio(inv: InvariantField, k: int, i: int, _mu=None):
    """lambda_{k+n+1} / lambda_{k+i}."""
    mu = _mu or lambda_potential(inv)
    N = inv.N
    return mu[(k + inv.n + 1) % N] / mu[(k + i) % N]


def lambda_solve_float(inv: InvariantField) -> np.ndarray:
    """Real lambda_k with prod_{r=0}^{n} lambda_{k+r} D_k = 1.

    eta = ln|lambda| solves the cyclic window system with right-hand side
    -ln|D_k|; signs solve the same system over Z/2.  For odd n the global
    sign is free and lambda_0 > 0 is chosen; if the sign system is
    inconsistent there is no real solution.
    """
    _check_coprime(inv)
    D = [float(d) for d in cramer_denominators(inv)]
    if any(d == 0 for d in D):
        raise ZeroDenominator("some D_k vanishes")
    eta = solve_cyclic_window([-np.log(abs(d)) for d in D], inv.n + 1)
    try:
        signs = solve_cyclic_window([int(d < 0) for d in D], inv.n + 1, modulus=2)
    except SignUnsolvable as exc:
        raise NoRealSolution("prod_k sign(D_k) < 0 for odd n") from exc
    return np.array([(-1.0 if s else 1.0) * np.exp(e) for e, s in zip(eta, signs)])


def has_real_lambda(inv: InvariantField) -> bool:
    try:
        lambda_solve_float(inv)
    except (NoRealSolution, ZeroDenominator):
        return False
    return True


def pentagram_map_invariants(inv: InvariantField) -> InvariantField:
    """T(a_k^i) = (lambda_{k+n+1}/lambda_{k+i}) D_k^i / D_k for all k, i."""
    _check_coprime(inv)
    n, N = inv.n, inv.N
    fss = [f_vectors(inv, k, n + 2) for k in range(N)]
    dens = [cramer_denominator(inv, k, fs) for k, fs in enumerate(fss)]
    mu = lambda_potential(inv, dens)
    rows = []
    for k in range(N):
        row = []
        for i in range(1, n + 1):
            num = cramer_numerator(inv, k, i, fss[k])
            row.append(lambda_ratio(inv, k, i, mu) * num / dens[k])
        rows.append(row)
    return InvariantField(n, N, rows)


def iterate_map(inv: InvariantField, steps: int) -> list[InvariantField]:
    """[a, T(a), ..., T^steps(a)]."""
    orbit = [inv]
    for _ in range(steps):
        orbit.append(pentagram_map_invariants(orbit[-1]))
    return orbit


# ---------------------------------------------------------------------------
# Decomposition of F-vectors into lower F's plus a residual
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Decomposition:
    """F_{k+j} = sum_i alphas[i] F_{k+i} + residual.

    For odd j the sum runs over even i < j and the residual is a hat
    vector (last entry zero, support inside that of p_k); for even j it
    runs over odd i < j and the residual has the support of r_k.
    """

    k: int
    j: int
    alphas: dict
    residual: tuple

    @property
    def hat(self) -> bool:
        return self.j % 2 == 1


def f_decomposition(inv: InvariantField, k: int, j: int) -> Decomposition:
    """Build the decomposition by the shift recursions.

    j odd:  alpha_0 = (shifted G_{j-1})_last,  alpha_i = shifted alpha_{i-1},
            hat G_j = alpha_0 p_k + [shifted G_{j-1}]^1
    j even: G_j = [shifted hat G_{j-1}]^1,  alpha_i = shifted alpha_{i-1}
    where "shifted" means the same object computed at origin k+1, and the
    recursion starts from G_0 = r.
    """
    if j < 1:
        raise ValueError("decomposition is defined for j >= 1")
    return _decompose(inv, k, j)


def _decompose(inv: InvariantField, k: int, j: int) -> Decomposition:
    if j == 0:
        return Decomposition(k, 0, {}, tuple(r_vector(inv, k)))
    prev = _decompose(inv, k + 1, j - 1)
    shifted = list(prev.residual)
    alphas = {i + 1: a for i, a in prev.alphas.items()}
    if j % 2 == 1:
        a0 = shifted[-1]
        alphas[0] = a0
        p = p_vector(inv, k)
        residual = [a0 * x + y for x, y in zip(p, shift_down(shifted))]
    else:
        residual = shift_down(shifted)
    return Decomposition(k, j, dict(sorted(alphas.items())), tuple(residual))


def decomposition_residual(inv: InvariantField, dec: Decomposition) -> list:
    """F_{k+j} - (sum alpha_i F_{k+i} + residual); zero when the recursion is right."""
    fs = f_vectors(inv, dec.k, dec.j + 1)
    total = list(dec.residual)
    for i, a in dec.alphas.items():
        total = [t + a * f for t, f in zip(total, fs[i])]
    return [f - t for f, t in zip(fs[dec.j], total)]


def support_pattern_ok(inv: InvariantField, dec: Decomposition) -> bool:
    """Hat residuals vanish off the p-slots (last entry included); others off the r-slots."""
    n = inv.n
    # slots where p (resp. r) may carry data
    p_slots = set(range(0, n + 1, 2)) if n % 2 else set(range(1, n + 1, 2))
    r_slots = set(range(n + 1)) - p_slots
    allowed = p_slots if dec.hat else r_slots
    if dec.hat and dec.residual[n] != 0:
        return False
    return all(x == 0 for idx, x in enumerate(dec.residual) if idx not in allowed)
