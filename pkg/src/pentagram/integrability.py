"""
Scaling symmetry, Lax representation and conserved quantities.

The scaling acts on the invariants by a_k^i -> u^{deg(a^i)} a_k^i with
integer exponents in the parameter u:

    n = 2s+1:  deg(a^{2l+1}) = 1, deg(a^{2l}) = 0          (u = t)
    n = 2s:    deg(a^{2l+1}) = -s + l, deg(a^{2l}) = l      (u = t^{1/s})

The map commutes with it, so K_k(u) = K_k(scaled a) is a Lax matrix with
spectral parameter u and the characteristic polynomial of
K_0(u) ... K_{N-1}(u) is conserved for every u.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact
from .core import InvariantField, mc_matrix, monodromy_product
from .errors import Degenerate, NoRealSolution, ZeroParameter
from .invariant import (cramer_denominator, cramer_numerator, f_vectors,
                        lambda_solve_float, pentagram_map_invariants)


@dataclass(frozen=True)
class DegreeTable:
    """u-exponents of a^1..a^n; ``degrees[i - 1]`` belongs to a^i."""

    n: int
    s: int
    substitution: str
    degrees: tuple

    def degree(self, i: int) -> int:
        return self.degrees[i - 1]

    def t_degree(self, i: int) -> Fraction:
        """The same exponent measured in t."""
        if self.n % 2:
            return Fraction(self.degree(i))
        return Fraction(self.degree(i), self.s)

    def denominator_degree(self) -> int:
        """u-exponent of D_k: n+1 for odd n, 0 for even n."""
        return self.n + 1 if self.n % 2 else 0

    def numerator_degree(self, i: int) -> int:
        """u-exponent of D_k^i, so that T(a^i) has the degree of a^i."""
        return self.denominator_degree() + self.degree(i)


def scaling_degrees(n: int) -> DegreeTable:
    if n < 2:
        raise ValueError("n >= 2 required")
    s = n // 2
    if n % 2:
        degrees = tuple(1 if i % 2 else 0 for i in range(1, n + 1))
        return DegreeTable(n, s, "u = t", degrees)
    degrees = tuple(-s + (i - 1) // 2 if i % 2 else i // 2 for i in range(1, n + 1))
    return DegreeTable(n, s, f"u = t^(1/{s})" if s > 1 else "u = t", degrees)


def _parameter(inv: InvariantField, u):
    u = exact.to_fraction(u) if inv.exact else float(u)
    if u == 0:
        raise ZeroParameter("scaling parameter must be nonzero")
    return u


def apply_scaling(inv: InvariantField, u) -> InvariantField:
    """a_k^i -> u^{deg(a^i)} a_k^i (exact on exact fields)."""
    u = _parameter(inv, u)
    degs = scaling_degrees(inv.n).degrees
    rows = [[a * u ** d for a, d in zip(inv.row(k), degs)] for k in range(inv.N)]
    return InvariantField(inv.n, inv.N, rows)


@dataclass(frozen=True)
class CommutationReport:
    passed: bool
    max_discrepancy: float
    first_failure: tuple | None  # (k, i, T(scaled a), scaled T(a))


def check_scaling_commutes(inv: InvariantField, u, rtol: float = 1e-8) -> CommutationReport:
    """Compare T(scale_u(a)) with scale_u(T(a)) entry by entry.

    On exact fields the comparison is equality.  On float fields the
    discrepancy is |x - y| / max(1, |y|) and must stay below ``rtol``.
    """
    lhs = pentagram_map_invariants(apply_scaling(inv, u))
    rhs = apply_scaling(pentagram_map_invariants(inv), u)
    worst = 0.0
    first = None
    for k in range(inv.N):
        for i, (x, y) in enumerate(zip(lhs.row(k), rhs.row(k)), start=1):
            diff = abs(float(x - y))
            if not inv.exact:
                diff /= max(1.0, abs(y))
            worst = max(worst, diff)
            bad = x != y if inv.exact else diff > rtol
            if bad and first is None:
                first = (k, i, x, y)
    return CommutationReport(first is None, worst, first)


@dataclass(frozen=True)
class DegreeReport:
    passed: bool
    failures: tuple  # ("D", k) or ("D^i", k, i)


def check_degrees(inv: InvariantField, u, rtol: float = 1e-8) -> DegreeReport:
    """D_k(scale_u a) = u^{d(D)} D_k(a) and likewise for every D_k^i.

    Exact fields are compared with equality, float fields to ``rtol``
    relative to max(1, |rhs|).
    """
    u = _parameter(inv, u)
    table = scaling_degrees(inv.n)
    scaled = apply_scaling(inv, u)

    def same(x, y):
        if inv.exact:
            return x == y
        return abs(x - y) <= rtol * max(1.0, abs(y))

    failures = []
    for k in range(inv.N):
        fs, gs = f_vectors(inv, k, inv.n + 2), f_vectors(scaled, k, inv.n + 2)
        d0 = cramer_denominator(inv, k, fs)
        if not same(cramer_denominator(scaled, k, gs), u ** table.denominator_degree() * d0):
            failures.append(("D", k))
        for i in range(1, inv.n + 1):
            lhs = cramer_numerator(scaled, k, i, gs)
            if not same(lhs, u ** table.numerator_degree(i) * cramer_numerator(inv, k, i, fs)):
                failures.append(("D^i", k, i))
    return DegreeReport(not failures, tuple(failures))


# ---------------------------------------------------------------------------
# Lax representation
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LaxFrame:
    """K_k and N_k = rho_k^{-1} T(rho_k), whose columns are lambda_{k+j} F_{k+j}."""

    k: int
    K: np.ndarray
    Nmat: np.ndarray


def lax_frames(inv: InvariantField, k: int, lam=None) -> LaxFrame:
    """Float Lax pair at vertex k; raises NoRealSolution if no real lambda exists."""
    if lam is None:
        lam = lambda_solve_float(inv)
    n, N = inv.n, inv.N
    fs = f_vectors(inv, k, n + 1)
    cols = [lam[(k + j) % N] * np.array(fs[j], dtype=float) for j in range(n + 1)]
    return LaxFrame(k, mc_matrix(inv.to_float(), k), np.column_stack(cols))


def zero_curvature_residual(inv: InvariantField) -> float:
    """max_k || T(K_k) - N_k^{-1} K_k N_{k+1} ||_inf (float pipeline)."""
    lam = lambda_solve_float(inv)
    Ta = pentagram_map_invariants(inv).to_float()
    frames = [lax_frames(inv, k, lam) for k in range(inv.N + 1)]
    worst = 0.0
    for k in range(inv.N):
        rhs = np.linalg.solve(frames[k].Nmat, frames[k].K @ frames[k + 1].Nmat)
        worst = max(worst, float(np.max(np.abs(mc_matrix(Ta, k) - rhs))))
    return worst


def scaled_mc_matrix(inv: InvariantField, k: int, u) -> np.ndarray:
    """K_k(u): the Maurer-Cartan matrix of the scaled invariants."""
    return mc_matrix(apply_scaling(inv, u), k)


def spectral_invariants(inv: InvariantField, u) -> list:
    """Coefficients of det(x - K_0(u) ... K_{N-1}(u)) below the leading 1."""
    scaled = apply_scaling(inv, u)
    if inv.exact:
        return exact.charpoly_of_product(mc_matrix(scaled, k).tolist() for k in range(inv.N))[1:]
    P = monodromy_product(scaled)
    return [float(c) for c in np.poly(P.astype(float))[1:]]


def conservation_report(inv: InvariantField, iterations: int, u_samples,
                        rtol: float = 1e-8) -> dict:
    """Iterate T and track the spectral invariants at every u sample.

    Exact fields must show zero drift.  Float drift is measured as
    |c - c_0| / max(1, |c_0|) and must stay below ``rtol``.  A degenerate
    step ends the orbit and is reported as a failure.
    """
    report = {"check": "spectral conservation", "n": inv.n, "N": inv.N,
              "samples": len(u_samples), "max_drift": 0.0, "pass": True}
    base = [spectral_invariants(inv, u) for u in u_samples]
    current = inv
    drift = 0
    for step in range(iterations):
        try:
            current = pentagram_map_invariants(current)
        except (Degenerate, NoRealSolution) as exc:
            report.update({"pass": False, "aborted_at": step, "error": str(exc)})
            break
        for u, b in zip(u_samples, base):
            now = spectral_invariants(current, u)
            if inv.exact:
                drift = max([drift] + [abs(x - y) for x, y in zip(now, b)])
            else:
                drift = max([drift] + [abs(x - y) / max(1.0, abs(y)) for x, y in zip(now, b)])
    report["max_drift"] = float(drift)
    if report["pass"]:
        report["pass"] = drift == 0 if inv.exact else drift < rtol
    return report
