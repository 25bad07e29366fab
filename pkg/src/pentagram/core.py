"""
Twisted polygons in RP^n, their unit-determinant lifts, and the
Maurer-Cartan invariants a_k^i.

Two scalar pipelines share these types.  Exact objects hold ``Fraction``
entries (numpy ``object`` arrays); float objects hold ``float64``.  A
lifted polygon stores V_0..V_{N-1} and the monodromy lift M; every other
vertex is recovered from V_{k+N} = M V_k.

Indexing convention: ``a[k][i-1]`` is a_k^i, so that

    V_{k+n+1} = a_k^n V_{k+n} + ... + a_k^1 V_{k+1} + (-1)^n V_k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

from . import exact
from .errors import (Degenerate, NormalizationBroken, NotCoprime,
                     SignUnsolvable)

FLOAT_RANK_RTOL = 1e-10
FLOAT_NORMALIZATION_TOL = 1e-9


# ---------------------------------------------------------------------------
# dtype-dispatching helpers
# ---------------------------------------------------------------------------

def is_exact_array(A) -> bool:
    return np.asarray(A).dtype == object


def as_exact(A) -> np.ndarray:
    arr = np.asarray(A, dtype=object)
    return np.vectorize(exact.to_fraction, otypes=[object])(arr) if arr.size else arr


def as_float(A) -> np.ndarray:
    return np.asarray(np.asarray(A, dtype=object).astype(float), dtype=float)


def det(A) -> Fraction | float:
    if is_exact_array(A):
        return exact.det(np.asarray(A).tolist())
    return float(np.linalg.det(np.asarray(A, dtype=float)))


def solve(A, b) -> np.ndarray:
    if is_exact_array(A):
        return np.array(exact.solve(np.asarray(A).tolist(), list(b)), dtype=object)
    A = np.asarray(A, dtype=float)
    if is_rank_deficient(A):
        raise Degenerate("singular frame window")
    return np.linalg.solve(A, np.asarray(b, dtype=float))


def inverse(A) -> np.ndarray:
    if is_exact_array(A):
        return np.array(exact.inverse(np.asarray(A).tolist()), dtype=object)
    return np.linalg.inv(np.asarray(A, dtype=float))


def identity_like(n: int, exact_: bool) -> np.ndarray:
    if exact_:
        return np.array(exact.identity(n), dtype=object)
    return np.eye(n)


def is_rank_deficient(A, rtol: float = FLOAT_RANK_RTOL) -> bool:
    """Relative rank test on column-normalized A (float path only)."""
    A = np.asarray(A, dtype=float)
    norms = np.linalg.norm(A, axis=0)
    if np.any(norms == 0):
        return True
    sv = np.linalg.svd(A / norms, compute_uv=False)
    return sv[-1] <= rtol * sv[0]


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """Homogeneous coordinates; equality is up to a nonzero scalar."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords)
        if not np.any(c != 0):
            raise Degenerate("the zero vector is not a projective point")
        object.__setattr__(self, "coords", _freeze(c.copy()))

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return projectively_equal(self.coords, other.coords)

    __hash__ = None


def projectively_equal(u, v, tol: float = 1e-10) -> bool:
    u, v = np.asarray(u), np.asarray(v)
    if u.shape != v.shape:
        return False
    if is_exact_array(u) and is_exact_array(v):
        # all 2x2 minors vanish
        return all(u[i] * v[j] == u[j] * v[i]
                   for i in range(len(u)) for j in range(i + 1, len(u)))
    return projective_angle(u, v) <= tol


def projective_angle(u, v) -> float:
    """Angle between the lines spanned by u and v, in [0, pi/2]."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    if u @ v < 0:
        v = -v
    # 2*asin(|u-v|/2) is accurate for tiny angles, unlike acos
    return float(2 * np.arcsin(min(1.0, np.linalg.norm(u - v) / 2)))


@dataclass(frozen=True, eq=False)
class TwistedPolygon:
    """N projective points plus a monodromy with x_{k+N} = M x_k.

    ``points`` holds one homogeneous representative per vertex (any scale).
    The monodromy is stored with determinant one; use :func:`twisted_polygon`
    to build one from an arbitrary invertible matrix.
    """

    n: int
    N: int
    points: np.ndarray
    monodromy: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points)
        M = np.asarray(self.monodromy)
        if pts.shape != (self.N, self.n + 1) or M.shape != (self.n + 1, self.n + 1):
            raise ValueError("shape mismatch for TwistedPolygon")
        d = det(M)
        if is_exact_array(M):
            bad = d != 1
        else:
            # relative to the Hadamard bound, so large float matrices pass
            bound = float(np.prod(np.linalg.norm(M.astype(float), axis=0)))
            bad = abs(d - 1) > 1e-12 * max(1.0, bound)
        if bad:
            raise ValueError(f"monodromy must have determinant 1, got {d}")
        object.__setattr__(self, "points", _freeze(pts.copy()))
        object.__setattr__(self, "monodromy", _freeze(M.copy()))

    @property
    def exact(self) -> bool:
        return is_exact_array(self.points)

    def point(self, k: int) -> ProjectivePoint:
        return ProjectivePoint(self.points[k % self.N])

    def to_float(self) -> "TwistedPolygon":
        return TwistedPolygon(self.n, self.N, as_float(self.points), as_float(self.monodromy))


def normalize_monodromy(M, n: int) -> np.ndarray:
    """Scale M to determinant one, preferring a positive factor.

    For n+1 odd the real (n+1)-th root is unique.  For n+1 even there are
    two lifts +-c M; the positive one is returned.  Exact inputs must
    already have determinant one unless the root happens to be rational,
    which is not attempted.
    """
    M = np.asarray(M)
    d = det(M)
    if d == 0:
        raise Degenerate("monodromy is singular")
    if is_exact_array(M):
        if d != 1:
            raise ValueError("exact monodromy must have determinant 1")
        return M
    m = n + 1
    if d < 0 and m % 2 == 0:
        raise SignUnsolvable("det M < 0 has no real SL(n+1) rescaling for n odd")
    c = np.sign(d) * abs(d) ** (-1.0 / m)
    return np.asarray(M, dtype=float) * c


def twisted_polygon(points, monodromy=None) -> TwistedPolygon:
    pts = np.asarray(points)
    N, m = pts.shape
    n = m - 1
    if monodromy is None:
        monodromy = identity_like(m, is_exact_array(pts))
    return TwistedPolygon(n, N, pts, normalize_monodromy(monodromy, n))


@dataclass(frozen=True, eq=False)
class LiftedPolygon:
    """Lifts V_0..V_{N-1} in R^{n+1} with monodromy lift M.

    The unit-determinant invariant is *not* enforced here (see
    :meth:`window_determinants`), so deliberately broken lifts can be
    represented and rejected downstream.
    """

    n: int
    N: int
    lifts: np.ndarray
    monodromy: np.ndarray
    _minv: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        V = np.asarray(self.lifts)
        M = np.asarray(self.monodromy)
        if V.shape != (self.N, self.n + 1) or M.shape != (self.n + 1, self.n + 1):
            raise ValueError("shape mismatch for LiftedPolygon")
        object.__setattr__(self, "lifts", _freeze(V.copy()))
        object.__setattr__(self, "monodromy", _freeze(M.copy()))

    @property
    def exact(self) -> bool:
        return is_exact_array(self.lifts)

    def vertex(self, j: int) -> np.ndarray:
        q, r = divmod(j, self.N)
        v = self.lifts[r]
        if q > 0:
            for _ in range(q):
                v = self.monodromy @ v
        elif q < 0:
            if self._minv is None:
                object.__setattr__(self, "_minv", inverse(self.monodromy))
            for _ in range(-q):
                v = self._minv @ v
        return v

    def frame(self, k: int) -> np.ndarray:
        """rho_k = (V_k, ..., V_{k+n}) as columns."""
        return np.column_stack([self.vertex(k + j) for j in range(self.n + 1)])

    def window_determinants(self) -> list:
        return [det(self.frame(k)) for k in range(self.N)]

    def to_polygon(self) -> TwistedPolygon:
        return TwistedPolygon(self.n, self.N, self.lifts, self.monodromy)

    def to_float(self) -> "LiftedPolygon":
        return LiftedPolygon(self.n, self.N, as_float(self.lifts), as_float(self.monodromy))

    def act(self, g) -> "LiftedPolygon":
        """Diagonal action of g: V_k -> g V_k, M -> g M g^-1."""
        g = np.asarray(g)
        V = (g @ np.asarray(self.lifts).T).T
        M = g @ self.monodromy @ inverse(g)
        return LiftedPolygon(self.n, self.N, V, M)


@dataclass(frozen=True)
class InvariantField:
    """The N-periodic array a_k^i, k in Z/N, i = 1..n."""

    n: int
    N: int
    a: tuple

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.a)
        if len(rows) != self.N or any(len(r) != self.n for r in rows):
            raise ValueError(f"expected {self.N} rows of {self.n} invariants")
        object.__setattr__(self, "a", rows)

    @classmethod
    def exact_from(cls, rows) -> "InvariantField":
        rows = [[exact.to_fraction(x) for x in row] for row in rows]
        return cls(len(rows[0]), len(rows), rows)

    @property
    def exact(self) -> bool:
        return all(isinstance(x, Fraction) for row in self.a for x in row)

    def coeff(self, k: int, i: int):
        """a_k^i with k taken mod N and 1 <= i <= n."""
        return self.a[k % self.N][i - 1]

    def row(self, k: int) -> tuple:
        return self.a[k % self.N]

    def to_float(self) -> "InvariantField":
        return InvariantField(self.n, self.N, [[float(x) for x in row] for row in self.a])

    def relabeled(self, m: int) -> "InvariantField":
        """The field of the same polygon with vertex k renamed k - m (row k is a_{k+m})."""
        return InvariantField(self.n, self.N, [self.row(k + m) for k in range(self.N)])

    def as_array(self) -> np.ndarray:
        return np.array(self.a, dtype=object if self.exact else float)

    def max_abs_diff(self, other: "InvariantField") -> float:
        return float(np.max(np.abs(as_float(self.as_array()) - as_float(other.as_array()))))


# ---------------------------------------------------------------------------
# Cyclic window-sum systems
# ---------------------------------------------------------------------------

def solve_cyclic_window(b: Sequence, width: int, modulus: int | None = None) -> list:
    """Solve sum_{r<width} x_{(k+r) mod N} = b_k for k = 0..N-1.

    The circulant with ``width`` consecutive ones is inverted explicitly:
    consecutive equations give x_{j+width} - x_j = b_{j+1} - b_j, and since
    gcd(N, width) = 1 stepping by ``width`` visits every residue, so every
    x_j is x_0 plus a known offset; equation k = 0 then fixes x_0.

    With ``modulus=2`` the system is solved over Z/2 (used for signs).
    There x_0 is free when ``width`` is even; it is returned as 0 and the
    caller picks the representative.  Raises SignUnsolvable when the
    parity condition fails.
    """
    N = len(b)
    if gcd(N, width) != 1:
        raise NotCoprime(f"gcd(N={N}, {width}) != 1")
    offset = [None] * N
    offset[0] = 0
    j = 0
    for _ in range(N - 1):
        nxt = (j + width) % N
        offset[nxt] = offset[j] + b[(j + 1) % N] - b[j]
        if modulus:
            offset[nxt] %= modulus
        j = nxt
    rest = b[0] - sum(offset[r % N] for r in range(width))
    if modulus:
        rest %= modulus
        if width % modulus == 0:
            if rest != 0:
                raise SignUnsolvable("window-sum system has no solution mod %d" % modulus)
            x0 = 0
        else:
            x0 = (rest * pow(width, -1, modulus)) % modulus
        return [(x0 + o) % modulus for o in offset]
    x0 = rest / width
    return [x0 + o for o in offset]


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def _first_nonzero_sign(v, tol: float = 1e-12) -> int:
    v = np.asarray(v)
    if is_exact_array(v):
        for x in v:
            if x != 0:
                return 1 if x > 0 else -1
        return 0
    scale = np.max(np.abs(v))
    for x in v:
        if abs(x) > tol * scale:
            return 1 if x > 0 else -1
    return 0


def lift_and_normalize(poly: TwistedPolygon) -> LiftedPolygon:
    """Rescale the representatives so every window has determinant one.

    Solves prod_{j=0}^{n} c_{k+j} = 1/det(W_k, ..., W_{k+n}): log
    magnitudes through :func:`solve_cyclic_window`, signs through the same
    system over Z/2.  Float pipeline.  For odd n the overall sign is fixed
    by making the first nonzero coordinate of V_0 positive.
    """
    n, N = poly.n, poly.N
    if gcd(N, n + 1) != 1:
        raise NotCoprime(f"gcd(N={N}, n+1={n + 1}) = {gcd(N, n + 1)}")
    raw = LiftedPolygon(n, N, as_float(poly.points), as_float(poly.monodromy))
    dets = []
    for k in range(N):
        rho = raw.frame(k)
        if is_rank_deficient(rho):
            raise Degenerate(f"window {k} is singular")
        d = det(rho)
        if d == 0:
            raise Degenerate(f"window {k} is singular")
        dets.append(d)
    logs = solve_cyclic_window([-np.log(abs(d)) for d in dets], n + 1)
    signs = solve_cyclic_window([int(d < 0) for d in dets], n + 1, modulus=2)
    c = np.array([(-1.0 if s else 1.0) * np.exp(x) for x, s in zip(logs, signs)])
    V = raw.lifts * c[:, None]
    if n % 2 == 1 and _first_nonzero_sign(V[0]) < 0:
        V = -V
    return LiftedPolygon(n, N, V, raw.monodromy)


def extract_invariants(lp: LiftedPolygon) -> InvariantField:
    """Coordinates of V_{k+n+1} in the frame (V_k, ..., V_{k+n}).

    Checks that the V_k coefficient is (-1)^n and the frame determinants
    are one: exactly, or in floats to 1e-9 relative to max(1, |x|) and to
    the Hadamard bound of the frame respectively.
    """
    return _extract(lp, unit_det=True)


def _extract(lp: LiftedPolygon, unit_det: bool) -> InvariantField:
    n, N = lp.n, lp.N
    sign = (-1) ** n
    rows = []
    first_det = None
    for k in range(N):
        rho = lp.frame(k)
        x = solve(rho, lp.vertex(k + n + 1))
        d = det(rho)
        if lp.exact:
            first_det = d if first_det is None else first_det
            ok = x[0] == sign and d == (1 if unit_det else first_det)
        else:
            # both tolerances scale with the size of the quantities involved
            scale = max(1.0, float(np.prod(np.linalg.norm(rho, axis=0))))
            xscale = max(1.0, float(np.max(np.abs(x))))
            ok = (abs(x[0] - sign) <= FLOAT_NORMALIZATION_TOL * xscale
                  and (not unit_det or abs(d - 1) <= FLOAT_NORMALIZATION_TOL * scale))
        if not ok:
            raise NormalizationBroken(
                f"window {k}: V_k coefficient {x[0]} (expected {sign}), det {d}")
        rows.append(list(x[1:]))
    if lp.exact:
        return InvariantField.exact_from(rows)
    return InvariantField(n, N, [[float(v) for v in r] for r in rows])


def normalize_up_to_scale(poly: TwistedPolygon) -> LiftedPolygon:
    """Exact lifts whose windows all share one determinant.

    Consecutive normalization equations fix the ratios
    c_{k+n+1} / c_k = det_k / det_{k+1}, which are rational; only the
    common factor needs an (n+1)-th root.  That factor cancels from the
    invariants, so this is enough to compute them exactly.
    """
    n, N = poly.n, poly.N
    if gcd(N, n + 1) != 1:
        raise NotCoprime(f"gcd(N={N}, n+1={n + 1}) = {gcd(N, n + 1)}")
    raw = LiftedPolygon(n, N, as_exact(poly.points), as_exact(poly.monodromy))
    dets = [det(raw.frame(k)) for k in range(N)]
    if any(d == 0 for d in dets):
        raise Degenerate("singular window")
    mu = [None] * N
    mu[0] = Fraction(1)
    j = 0
    for _ in range(N - 1):
        nxt = (j + n + 1) % N
        mu[nxt] = mu[j] * dets[j] / dets[(j + 1) % N]
        j = nxt
    U = np.array([raw.lifts[k] * mu[k] for k in range(N)], dtype=object)
    return LiftedPolygon(n, N, U, raw.monodromy)


def projective_invariants(poly: TwistedPolygon) -> InvariantField:
    """The invariants a_k^i of a polygon given by arbitrary representatives.

    Exact for rational input, with no root extraction (see
    :func:`normalize_up_to_scale`).
    """
    return _extract(normalize_up_to_scale(poly), unit_det=False)


def mc_matrix(inv: InvariantField, k: int) -> np.ndarray:
    """Companion-form Maurer-Cartan matrix K_k = rho_k^{-1} rho_{k+1}."""
    n = inv.n
    K = identity_like(n + 1, inv.exact) * 0
    one = Fraction(1) if inv.exact else 1.0
    for i in range(1, n + 1):
        K[i, i - 1] = one
    K[0, n] = one * (-1) ** n
    for i, a in enumerate(inv.row(k), start=1):
        K[i, n] = a
    return K


def monodromy_product(inv: InvariantField) -> np.ndarray:
    """K_0 K_1 ... K_{N-1}."""
    P = mc_matrix(inv, 0)
    for k in range(1, inv.N):
        P = P @ mc_matrix(inv, k)
    return P


def balanced_frame(inv: InvariantField) -> np.ndarray:
    """rho_0 = (K_0 ... K_{h-1})^{-1} with h = N // 2.

    Reconstructing from this frame puts the identity frame halfway round
    the polygon, so neither end accumulates a long product of companion
    matrices.  The float pipeline is noticeably better conditioned on the
    resulting lifts than on those grown from rho_0 = I.
    """
    P = identity_like(inv.n + 1, inv.exact)
    for k in range(inv.N // 2):
        P = P @ mc_matrix(inv, k)
    return inverse(P)


def reconstruct(inv: InvariantField, rho0=None) -> LiftedPolygon:
    """Integrate rho_{k+1} = rho_k K_k from rho_0 (default: identity).

    The result is exact when both the field and rho_0 are exact.
    """
    n, N = inv.n, inv.N
    if rho0 is None:
        rho0 = identity_like(n + 1, inv.exact)
    rho0 = np.asarray(rho0)
    if inv.exact and not is_exact_array(rho0):
        inv = inv.to_float()
    if not inv.exact:
        rho0 = as_float(rho0)
    rho = rho0
    lifts = []
    for k in range(N):
        lifts.append(rho[:, 0])
        rho = rho @ mc_matrix(inv, k)
    # rho_N = M rho_0
    M = rho @ inverse(rho0)
    return LiftedPolygon(n, N, np.array(lifts, dtype=rho0.dtype), M)


def random_sl(n1: int, rng: np.random.Generator, exact_: bool = False) -> np.ndarray:
    """A random well-conditioned element of SL(n1).

    Exact samples are Cayley transforms (I - S)(I + S)^{-1} of rational
    skew-symmetric S: rational, orthogonal, determinant one.
    """
    if exact_:
        S = identity_like(n1, True) * 0
        for i in range(n1):
            for j in range(i + 1, n1):
                q = Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 4)))
                S[i, j], S[j, i] = q, -q
        eye = identity_like(n1, True)
        return (eye - S) @ inverse(eye + S)
    while True:
        g = rng.standard_normal((n1, n1))
        d = np.linalg.det(g)
        if abs(d) > 1e-3:
            if d < 0:
                g[0] = -g[0]
                d = -d
            return g / d ** (1.0 / n1)
