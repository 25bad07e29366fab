"""
The generalized pentagram map computed from the lifted vertices.

Unshifted indexing: T(x_k) is the intersection of the n hyperplanes
P_{k-s+1}..P_{k+s} (n = 2s) or P_{k-s}..P_{k+s} (n = 2s+1), where P_j
passes through every other vertex around x_j.  Those n hyperplanes meet
in the same line as two spans of alternate lifted vertices, which is what
:func:`reduced_subspaces` returns.

:func:`pentagram_map_geometric` re-indexes so the new V_k is proportional
to rho_k r_k, matching :mod:`pentagram.invariant`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import exact
from .core import (FLOAT_RANK_RTOL, InvariantField, LiftedPolygon,
                   TwistedPolygon, as_float, det, extract_invariants,
                   is_exact_array, lift_and_normalize, projective_angle,
                   projective_invariants)
from .errors import Degenerate, NotTransverse


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Linearly independent vectors, one per row.

    Exact (Fraction) rows keep every downstream computation exact.
    """

    vectors: np.ndarray

    def __post_init__(self):
        V = np.atleast_2d(np.asarray(self.vectors))
        if V.dtype != object:
            V = V.astype(float)
        object.__setattr__(self, "vectors", V)
        if _rank(V) != V.shape[0]:
            raise Degenerate("basis vectors are linearly dependent")

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def exact(self) -> bool:
        return is_exact_array(self.vectors)

    def residual(self, v) -> float:
        """Relative least-squares distance from v to the span."""
        B = as_float(self.vectors).T
        v = as_float(v)
        coef, *_ = np.linalg.lstsq(B, v, rcond=None)
        return float(np.linalg.norm(B @ coef - v) / np.linalg.norm(v))

    def contains(self, v, tol: float = 1e-10) -> bool:
        if self.exact and is_exact_array(v):
            return exact.rank(np.vstack([self.vectors, np.asarray(v)[None, :]]).tolist()) == self.dim
        return self.residual(v) <= tol


def _rank(A, rtol: float = FLOAT_RANK_RTOL) -> int:
    A = np.atleast_2d(A)
    if is_exact_array(A):
        return exact.rank(A.tolist())
    sv = np.linalg.svd(A, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > rtol * sv[0]))


def _unit_rows(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    return A / np.linalg.norm(A, axis=1, keepdims=True)


def _kernel_line(A, rtol: float = FLOAT_RANK_RTOL) -> np.ndarray:
    """A vector spanning ker A; NotTransverse unless the kernel is a line.

    Exact input: fraction-free elimination.  Float input: SVD on
    row-normalized A with a relative rank threshold.
    """
    A = np.atleast_2d(np.asarray(A))
    if is_exact_array(A):
        basis = exact.nullspace(A.tolist())
        if len(basis) != 1:
            raise NotTransverse(f"kernel has dimension {len(basis)}, expected 1")
        return np.array(basis[0], dtype=object)
    A = A.astype(float)
    cols = A.shape[1]
    scale = np.linalg.norm(A, axis=1, keepdims=True)
    scale[scale == 0] = 1
    _, sv, Vt = np.linalg.svd(A / scale)
    rank = int(np.sum(sv > rtol * sv[0])) if sv.size and sv[0] > 0 else 0
    if cols - rank != 1:
        raise NotTransverse(f"kernel has dimension {cols - rank}, expected 1")
    return Vt[-1]


def plane_vertex_indices(k: int, n: int) -> list[int]:
    """Indices of the n vertices spanning the hyperplane P_k."""
    if n < 2:
        raise ValueError("n >= 2 required")
    s = n // 2
    if n % 2 == 0:
        return [k + d for d in range(-2 * s + 1, 2 * s, 2)]
    return [k + d for d in range(-2 * s, 2 * s + 1, 2)]


def plane_indices_for_vertex(k: int, n: int) -> list[int]:
    """Which hyperplanes P_j are intersected to get (unshifted) T(x_k)."""
    s = n // 2
    if n % 2 == 0:
        return list(range(k - s + 1, k + s + 1))
    return list(range(k - s, k + s + 1))


def reduced_offsets(n: int) -> tuple[list[int], list[int]]:
    s = n // 2
    first = list(range(-s, s + 1, 2))
    if n % 2 == 0:
        second = list(range(-s + 1, s + 2, 2))
    else:
        second = list(range(-s - 1, s + 2, 2))
    return first, second


def reduced_subspaces(lp: LiftedPolygon, k: int) -> tuple[SubspaceBasis, SubspaceBasis]:
    """Two spans of alternate lifts whose intersection is the line T(V_k).

    n = 2s:   {V_{k-s}, V_{k-s+2}, ..., V_{k+s}} and {V_{k-s+1}, ..., V_{k+s+1}}
    n = 2s+1: {V_{k-s}, ..., V_{k+s}} and {V_{k-s-1}, V_{k-s+1}, ..., V_{k+s+1}}
    """
    first, second = reduced_offsets(lp.n)
    A = SubspaceBasis(np.array([lp.vertex(k + d) for d in first]))
    B = SubspaceBasis(np.array([lp.vertex(k + d) for d in second]))
    return A, B


def intersect_two_subspaces(A: SubspaceBasis, B: SubspaceBasis) -> np.ndarray:
    """A vector spanning span(A) ∩ span(B), from ker [A^T | -B^T].

    Exact bases give an exact (unnormalized) vector; float bases give a
    unit vector.
    """
    n1 = A.vectors.shape[1]
    if A.dim + B.dim != n1 + 1:
        raise ValueError(f"dimensions {A.dim} + {B.dim} must equal {n1 + 1}")
    if A.exact and B.exact:
        coeffs = _kernel_line(np.hstack([A.vectors.T, -B.vectors.T]))
        v = A.vectors.T @ coeffs[: A.dim]
        if not any(x != 0 for x in v):
            raise NotTransverse("intersection is trivial")
        return v
    # unit rows: the spans, hence the kernel line, are unchanged
    Au, Bu = _unit_rows(as_float(A.vectors)), _unit_rows(as_float(B.vectors))
    coeffs = _kernel_line(np.hstack([Au.T, -Bu.T]))
    v = Au.T @ coeffs[: A.dim]
    if np.linalg.norm(v) == 0:
        raise NotTransverse("intersection is trivial")
    return v / np.linalg.norm(v)


def generalized_cross(vectors) -> np.ndarray:
    """Normal to n vectors in R^{n+1} via cofactor expansion.

    Component i is (-1)^i times the minor with coordinate i deleted, so
    det(w, v_1, ..., v_n) = <normal, w> when the v's are rows.
    """
    W = np.asarray(vectors)
    m = W.shape[1]
    return np.array([(-1) ** i * det(np.delete(W, i, axis=1)) for i in range(m)],
                    dtype=W.dtype)


def hyperplane_normal(lp: LiftedPolygon, j: int) -> np.ndarray:
    vecs = np.array([lp.vertex(i) for i in plane_vertex_indices(j, lp.n)])
    if not lp.exact:
        vecs = _unit_rows(vecs)
    if _rank(vecs) != lp.n:
        raise NotTransverse(f"vertices of P_{j} do not span a hyperplane")
    nv = generalized_cross(vecs)
    return nv if lp.exact else nv / np.linalg.norm(nv)


def hyperplane_intersection_oracle(lp: LiftedPolygon, k: int) -> np.ndarray:
    """Unshifted T(V_k) up to scale, intersecting all n lifted hyperplanes."""
    normals = np.array([hyperplane_normal(lp, j) for j in plane_indices_for_vertex(k, lp.n)])
    return _kernel_line(normals)


def map_shift(n: int) -> int:
    """Index shift putting the new V_k on the line of rho_k r_k.

    For n = 2s that is T(x_{k+s}); for n = 2s+1 it is T(x_{k+s+1}).
    """
    s = n // 2
    return s if n % 2 == 0 else s + 1


def mapped_polygon(lp: LiftedPolygon) -> TwistedPolygon:
    """The image polygon, with unnormalized representatives.

    The construction is linear in the lifts, so the representatives
    satisfy W_{k+N} = M W_k with the same monodromy lift.
    """
    shift = map_shift(lp.n)
    W = np.array([intersect_two_subspaces(*reduced_subspaces(lp, k + shift))
                  for k in range(lp.N)])
    return TwistedPolygon(lp.n, lp.N, W, lp.monodromy)


def pentagram_map_geometric(lp: LiftedPolygon) -> LiftedPolygon:
    """Shifted pentagram map on a lifted polygon, renormalized.

    Exact lifts are intersected exactly; the normalization itself needs
    (n+1)-th roots and is always float.
    """
    return lift_and_normalize(mapped_polygon(lp))


def geometric_map_invariants(lp: LiftedPolygon) -> InvariantField:
    """Invariants of the geometric image of lp.

    Exact lifts stay exact end to end (the invariants do not see the
    global scale the roots would fix); float lifts go through
    :func:`pentagram_map_geometric` and :func:`extract_invariants`.
    """
    if lp.exact:
        return projective_invariants(mapped_polygon(lp))
    return extract_invariants(pentagram_map_geometric(lp))


# ---------------------------------------------------------------------------
# Closed polygons in the plane (no normalization; used for the hexagon check)
# ---------------------------------------------------------------------------

def classical_pentagram(points) -> np.ndarray:
    """T(x)_k = (x_{k-1} x_{k+1}) ∩ (x_k x_{k+2}) on a closed planar polygon.

    ``points`` are homogeneous coordinates (N x 3); lines and intersections
    are cross products.
    """
    P = np.asarray(points, dtype=float)
    N = len(P)
    out = []
    for k in range(N):
        l1 = np.cross(P[(k - 1) % N], P[(k + 1) % N])
        l2 = np.cross(P[k], P[(k + 2) % N])
        x = np.cross(l1, l2)
        if np.linalg.norm(x) <= 1e-14 * np.linalg.norm(l1) * np.linalg.norm(l2):
            raise NotTransverse(f"diagonals at vertex {k} are parallel lines")
        out.append(x / np.linalg.norm(x))
    return np.array(out)


def fit_homography(src, dst) -> np.ndarray:
    """The projective map sending n+2 points in general position to n+2 points.

    Standard frame construction: scale the first n+1 points so they sum to
    the last one, in both source and target, then compose.
    """
    src = np.asarray(src, dtype=float)
    dst = np.asarray(dst, dtype=float)
    m = src.shape[1]
    if src.shape != (m + 1, m) or dst.shape != (m + 1, m):
        raise ValueError(f"need {m + 1} point pairs in R^{m}")

    def frame(P):
        B = P[:m].T
        lam = np.linalg.solve(B, P[m])
        if np.any(np.abs(lam) < 1e-12 * np.max(np.abs(lam))):
            raise Degenerate("points not in general position")
        return B * lam

    return frame(dst) @ np.linalg.inv(frame(src))


def projective_residual(H, src, dst) -> float:
    """Largest angle between H x and the target point, over the pairs given."""
    return max(projective_angle(H @ x, y) for x, y in zip(np.asarray(src), np.asarray(dst)))


HEXAGON_OFFSET = 2  # T^2(P)_{k+2} corresponds to P_k with the labeling above


def hexagon_involution_residual(points) -> float:
    """How far T^2(P) is from being projectively equivalent to a hexagon P.

    The projective map is fitted on the pairs P_k -> T^2(P)_{k+2} for
    k = 0..3 and the residual is the largest angle on k = 4, 5.
    """
    P = np.asarray(points, dtype=float)
    if P.shape != (6, 3):
        raise ValueError("expected a planar hexagon (6 x 3 homogeneous coordinates)")
    Q = np.roll(classical_pentagram(classical_pentagram(P)), -HEXAGON_OFFSET, axis=0)
    H = fit_homography(P[:4], Q[:4])
    return projective_residual(H, P[4:], Q[4:])
