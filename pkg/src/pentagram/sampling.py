"""
Seeded random fields and polygons.

Everything draws from a ``numpy.random.Generator``, so a seed fixes the
output exactly.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .core import InvariantField, TwistedPolygon, projective_invariants
from .errors import Degenerate, GenerationFailed
from .invariant import is_nondegenerate

MAX_ATTEMPTS = 100


def random_rational(rng: np.random.Generator, bound: int = 9) -> Fraction:
    """p/q with p uniform in [-bound, bound] and q uniform in the same range minus 0."""
    p = int(rng.integers(-bound, bound + 1))
    q = int(rng.integers(-bound, bound))
    if q >= 0:
        q += 1
    return Fraction(p, q)


def random_field(n: int, N: int, rng: np.random.Generator) -> InvariantField:
    return InvariantField(n, N, [[random_rational(rng) for _ in range(n)] for _ in range(N)])


def generate_field(n: int, N: int, rng: np.random.Generator, accept=None,
                   attempts: int = MAX_ATTEMPTS) -> InvariantField:
    """A random rational field with every D_k nonzero.

    ``accept`` is an optional extra predicate (for example, that real
    lambdas exist).
    """
    for _ in range(attempts):
        inv = random_field(n, N, rng)
        if is_nondegenerate(inv) and (accept is None or accept(inv)):
            return inv
    raise GenerationFailed(f"no acceptable field for n={n}, N={N} in {attempts} attempts")


def random_closed_polygon(N: int, rng: np.random.Generator, bound: int = 9) -> TwistedPolygon:
    """N rational points (x, y, 1) in the plane, closed (monodromy I)."""
    pts = [[random_rational(rng, bound), random_rational(rng, bound), Fraction(1)]
           for _ in range(N)]
    eye = np.array([[Fraction(int(i == j)) for j in range(3)] for i in range(3)], dtype=object)
    return TwistedPolygon(2, N, np.array(pts, dtype=object), eye)


def closed_polygon_field(N: int, rng: np.random.Generator,
                         attempts: int = MAX_ATTEMPTS) -> InvariantField:
    """Exact invariants of a random closed planar N-gon (nondegenerate)."""
    for _ in range(attempts):
        try:
            inv = projective_invariants(random_closed_polygon(N, rng))
        except Degenerate:
            continue
        if is_nondegenerate(inv):
            return inv
    raise GenerationFailed(f"no nondegenerate closed {N}-gon in {attempts} attempts")


def random_convex_polygon(N: int, rng: np.random.Generator, min_gap: float = 0.15) -> np.ndarray:
    """Homogeneous coordinates of a convex N-gon inscribed in a random ellipse.

    Vertices sit at sorted random angles with every angular gap at least
    ``min_gap`` (keeps diagonals well separated), then an affine map is
    applied; affine maps preserve convexity.
    """
    if N * min_gap >= 2 * np.pi:
        raise ValueError("min_gap too large for N vertices")
    for _ in range(MAX_ATTEMPTS):
        ang = np.sort(rng.uniform(0, 2 * np.pi, N))
        gaps = np.diff(np.append(ang, ang[0] + 2 * np.pi))
        if gaps.min() >= min_gap:
            break
    else:
        raise GenerationFailed("could not space the vertices")
    xy = np.column_stack([np.cos(ang), np.sin(ang)])
    A = np.array([[1.0, 0.0], [0.0, 1.0]]) + 0.3 * rng.standard_normal((2, 2))
    if abs(np.linalg.det(A)) < 0.2:
        A = np.eye(2)
    xy = xy @ A.T + rng.uniform(-1, 1, 2)
    return np.column_stack([xy, np.ones(N)])
