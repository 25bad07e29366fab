"""Exception hierarchy.  Every degeneracy is a typed error; nothing is perturbed."""


class PentagramError(Exception):
    pass


class NotCoprime(PentagramError, ValueError):
    """gcd(N, n+1) != 1, so unit-determinant lifts are not unique."""


class Degenerate(PentagramError):
    """A frame window, subspace basis or linear system is singular."""


class SignUnsolvable(PentagramError):
    """The sign part of the lift normalization has no solution over {+1, -1}."""


class NormalizationBroken(PentagramError):
    """Lifts do not satisfy det(V_k, ..., V_{k+n}) = 1."""


class NotTransverse(Degenerate):
    """A subspace intersection is not exactly one-dimensional."""


NoIntersection = NotTransverse


class ZeroDenominator(Degenerate):
    """Some Cramer denominator D_k vanishes."""


class NoRealSolution(PentagramError):
    """The lambda normalization has no real solution (n odd only)."""


class ZeroParameter(PentagramError, ValueError):
    """The scaling parameter u is zero."""


class GenerationFailed(PentagramError):
    """Random sampling exhausted its retry budget."""


class InputError(PentagramError, ValueError):
    """Malformed JSON, configuration or command-line input."""
