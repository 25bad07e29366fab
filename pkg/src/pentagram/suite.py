"""
The verification suite run by ``pentagram verify``.

Each check returns a row {"check", "n", "N", "samples", "max_drift",
"pass"}; ``max_drift`` is the largest discrepancy seen (0 for exact
agreement).  Reports contain no timings, so a fixed config gives a
byte-identical report.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from .core import (InvariantField, balanced_frame, extract_invariants,
                   projective_angle, projectively_equal, reconstruct)
from .errors import InputError, PentagramError
from .exact import format_fraction, to_fraction
from .geometric import (geometric_map_invariants, hexagon_involution_residual,
                        hyperplane_intersection_oracle, intersect_two_subspaces,
                        reduced_subspaces)
from .integrability import (check_degrees, check_scaling_commutes,
                            conservation_report, zero_curvature_residual)
from .invariant import (decomposition_residual, f_decomposition, has_real_lambda,
                        pentagram_map_invariants, support_pattern_ok)
from .sampling import closed_polygon_field, generate_field, random_convex_polygon

FLOAT_TOL = 1e-8
CURVATURE_TOL = 1e-9
HEXAGON_TOL = 1e-9
DEFAULT_U = (Fraction(1, 2), Fraction(2), Fraction(3))


@dataclass(frozen=True)
class RunConfig:
    n: int
    N: int
    seed: int = 0
    pipeline: str = "exact"
    iterations: int = 20
    u_samples: tuple = field(default=DEFAULT_U)
    out: str | None = None

    def __post_init__(self):
        if self.n < 2:
            raise InputError("n must be at least 2")
        if self.N < 3:
            raise InputError("N must be at least 3")
        if gcd(self.N, self.n + 1) != 1:
            raise InputError(f"gcd(N={self.N}, n+1={self.n + 1}) != 1")
        if self.pipeline not in ("exact", "float"):
            raise InputError("pipeline must be 'exact' or 'float'")
        if self.iterations < 0:
            raise InputError("iterations must be nonnegative")
        if not 0 <= self.seed < 2 ** 64:
            raise InputError("seed must be a 64-bit unsigned integer")
        try:
            us = tuple(to_fraction(u) for u in self.u_samples)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad u sample: {exc}") from exc
        if any(u == 0 for u in us):
            raise InputError("u samples must be nonzero")
        object.__setattr__(self, "u_samples", us)

    @property
    def exact(self) -> bool:
        return self.pipeline == "exact"

    def t_samples(self) -> list[Fraction]:
        """t = u for odd n and t = u^s for n = 2s."""
        s = self.n // 2
        return [u if self.n % 2 else u ** s for u in self.u_samples]


def rng_for(config: RunConfig) -> np.random.Generator:
    return np.random.default_rng(config.seed)


def _row(name, config, samples, drift, ok, **extra) -> dict:
    row = {"check": name, "n": config.n, "N": config.N, "samples": samples,
           "max_drift": None if drift is None else float(drift), "pass": bool(ok)}
    row.update(extra)
    return row


def rel_diff(x: InvariantField, y: InvariantField) -> float:
    """max |x - y| / max(1, |y|) over all entries."""
    X = np.asarray(x.to_float().a, dtype=float)
    Y = np.asarray(y.to_float().a, dtype=float)
    return float(np.max(np.abs(X - Y) / np.maximum(1.0, np.abs(Y))))


def _agree(x: InvariantField, y: InvariantField, exact_: bool) -> tuple[float, bool]:
    if exact_:
        return (0.0, True) if x == y else (x.max_abs_diff(y), False)
    d = rel_diff(x, y)
    return d, d <= FLOAT_TOL


def check_round_trip(config, inv, lp) -> dict:
    got = extract_invariants(lp)
    drift, ok = _agree(got, inv, config.exact)
    return _row("round-trip", config, 1, drift, ok)


def check_two_path(config, inv, lp) -> dict:
    worst, ok = 0.0, True
    for k in range(lp.N):
        a = intersect_two_subspaces(*reduced_subspaces(lp, k))
        b = hyperplane_intersection_oracle(lp, k)
        if config.exact:
            same = projectively_equal(a, b)
            worst = max(worst, 0.0 if same else projective_angle(a, b))
            ok &= same
        else:
            ang = projective_angle(a, b)
            worst = max(worst, ang)
            ok &= ang <= FLOAT_TOL
    return _row("two-path geometric agreement", config, lp.N, worst, ok)


def check_cross_pipeline(config, inv, lp) -> dict:
    drift, ok = _agree(geometric_map_invariants(lp), pentagram_map_invariants(inv), config.exact)
    return _row("cross-pipeline map agreement", config, 1, drift, ok)


def check_decomposition(config, inv, lp) -> dict:
    # an algebraic identity: always checked on the exact field
    worst, ok, count = 0.0, True, 0
    for k in range(inv.N):
        for j in range(1, inv.n + 2):
            dec = f_decomposition(inv, k, j)
            res = decomposition_residual(inv, dec)
            worst = max([worst] + [abs(float(x)) for x in res])
            ok &= all(x == 0 for x in res) and support_pattern_ok(inv, dec)
            count += 1
    return _row("F-decomposition residuals", config, count, worst, ok)


def check_scaling(config, inv, lp) -> dict:
    worst, ok = 0.0, True
    for u in config.u_samples:
        rep = check_scaling_commutes(inv, u)
        worst = max(worst, rep.max_discrepancy)
        ok &= rep.passed
    return _row("scaling commutation", config, len(config.u_samples), worst, ok)


def check_degree_table(config, inv, lp) -> dict:
    fails = 0
    for u in config.u_samples:
        fails += len(check_degrees(inv, u).failures)
    return _row("degree table", config, len(config.u_samples), fails, fails == 0)


def check_zero_curvature(config, inv, lp) -> dict:
    r = zero_curvature_residual(inv)
    return _row("zero-curvature", config, inv.N, r, r < CURVATURE_TOL)


def check_conservation(config, inv, lp) -> dict:
    rep = conservation_report(inv, config.iterations, list(config.u_samples))
    rep["check"] = "spectral conservation"
    rep["iterations"] = config.iterations
    return rep


def check_pentagon(config, inv, lp) -> dict:
    """Closed pentagons: T(a) is a again, with vertex k renamed k + 1."""
    a = closed_polygon_field(5, rng_for(config))
    if not config.exact:
        a = a.to_float()
    drift, ok = _agree(pentagram_map_invariants(a), a.relabeled(-1), config.exact)
    return _row("pentagon identity: T(a) = a", config, 1, drift, ok)


def check_hexagon(config, inv, lp, count: int = 5) -> dict:
    """Convex hexagons (n = 2, N = 6): T^2(P) is projectively equivalent to P."""
    rng = rng_for(config)
    worst = max(hexagon_involution_residual(random_convex_polygon(6, rng)) for _ in range(count))
    return _row("hexagon involution: T^2(P) ~ P", config, count, worst, worst < HEXAGON_TOL)


CHECKS = [check_round_trip, check_two_path, check_cross_pipeline, check_decomposition,
          check_scaling, check_degree_table, check_zero_curvature, check_conservation]

CHECK_NAMES = {
    check_round_trip: "round-trip",
    check_two_path: "two-path geometric agreement",
    check_cross_pipeline: "cross-pipeline map agreement",
    check_decomposition: "F-decomposition residuals",
    check_scaling: "scaling commutation",
    check_degree_table: "degree table",
    check_zero_curvature: "zero-curvature",
    check_conservation: "spectral conservation",
    check_pentagon: "pentagon identity: T(a) = a",
    check_hexagon: "hexagon involution: T^2(P) ~ P",
}


def suite_inputs(config: RunConfig):
    """The exact field for this seed and its (exact) reconstructed lifts.

    The field is drawn so that real lambdas exist, since the Lax check
    needs them.
    """
    inv = generate_field(config.n, config.N, rng_for(config), accept=has_real_lambda)
    lp = reconstruct(inv, balanced_frame(inv))
    return inv, lp


def run_suite(config: RunConfig, echo=None) -> tuple[int, dict]:
    """Run every check in order; exit code 0 iff all pass.

    ``echo`` receives one "PASS/FAIL name (max_drift=...)" line per check.
    """
    inv, lp = suite_inputs(config)
    if not config.exact:
        lp = lp.to_float()
        work = inv.to_float()
    else:
        work = inv
    checks = list(CHECKS)
    if (config.n, config.N) == (2, 5):
        checks.append(check_pentagon)
    if config.n == 2:
        checks.append(check_hexagon)
    rows = []
    for check in checks:
        try:
            target = inv if check is check_decomposition else work
            row = check(config, target, lp)
        except PentagramError as exc:
            row = _row(CHECK_NAMES[check], config, 0, None, False, error=f"{type(exc).__name__}: {exc}")
        rows.append(row)
        if echo is not None:
            drift = "n/a" if row["max_drift"] is None else f"{row['max_drift']:.3g}"
            echo(f"{'PASS' if row['pass'] else 'FAIL'} {row['check']} (max_drift={drift})")
    failed = [r["check"] for r in rows if not r["pass"]]
    report = {
        "n": config.n, "N": config.N, "seed": config.seed, "pipeline": config.pipeline,
        "iterations": config.iterations,
        "u_samples": [format_fraction(u) for u in config.u_samples],
        "t_samples": [format_fraction(t) for t in config.t_samples()],
        "checks": rows,
        "pass": not failed,
        "first_failure": failed[0] if failed else None,
    }
    return (0 if not failed else 1), report
