"""
JSON and CSV exchange formats.

One flat object carries any of the three objects:

    {"n": 2, "N": 5,
     "points": [[...], ...]   # TwistedPolygon, or
     "lifts":  [[...], ...]   # LiftedPolygon
     "monodromy": [[...], ...],
     "a": [[a_0^1, ..., a_0^n], ...]}   # InvariantField

Exact scalars are "p/q" strings, floats are JSON numbers.  An array is
exact only if every entry is a string or an int.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from typing import IO, Iterable

import numpy as np

from .core import InvariantField, LiftedPolygon, TwistedPolygon, identity_like
from .errors import Degenerate, InputError
from .exact import format_fraction, to_fraction


def scalar_to_json(x):
    if isinstance(x, Fraction):
        return format_fraction(x)
    return float(x)


def _matrix_to_json(A) -> list:
    return [[scalar_to_json(x) for x in row] for row in np.asarray(A)]


def _matrix_from_json(rows, what: str) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise InputError(f"{what}: expected a nonempty list of rows")
    flat = [x for r in rows for x in r]
    if any(isinstance(x, bool) or not isinstance(x, (int, float, str)) for x in flat):
        raise InputError(f"{what}: entries must be numbers or 'p/q' strings")
    if len({len(r) for r in rows}) != 1:
        raise InputError(f"{what}: ragged rows")
    try:
        if all(isinstance(x, (int, str)) for x in flat):
            return np.array([[to_fraction(x) for x in r] for r in rows], dtype=object)
        return np.array([[float(x) for x in r] for r in rows], dtype=float)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{what}: {exc}") from exc


def to_dict(*objs) -> dict:
    """Merge the JSON forms of fields and polygons sharing one (n, N)."""
    out: dict = {}
    for obj in objs:
        if isinstance(obj, InvariantField):
            out.update(n=obj.n, N=obj.N, a=[[scalar_to_json(x) for x in row] for row in obj.a])
        elif isinstance(obj, LiftedPolygon):
            out.update(n=obj.n, N=obj.N, lifts=_matrix_to_json(obj.lifts),
                       monodromy=_matrix_to_json(obj.monodromy))
        elif isinstance(obj, TwistedPolygon):
            out.update(n=obj.n, N=obj.N, points=_matrix_to_json(obj.points),
                       monodromy=_matrix_to_json(obj.monodromy))
        else:
            raise TypeError(f"cannot serialize {type(obj).__name__}")
    return out


def _dims(d: dict) -> tuple[int, int]:
    n, N = d.get("n"), d.get("N")
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in (n, N)):
        raise InputError("'n' and 'N' must be integers")
    if n < 2 or N < 2:
        raise InputError("need n >= 2 and N >= 2")
    return n, N


def field_from_dict(d: dict) -> InvariantField:
    n, N = _dims(d)
    if "a" not in d:
        raise InputError("missing key 'a'")
    a = _matrix_from_json(d["a"], "a")
    if a.shape != (N, n):
        raise InputError(f"'a' must be {N} x {n}, got {a.shape[0]} x {a.shape[1]}")
    return InvariantField(n, N, a.tolist())


def polygon_from_dict(d: dict) -> LiftedPolygon | TwistedPolygon:
    """A LiftedPolygon if "lifts" is present, else a TwistedPolygon."""
    n, N = _dims(d)
    key = "lifts" if "lifts" in d else "points"
    if key not in d:
        raise InputError("missing key 'lifts' or 'points'")
    V = _matrix_from_json(d[key], key)
    M = (_matrix_from_json(d["monodromy"], "monodromy") if "monodromy" in d
         else identity_like(n + 1, V.dtype == object))
    if V.dtype != M.dtype:
        V, M = V.astype(float), M.astype(float)
    if V.shape != (N, n + 1) or M.shape != (n + 1, n + 1):
        raise InputError(f"expected {N} x {n + 1} {key} and a {n + 1} x {n + 1} monodromy")
    try:
        if key == "lifts":
            return LiftedPolygon(n, N, V, M)
        return TwistedPolygon(n, N, V, M)
    except (ValueError, Degenerate) as exc:
        raise InputError(str(exc)) from exc


def loads(text: str) -> dict:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    if not isinstance(d, dict):
        raise InputError("expected a JSON object")
    return d


def dumps(d) -> str:
    return json.dumps(d, indent=2) + "\n"


def write_orbit_csv(orbit: Iterable[InvariantField], fh: IO[str]) -> None:
    """Rows (step, k, i, value) for every a_k^i along an orbit."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["step", "k", "i", "value"])
    for step, inv in enumerate(orbit):
        for k in range(inv.N):
            for i, x in enumerate(inv.row(k), start=1):
                w.writerow([step, k, i, scalar_to_json(x)])
