"""
Command-line driver.

    pentagram generate  --n 3 --N 5 --seed 7 [--out field.json]
    pentagram invariants polygon.json
    pentagram map field.json | polygon.json
    pentagram iterate field.json --iters 10 --out orbit.csv
    pentagram verify --n 4 --N 7 --seed 1 --pipeline exact
    pentagram conserved field.json --iters 20 --u 1/2 --u 3

Commands taking an input file fall back to a generated field when none
is given.  Exit codes: 0 success, 1 a verification failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import serialize
from .core import (InvariantField, LiftedPolygon, balanced_frame, extract_invariants,
                   lift_and_normalize, projective_invariants, reconstruct)
from .errors import InputError, PentagramError
from .exact import format_fraction, to_fraction
from .geometric import mapped_polygon
from .integrability import conservation_report
from .invariant import iterate_map, pentagram_map_invariants
from .sampling import generate_field
from .suite import DEFAULT_U, RunConfig, rng_for, run_suite


def _rational(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational 'p/q': {text!r}") from exc


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=2, help="dimension of RP^n")
    common.add_argument("--N", type=int, default=5, help="number of vertices")
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--pipeline", choices=("exact", "float"), default="exact")
    common.add_argument("--iters", type=int, default=20, help="iterations of the map")
    common.add_argument("--u", type=_rational, action="append",
                        help="scaling parameter p/q (repeatable)")
    common.add_argument("--out", help="output file (default: stdout)")

    parser = argparse.ArgumentParser(prog="pentagram", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("generate", parents=[common], help="random field and its polygon")
    for name, text in [("invariants", "invariants of a polygon"),
                       ("map", "apply the pentagram map to a field or polygon"),
                       ("iterate", "orbit of a field (JSON, or CSV if --out ends in .csv)"),
                       ("conserved", "spectral conservation report")]:
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("input", nargs="?", help="JSON file, '-' for stdin")
    sub.add_parser("verify", parents=[common], help="run the full verification suite")
    return parser


def _config(args) -> RunConfig:
    return RunConfig(args.n, args.N, args.seed, args.pipeline, args.iters,
                     tuple(args.u) if args.u else DEFAULT_U, args.out)


def _generated(config: RunConfig) -> tuple[InvariantField, LiftedPolygon]:
    inv = generate_field(config.n, config.N, rng_for(config))
    lp = reconstruct(inv, balanced_frame(inv))
    if not config.exact:
        return inv.to_float(), lp.to_float()
    return inv, lp


def _read(args) -> dict | None:
    if args.input is None:
        return None
    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input) as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc}") from exc
    return serialize.loads(text)


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _field_input(args) -> InvariantField:
    d = _read(args)
    if d is None:
        return _generated(_config(args))[0]
    inv = serialize.field_from_dict(d)
    return inv.to_float() if args.pipeline == "float" else inv


def _polygon_invariants(poly, pipeline: str) -> InvariantField:
    if pipeline == "float":
        poly = poly.to_float()
    if isinstance(poly, LiftedPolygon):
        return extract_invariants(poly)
    if poly.exact:
        return projective_invariants(poly)
    return extract_invariants(lift_and_normalize(poly))


def cmd_generate(args) -> int:
    inv, lp = _generated(_config(args))
    _emit(args, serialize.dumps(serialize.to_dict(inv, lp)))
    return 0


def cmd_invariants(args) -> int:
    d = _read(args)
    poly = _generated(_config(args))[1] if d is None else serialize.polygon_from_dict(d)
    _emit(args, serialize.dumps(serialize.to_dict(_polygon_invariants(poly, args.pipeline))))
    return 0


def cmd_map(args) -> int:
    d = _read(args)
    if d is None or "a" in d:
        inv = _generated(_config(args))[0] if d is None else serialize.field_from_dict(d)
        if args.pipeline == "float":
            inv = inv.to_float()
        _emit(args, serialize.dumps(serialize.to_dict(pentagram_map_invariants(inv))))
        return 0
    poly = serialize.polygon_from_dict(d)
    if not isinstance(poly, LiftedPolygon):
        # the construction is linear in the lifts, so any representatives do
        poly = LiftedPolygon(poly.n, poly.N, poly.points, poly.monodromy)
    if args.pipeline == "float":
        poly = poly.to_float()
    image = mapped_polygon(poly)
    out = serialize.to_dict(image, _polygon_invariants(image, args.pipeline))
    _emit(args, serialize.dumps(out))
    return 0


def cmd_iterate(args) -> int:
    if args.iters < 0:
        raise InputError("--iters must be nonnegative")
    orbit = iterate_map(_field_input(args), args.iters)
    if args.out and args.out.endswith(".csv"):
        with open(args.out, "w", newline="") as fh:
            serialize.write_orbit_csv(orbit, fh)
        return 0
    first = orbit[0]
    payload = {"n": first.n, "N": first.N,
               "orbit": [serialize.to_dict(inv)["a"] for inv in orbit]}
    _emit(args, serialize.dumps(payload))
    return 0


def cmd_verify(args) -> int:
    config = _config(args)
    code, report = run_suite(config, echo=lambda line: print(line, file=sys.stderr))
    _emit(args, serialize.dumps(report))
    return code


def cmd_conserved(args) -> int:
    inv = _field_input(args)
    config = RunConfig(inv.n, inv.N, args.seed, "exact" if inv.exact else "float", args.iters,
                       tuple(args.u) if args.u else DEFAULT_U)
    report = conservation_report(inv, config.iterations, list(config.u_samples))
    report["u_samples"] = [format_fraction(u) for u in config.u_samples]
    report["t_samples"] = [format_fraction(t) for t in config.t_samples()]
    _emit(args, serialize.dumps(report))
    return 0 if report["pass"] else 1


COMMANDS = {"generate": cmd_generate, "invariants": cmd_invariants, "map": cmd_map,
            "iterate": cmd_iterate, "verify": cmd_verify, "conserved": cmd_conserved}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (PentagramError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
