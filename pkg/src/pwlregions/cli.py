"""Command-line interface.

Subcommands
-----------
bounds        closed-form region-count bounds for a layer structure
construct     emit a witness network as JSON (optionally its prediction)
enumerate     exact region enumeration of a network JSON file
oracle        distinct activation patterns on a sampling grid
regions2d     polygon CSV / SVG export for two-input networks
linmap        per-unit affine pieces observed at sample points
identify      equal-output point probe between two regions
verify-all    run the acceptance suite and print its table

Network files use the JSON layout produced by ``construct`` (see
``network.save_network``); pass ``-`` to read from stdin, so commands
pipe:  ``pwlregions construct --kind shi --n 3 | pwlregions enumerate -
--expect 16``.

Exit codes: 0 success, 1 failed expectation or probe, 2 usage or input
error, 3 region cap exceeded.  Layer and unit indices are 0-based.
All randomness derives from ``--seed``; repeated runs with the same
arguments produce byte-identical output.

Values starting with a dash need the ``--flag=value`` spelling
(``--x2=-0.9,0.2``), as usual with getopt-style parsers.
"""

from __future__ import annotations

import argparse
import io
import sys

import numpy as np

from .acceptance import format_table, run_all
from .bounds import bound_report, report_to_dict, report_to_text
from .constructions import (
    ConstructionError,
    build_abs_net,
    build_catalan_layer,
    build_folding_rectifier_net,
    build_maxout_cones,
    build_maxout_parallel,
    build_rank2_maxout_as_rectifier,
    build_shi_layer,
    sawtooth_network,
    sawtooth_with_threshold,
)
from .linmap import IdentificationError, enumerate_unit_pieces, find_identified_pair
from .network import (
    AffineMap,
    NetworkFormatError,
    maxout_structure,
    network_from_dict,
    network_to_dict,
    rectifier_structure,
)
from .regions import (
    FeasibilityConfig,
    RegionBudgetError,
    enumerate_regions,
    oracle_count_by_grid,
    region_polygons_2d,
)
from .reports import render_region_report, write_polygon_csv, write_region_svg
from .serialize import render_json


# --------------------------------------------------------------------------
# small parsers shared by several subcommands

def _widths(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated int list: {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty width list")
    return vals


def _vector(text: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.split(",") if t.strip()])
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {text!r}")


def _parse_box(text: str, n0: int):
    """A box flag is either a halfwidth (``3.0``) or explicit bound pairs
    ``lo,hi;lo,hi`` (a single pair is broadcast over all inputs)."""
    if ";" not in text and "," not in text:
        return ("halfwidth", float(text))
    pairs = []
    for chunk in text.split(";"):
        parts = [float(t) for t in chunk.split(",")]
        if len(parts) != 2 or parts[0] >= parts[1]:
            raise ValueError(f"bad interval {chunk!r} in box spec")
        pairs.append((parts[0], parts[1]))
    if len(pairs) == 1:
        pairs = pairs * n0
    if len(pairs) != n0:
        raise ValueError(f"box spec has {len(pairs)} intervals for {n0} inputs")
    return ("box", tuple(pairs))


def _feasibility(args, n0: int) -> FeasibilityConfig:
    kw = {}
    if getattr(args, "box", None):
        kind, value = _parse_box(args.box, n0)
        kw["box_halfwidth" if kind == "halfwidth" else "box"] = value
    if getattr(args, "workers", None):
        kw["workers"] = args.workers
    if getattr(args, "cap", None):
        kw["region_cap"] = args.cap
    if getattr(args, "exact_rational", False):
        kw["exact_rational"] = True
    return FeasibilityConfig(**kw)


def _load_net(path: str):
    if path == "-":
        import json

        return network_from_dict(json.load(sys.stdin))
    from .network import load_network

    return load_network(path)


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fp:
            fp.write(text)


def _readout_from(args) -> AffineMap | None:
    if not getattr(args, "readout", None):
        return None
    rows = [[float(t) for t in chunk.split(",")] for chunk in args.readout.split(";")]
    matrix = np.array(rows)
    offset = (_vector(args.readout_offset) if getattr(args, "readout_offset", None)
              else np.zeros(matrix.shape[0]))
    return AffineMap(matrix, offset)


def _map_dict(m: AffineMap) -> dict:
    return {"matrix": m.matrix.tolist(), "offset": m.offset.tolist()}


# --------------------------------------------------------------------------
# subcommands

def cmd_bounds(args) -> int:
    if args.maxout_rank is not None:
        structure = maxout_structure(args.n0, args.widths, args.maxout_rank)
    else:
        structure = rectifier_structure(args.n0, args.widths)
    rep = bound_report(structure)
    if args.format == "json":
        _emit(render_json(report_to_dict(rep)), args.output)
    else:
        _emit(report_to_text(rep), args.output)
    return 0


_KINDS = ("sawtooth", "folding", "abs", "parallel", "rank2-rectifier",
          "cones", "shi", "catalan")


def _build(args):
    kind = args.kind
    if kind == "sawtooth":
        if args.theta is not None:
            return sawtooth_with_threshold(args.p, args.theta), None
        return sawtooth_network(args.p, n0=args.n0), None
    if kind == "folding":
        return build_folding_rectifier_net(args.n0, args.widths, seed=args.seed,
                                           refined=not args.unrefined), None
    if kind == "abs":
        return build_abs_net(), None
    if kind == "parallel":
        return build_maxout_parallel(args.n, args.m, args.k), None
    if kind == "rank2-rectifier":
        pair = build_rank2_maxout_as_rectifier(args.n0, args.L, seed=args.seed)
        return pair.rectifier, pair.certificate
    if kind == "cones":
        return build_maxout_cones(args.n0, args.L, args.k, rotation=args.rotation), None
    if kind == "shi":
        return build_shi_layer(args.n), None
    assert kind == "catalan"
    return build_catalan_layer(args.n), None


def cmd_construct(args) -> int:
    try:
        con, certificate = _build(args)
    except (ConstructionError, ValueError) as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return 1
    _emit(render_json(network_to_dict(con.network)), args.output)
    if args.witness_out:
        doc = con.spec.to_dict()
        if certificate is not None:
            doc["certificate"] = certificate
        _emit(render_json(doc), args.witness_out)
    return 0


def cmd_enumerate(args) -> int:
    net = _load_net(args.network)
    rs = enumerate_regions(net, _feasibility(args, net.input_dim))
    if args.format == "json":
        _emit(render_region_report(rs), args.output)
    else:
        _emit(f"regions: {rs.count}\n", args.output)
    if args.expect is not None and rs.count != args.expect:
        print(f"expectation failed: counted {rs.count} regions, expected {args.expect}",
              file=sys.stderr)
        return 1
    return 0


def cmd_oracle(args) -> int:
    net = _load_net(args.network)
    cfg = _feasibility(args, net.input_dim)
    box = cfg.resolved_box(net.input_dim)
    if args.step is not None:
        span = box[0][1] - box[0][0]
        resolution = max(2, round(span / args.step))
    else:
        resolution = args.resolution
    _emit(f"{oracle_count_by_grid(net, box, resolution)}\n", args.output)
    return 0


def cmd_regions2d(args) -> int:
    net = _load_net(args.network)
    rs = enumerate_regions(net, _feasibility(args, net.input_dim))
    polygons = region_polygons_2d(rs)
    if args.csv:
        buf = io.StringIO()
        write_polygon_csv(rs, buf, polygons)
        _emit(buf.getvalue(), args.csv)
    if args.svg:
        buf = io.StringIO()
        write_region_svg(rs, buf, polygons)
        _emit(buf.getvalue(), args.svg)
    print(f"regions: {rs.count}")
    return 0


def cmd_linmap(args) -> int:
    net = _load_net(args.network)
    if args.points == "-":
        samples = np.loadtxt(sys.stdin, delimiter=",", ndmin=2)
    else:
        samples = np.loadtxt(args.points, delimiter=",", ndmin=2)
    pieces = enumerate_unit_pieces(net, args.layer, args.unit, samples,
                                   readout=_readout_from(args), tol=args.tol)
    doc = [{"map": _map_dict(p.map),
            "representative": p.representative.tolist(),
            "activation": p.activation} for p in pieces]
    _emit(render_json(doc), args.output)
    return 0


def cmd_identify(args) -> int:
    net = _load_net(args.network)
    try:
        pair = find_identified_pair(net, args.layer, args.unit, _vector(args.x1),
                                    _vector(args.x2), target_tol=args.target_tol,
                                    readout=_readout_from(args))
    except (IdentificationError, ValueError) as exc:
        print(f"identification failed: {exc}", file=sys.stderr)
        return 1
    doc = {"point": pair.point.tolist(), "same_region": pair.same_region,
           "map1": _map_dict(pair.map1), "map2": _map_dict(pair.map2)}
    _emit(render_json(doc), args.output)
    return 0


def cmd_verify_all(args) -> int:
    results = run_all(seed=args.seed, workers=args.workers)
    _emit(format_table(results), args.output)
    return 0 if all(r.passed for r in results) else 1


# --------------------------------------------------------------------------

def _add_output(p):
    p.add_argument("-o", "--output", metavar="FILE",
                   help="write to FILE instead of stdout")


def _add_enum_flags(p):
    p.add_argument("--box", metavar="SPEC",
                   help="halfwidth B for [-B,B]^n, or 'lo,hi;lo,hi' per input")
    p.add_argument("--workers", type=int, metavar="N",
                   help="subdivide cells across N threads (default 1)")
    p.add_argument("--cap", type=int, metavar="N",
                   help="abort once more than N regions are alive (exit 3)")
    p.add_argument("--exact-rational", action="store_true",
                   help="recheck borderline cells in exact rational arithmetic")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pwlregions",
        description="Exact linear-region analysis for small piecewise-linear networks.",
        epilog="Exit codes: 0 ok, 1 failed expectation, 2 usage/input error, 3 region cap.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser(
        "bounds",
        help="closed-form count bounds for a layer structure",
        description="Closed-form region-count bounds: the shallow binomial-sum "
                    "maximum, the 2^N activation-pattern upper bound, folding "
                    "lower bounds for deep rectifier stacks (plain and "
                    "remainder-refined), and envelope bounds for maxout layers.")
    p.add_argument("--n0", type=int, required=True, help="input dimension")
    p.add_argument("--widths", type=_widths, required=True, metavar="W1,W2,...")
    p.add_argument("--maxout-rank", type=int, default=None, metavar="K",
                   help="treat every unit as a rank-K maxout instead of a rectifier")
    p.add_argument("--format", choices=("json", "text"), default="text")
    _add_output(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser(
        "construct",
        help="emit a witness network as JSON",
        description="Build a witness network whose region count realizes a "
                    "known formula: sawtooth (p+1 pieces; 2p+1 with --theta), "
                    "folding (replicated-brick lower bound), abs (4 quadrants), "
                    "parallel maxout (k^min(n,m)), rank2-rectifier (rectifier "
                    "simulation of a rank-2 maxout stack), cones (k^(L-1+n0) "
                    "lower bound), shi ((n+1)^(n-1)), catalan (n!*Catalan(n)).")
    p.add_argument("--kind", choices=_KINDS, required=True)
    p.add_argument("--p", type=int, default=3, help="sawtooth fold count")
    p.add_argument("--theta", type=float, default=None,
                   help="sawtooth threshold in (0,1): compose a step readout")
    p.add_argument("--n0", type=int, default=1, help="input dimension")
    p.add_argument("--widths", type=_widths, default=(2, 2), metavar="W1,W2,...",
                   help="folding layer widths")
    p.add_argument("--n", type=int, default=3, help="parallel/shi/catalan dimension")
    p.add_argument("--m", type=int, default=2, help="parallel unit count")
    p.add_argument("--k", type=int, default=2, help="maxout rank")
    p.add_argument("--L", type=int, default=2, help="depth for rank2/cones")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--unrefined", action="store_true",
                   help="folding: leave remainder units unused instead of refining")
    p.add_argument("--rotation", type=float, default=1e-2,
                   help="cones: per-layer rotation angle of the gradient fan")
    p.add_argument("--witness-out", metavar="FILE",
                   help="also write the predicted-count record as JSON")
    _add_output(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser(
        "enumerate",
        help="exact region enumeration of a network file",
        description="Enumerate every full-dimensional linear region inside the "
                    "box and print a JSON report (pattern, witness, affine map, "
                    "bounding constraints per region).")
    p.add_argument("network", help="network JSON file, or - for stdin")
    p.add_argument("--expect", type=int, metavar="N",
                   help="exit 1 unless exactly N regions are counted")
    p.add_argument("--format", choices=("json", "text"), default="json")
    _add_enum_flags(p)
    _add_output(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser(
        "oracle",
        help="distinct activation patterns on a sampling grid",
        description="Count distinct activation patterns at one generic sample "
                    "point per grid cell; an independent cross-check of "
                    "enumerate for 1- and 2-input networks.")
    p.add_argument("network", help="network JSON file, or - for stdin")
    p.add_argument("--resolution", type=int, default=400, metavar="R",
                   help="grid cells per axis (default 400)")
    p.add_argument("--step", type=float, default=None,
                   help="grid cell width; overrides --resolution")
    p.add_argument("--box", metavar="SPEC",
                   help="halfwidth B, or 'lo,hi;lo,hi' per input")
    _add_output(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser(
        "regions2d",
        help="polygon CSV / SVG export for two-input networks",
        description="Clip every region of a two-input network to the box and "
                    "export the polygons (CSV vertices and/or an SVG picture "
                    "colored by activation pattern).")
    p.add_argument("network", help="network JSON file, or - for stdin")
    p.add_argument("--csv", metavar="FILE", help="write region_id,vertex_index,x,y rows")
    p.add_argument("--svg", metavar="FILE", help="write an SVG rendering")
    _add_enum_flags(p)
    p.set_defaults(func=cmd_regions2d)

    p = sub.add_parser(
        "linmap",
        help="per-unit affine pieces observed at sample points",
        description="Evaluate one unit's local affine map at every sample "
                    "point (CSV, one point per row) and list the distinct "
                    "pieces with a representative point and activation value.")
    p.add_argument("network", help="network JSON file, or - for stdin")
    p.add_argument("--layer", type=int, required=True, help="0-based layer index")
    p.add_argument("--unit", type=int, required=True, help="0-based unit index")
    p.add_argument("--points", required=True, metavar="CSV",
                   help="sample points, one comma-separated row each; - for stdin")
    p.add_argument("--readout", metavar="ROWS",
                   help="optional linear readout 'c1,c2;d1,d2' applied after the net")
    p.add_argument("--readout-offset", metavar="O1,O2,...")
    p.add_argument("--tol", type=float, default=1e-8,
                   help="coefficient tolerance for merging pieces")
    _add_output(p)
    p.set_defaults(func=cmd_linmap)

    p = sub.add_parser(
        "identify",
        help="equal-output point probe between two regions",
        description="Starting from two points where the tracked unit is "
                    "active, move the second along its local gradient until "
                    "both produce the same value; fails if a region boundary "
                    "intervenes.")
    p.add_argument("network", help="network JSON file, or - for stdin")
    p.add_argument("--layer", type=int, required=True, help="0-based layer index")
    p.add_argument("--unit", type=int, required=True, help="0-based unit index")
    p.add_argument("--x1", required=True, metavar="A,B,...",
                   help="first point (use --x1=-1,2 for negative values)")
    p.add_argument("--x2", required=True, metavar="A,B,...",
                   help="second point, to be adjusted")
    p.add_argument("--target-tol", type=float, default=1e-10)
    p.add_argument("--readout", metavar="ROWS",
                   help="optional linear readout; the unit indexes its rows")
    p.add_argument("--readout-offset", metavar="O1,O2,...")
    _add_output(p)
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser(
        "verify-all",
        help="run the acceptance suite and print its table",
        description="Run every acceptance criterion at the given seed and "
                    "print one PASS/FAIL line each; exits 0 only if all pass.")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    _add_output(p)
    p.set_defaults(func=cmd_verify_all)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RegionBudgetError as exc:
        print(f"region cap exceeded: {exc.partial_count} regions alive at cap "
              f"{exc.cap}", file=sys.stderr)
        return 3
    except NetworkFormatError as exc:
        print(f"bad network file: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
