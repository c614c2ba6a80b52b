"""Deterministic report rendering: region JSON, polygon CSV, and SVG."""

from __future__ import annotations

import hashlib
from typing import IO

import numpy as np

from .regions import RegionSet, region_polygons_2d
from .network import pattern_code
from .serialize import render_json


def _box_field(box) -> float | list:
    """The report's box field: a single halfwidth when the box is the
    symmetric cube [-B, B]^n, otherwise the explicit bound pairs."""
    halfwidths = {(-lo, hi) for lo, hi in box}
    if len(halfwidths) == 1:
        b = next(iter(halfwidths))
        if b[0] == b[1]:
            return float(b[0])
    return [[float(lo), float(hi)] for lo, hi in box]


def region_report(rs: RegionSet) -> dict:
    regions = []
    for r in rs.regions:
        regions.append({
            "pattern": pattern_code(r.pattern),
            "witness": [float(v) for v in r.witness],
            "affine": {
                "matrix": [[float(v) for v in row] for row in r.affine.matrix],
                "offset": [float(v) for v in r.affine.offset],
            },
            "constraints": [
                [float(v) for v in row] + [float(off)]
                for row, off in zip(r.normals, r.offsets)
            ],
        })
    return {"count": rs.count, "box": _box_field(rs.box), "regions": regions}


def render_region_report(rs: RegionSet) -> str:
    return render_json(region_report(rs))


def write_polygon_csv(rs: RegionSet, out: IO[str], polygons=None) -> None:
    """Rows region_id,vertex_index,x,y for every polygon vertex."""
    if polygons is None:
        polygons = region_polygons_2d(rs)
    out.write("region_id,vertex_index,x,y\n")
    for rid, poly in enumerate(polygons):
        for vi, (x, y) in enumerate(poly):
            out.write(f"{rid},{vi},{format(float(x), '.17g')},{format(float(y), '.17g')}\n")


def _pattern_hue(code: str) -> int:
    digest = hashlib.md5(code.encode("ascii")).hexdigest()
    return int(digest[:8], 16) % 360


def region_svg(rs: RegionSet, polygons=None, size: int = 480) -> str:
    """Standalone SVG, one path per region, hue hashed from the pattern
    code so colors are stable across runs and platforms."""
    if polygons is None:
        polygons = region_polygons_2d(rs)
    (x0, x1), (y0, y1) = rs.box
    span = max(x1 - x0, y1 - y0)
    scale = (size - 20) / span

    def sx(v):
        return 10 + (v - x0) * scale

    def sy(v):
        return size - 10 - (v - y0) * scale   # flip: y grows upward

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
    ]
    for r, poly in zip(rs.regions, polygons):
        if len(poly) < 3:
            continue
        code = pattern_code(r.pattern)
        pts = " ".join(f"{sx(px):.4f},{sy(py):.4f}" for px, py in poly)
        parts.append(
            f'<polygon points="{pts}" fill="hsl({_pattern_hue(code)},70%,78%)" '
            f'stroke="#333333" stroke-width="0.8"/>'
        )
    for r in rs.regions:
        parts.append(
            f'<circle cx="{sx(r.witness[0]):.4f}" cy="{sy(r.witness[1]):.4f}" '
            f'r="2" fill="#111111"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_region_svg(rs: RegionSet, out: IO[str], polygons=None, size: int = 480) -> None:
    out.write(region_svg(rs, polygons, size))
