"""Exact enumeration of the linear regions of a small network.

The enumerator walks the stack layer by layer.  Every region is an open
polyhedron of the input box, carried as strict inequalities
``normal . x < offset`` (rows unit-normalized), together with the affine
map the processed sub-network applies on it, the activation pattern that
produced it, and an interior witness point with a clearance radius
certifying full dimension.

Each rectifier unit folds back to a single input-space hyperplane per
region; each rank-k maxout unit yields k candidate children, one per
branch, cut out by the k-1 strict dominance inequalities.  A child
survives iff a max-slack feasibility program finds an interior point
whose smallest normalized slack exceeds ``feas_tol``; the optimizer of
that program doubles as the stored witness.

Counts depend on the box: cells that only exist beyond it are not seen.
Constructed witnesses whose predicted counts are exact therefore carry
the box on which exactness holds.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from .network import (
    AffineMap,
    Network,
    forward,
    pattern_code,
    pattern_matrix,
)

Box = tuple[tuple[float, float], ...]


class RegionBudgetError(RuntimeError):
    """Region cap exceeded; ``partial_count`` holds the count so far."""

    def __init__(self, partial_count: int, cap: int):
        super().__init__(
            f"region budget exhausted: more than {cap} regions ({partial_count} held)"
        )
        self.partial_count = partial_count
        self.cap = cap


class EnumerationError(RuntimeError):
    """Numerical failure while subdividing; carries the region's pattern."""


@dataclass(frozen=True)
class FeasibilityConfig:
    """Knobs of the subdivision.

    box_halfwidth  enumeration happens inside [-B, B]^n0 unless ``box``
                   overrides it with explicit per-dimension bounds
    feas_tol       smallest normalized slack that counts as full-dimensional
    region_cap     hard limit on live regions
    exact_rational re-check borderline feasibility outcomes (|t*| within
                   10x feas_tol) with exact rational elimination
    workers        regions are subdivided in parallel when > 1; results
                   are merged deterministically regardless
    """

    box_halfwidth: float = 1e3
    feas_tol: float = 1e-7
    region_cap: int = 10**6
    exact_rational: bool = False
    box: Box | None = None
    workers: int = 1

    def resolved_box(self, n0: int) -> Box:
        if self.box is not None:
            box = tuple((float(lo), float(hi)) for lo, hi in self.box)
            if len(box) != n0:
                raise ValueError(f"box has {len(box)} dimensions, network has {n0}")
            for lo, hi in box:
                if not lo < hi:
                    raise ValueError("box bounds must satisfy lo < hi")
            return box
        B = float(self.box_halfwidth)
        if not B > 0:
            raise ValueError("box_halfwidth must be positive")
        return tuple((-B, B) for _ in range(n0))


@dataclass(frozen=True, eq=False)
class Region:
    """One open cell: {x : normals @ x < offsets}, with its certificate."""

    normals: np.ndarray        # (m, n0), unit rows
    offsets: np.ndarray        # (m,)
    pattern: tuple             # per-layer tuples of unit states
    affine: AffineMap          # input -> activations of the last processed layer
    witness: np.ndarray
    clearance: float

    def contains(self, x: np.ndarray, slack: float = 0.0) -> bool:
        return bool((self.normals @ np.asarray(x, float) <= self.offsets - slack).all())


@dataclass(frozen=True)
class RegionSet:
    regions: tuple[Region, ...]
    box: Box
    layers_processed: int

    @property
    def count(self) -> int:
        return len(self.regions)


# ---------------------------------------------------------------------------
# feasibility: float LP with optional exact rational backstop

_ZERO_ROW = 1e-12


def _max_slack_lp(normals: np.ndarray, offsets: np.ndarray):
    """maximize t s.t. normals@x + t <= offsets.  Rows are unit-normalized,
    so t* is the Chebyshev-style clearance radius (negative if empty)."""
    m, n = normals.shape
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A = np.hstack([normals, np.ones((m, 1))])
    res = linprog(c, A_ub=A, b_ub=offsets, bounds=[(None, None)] * (n + 1), method="highs")
    if res.status != 0:
        return None, None
    return res.x[:n].copy(), float(res.x[n])


def _float_to_fraction_rows(normals, offsets):
    rows = [[Fraction(float(v)) for v in row] for row in normals]
    offs = [Fraction(float(v)) for v in offsets]
    return rows, offs


def exact_strictly_feasible(normals, offsets) -> tuple[bool, list | None]:
    """Exact strict-feasibility of {x : normals@x < offsets} over the
    rationals, by Fourier-Motzkin elimination.

    Floats convert to Fractions exactly, so the answer is exact for any
    float input.  Returns (feasible, rational witness or None).  Intended
    for the handful of borderline systems the LP cannot call; row counts
    blow up combinatorially, so keep systems small.
    """
    rows, offs = _float_to_fraction_rows(np.atleast_2d(normals), np.atleast_1d(offsets))
    n = len(rows[0]) if rows else 0
    stack = []  # per eliminated variable: (lowers, uppers) as (coef-free bound rows)

    cur = [(list(r), o) for r, o in zip(rows, offs)]
    for var in range(n - 1, -1, -1):
        lowers, uppers, keep = [], [], []
        for r, o in cur:
            a = r[var]
            rest, off = r[:var], o
            if a == 0:
                keep.append((rest, off))
            elif a > 0:
                uppers.append(([x / a for x in rest], off / a))   # x_var < off - rest.x
            else:
                lowers.append(([x / a for x in rest], off / a))   # x_var > off - rest.x
        stack.append((lowers, uppers))
        new = keep
        for lr, lo in lowers:
            for ur, uo in uppers:
                # lower below upper: (lo - lr.x) < (uo - ur.x)
                new.append(([uv - lv for lv, uv in zip(lr, ur)], uo - lo))
        cur = new
    for r, o in cur:
        if not o > 0:
            return False, None
    # back-substitute a rational interior point
    point: list[Fraction] = []
    for var, (lowers, uppers) in zip(range(n), reversed(stack)):
        lo_vals = [o - sum(c * x for c, x in zip(r, point)) for r, o in lowers]
        up_vals = [o - sum(c * x for c, x in zip(r, point)) for r, o in uppers]
        if lo_vals and up_vals:
            val = (max(lo_vals) + min(up_vals)) / 2
        elif up_vals:
            val = min(up_vals) - 1
        elif lo_vals:
            val = max(lo_vals) + 1
        else:
            val = Fraction(0)
        point.append(val)
    return True, point


def _feasible_child(normals, offsets, cfg: FeasibilityConfig):
    """Interior witness + clearance for the strict system, or None."""
    x, t = _max_slack_lp(normals, offsets)
    if x is None:
        raise EnumerationError("feasibility program failed to solve")
    if cfg.exact_rational and abs(t) <= 10 * cfg.feas_tol:
        ok, point = exact_strictly_feasible(normals, offsets)
        if not ok:
            return None
        if t > 0:
            return x, t
        w = np.array([float(v) for v in point])
        slack = float(np.min(offsets - normals @ w))
        if slack <= 0:  # rational point too close once rounded; fall back
            return None
        return w, slack
    if t > cfg.feas_tol:
        return x, t
    return None


# ---------------------------------------------------------------------------
# subdivision

class _Cell:
    __slots__ = ("normals", "offsets", "pattern", "A", "c", "witness", "clearance")

    def __init__(self, normals, offsets, pattern, A, c, witness, clearance):
        self.normals = normals      # list of 1-d arrays (unit rows)
        self.offsets = offsets      # list of floats
        self.pattern = pattern      # list of per-layer tuples
        self.A = A                  # input -> current activations
        self.c = c
        self.witness = witness
        self.clearance = clearance


def _try_extend(cell: _Cell, new_rows, cfg) -> tuple | None:
    """Feasibility of cell + new strict rows.  Returns (witness, clearance)
    reusing the parent witness when it already sits strictly inside."""
    if new_rows:
        slacks = [off - row @ cell.witness for row, off in new_rows]
        worst = min(slacks)
        if worst > cfg.feas_tol:
            return cell.witness, min(cell.clearance, worst)
        normals = np.vstack([np.array(cell.normals), [r for r, _ in new_rows]])
        offsets = np.concatenate([cell.offsets, [o for _, o in new_rows]])
    else:
        return cell.witness, cell.clearance
    return _feasible_child(normals, offsets, cfg)


def _rectifier_children(cell: _Cell, g, d, cfg):
    """Children of one rectifier unit on one cell."""
    norm = float(np.linalg.norm(g))
    if norm < _ZERO_ROW * max(1.0, abs(d)):
        # Unit is constant on the whole input space of this cell; the sign
        # of the bias decides, exact zero counting as inactive.
        yield (1 if d > 0 else 0, [], None)
        return
    # active: g.x + d > 0  <=>  (-g).x < d
    yield (1, [(-g / norm, d / norm)], None)
    # inactive: g.x + d < 0
    yield (0, [(g / norm, -d / norm)], None)


def _maxout_children(cell: _Cell, G, D, cfg):
    k = G.shape[0]
    for t in range(k):
        rows = []
        dominated = False
        for s in range(k):
            if s == t:
                continue
            row = G[s] - G[t]
            off = D[t] - D[s]
            norm = float(np.linalg.norm(row))
            if norm < _ZERO_ROW * max(1.0, abs(off)):
                if off > 0:
                    continue  # branch t beats s everywhere
                if off < 0:
                    dominated = True
                    break
                # identical branches: the lower index wins the tie
                if s < t:
                    dominated = True
                    break
                continue
            rows.append((row / norm, off / norm))
        if not dominated:
            yield (t, rows, None)


def _subdivide_cell(cell: _Cell, layer, cfg) -> list[_Cell]:
    """Push one cell through every unit of one layer."""
    cells = [cell]
    k = layer.activation.rank
    W, b = layer.weights, layer.bias
    for j in range(layer.width):
        nxt = []
        for c in cells:
            if k == 1:
                g = W[j] @ c.A
                d = float(W[j] @ c.c + b[j])
                candidates = _rectifier_children(c, g, d, cfg)
            else:
                rows = slice(j * k, (j + 1) * k)
                G = W[rows] @ c.A
                D = W[rows] @ c.c + b[rows]
                candidates = _maxout_children(c, G, D, cfg)
            for state, new_rows, _ in candidates:
                got = _try_extend(c, new_rows, cfg)
                if got is None:
                    continue
                witness, clearance = got
                child = _Cell(
                    c.normals + [r for r, _ in new_rows],
                    c.offsets + [o for _, o in new_rows],
                    c.pattern + [state],
                    c.A,
                    c.c,
                    witness,
                    clearance,
                )
                nxt.append(child)
        cells = nxt
        if not cells:
            raise EnumerationError(
                f"no feasible child while splitting unit {j}; numerical collapse"
            )
    # fix the layer's pattern and update the affine map
    done = []
    for c in cells:
        states = c.pattern[-layer.width:]
        base = c.pattern[:-layer.width]
        if k == 1:
            sel = np.array(states, dtype=float)[:, None]
            Weff, beff = W * sel, b * sel[:, 0]
        else:
            pick = [j * k + t for j, t in enumerate(states)]
            Weff, beff = W[pick], b[pick]
        done.append(
            _Cell(
                c.normals,
                c.offsets,
                base + [tuple(states)],
                Weff @ c.A,
                Weff @ c.c + beff,
                c.witness,
                c.clearance,
            )
        )
    return done


def enumerate_regions(net: Network, cfg: FeasibilityConfig | None = None) -> RegionSet:
    """All full-dimensional activation cells of ``net`` inside the box,
    sorted by pattern.  See the module docstring for the algorithm."""
    cfg = cfg or FeasibilityConfig()
    n0 = net.input_dim
    if n0 > 4:
        raise ValueError("enumeration supports input dimension <= 4")
    box = cfg.resolved_box(n0)

    normals, offsets = [], []
    for i, (lo, hi) in enumerate(box):
        e = np.zeros(n0)
        e[i] = 1.0
        normals.append(e.copy())
        offsets.append(hi)
        e2 = np.zeros(n0)
        e2[i] = -1.0
        normals.append(e2)
        offsets.append(-lo)
    center = np.array([(lo + hi) / 2 for lo, hi in box])
    clearance = min((hi - lo) / 2 for lo, hi in box)
    root = _Cell(normals, offsets, [], np.eye(n0), np.zeros(n0), center, clearance)

    cells = [root]
    for layer in net.layers:
        if cfg.workers > 1 and len(cells) > 1:
            with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                chunks = list(pool.map(lambda c: _subdivide_cell(c, layer, cfg), cells))
        else:
            chunks = [_subdivide_cell(c, layer, cfg) for c in cells]
        cells = [child for chunk in chunks for child in chunk]
        if len(cells) > cfg.region_cap:
            raise RegionBudgetError(len(cells), cfg.region_cap)

    regions = []
    for c in cells:
        pattern = tuple(c.pattern)
        aff = AffineMap(c.A, c.c)
        drift = float(np.max(np.abs(aff(c.witness) - forward(net, c.witness)[-1])))
        if drift > 1e-9:
            raise EnumerationError(
                f"affine map drifted ({drift:.2e}) on region {pattern_code(pattern)}"
            )
        regions.append(
            Region(
                normals=np.array(c.normals),
                offsets=np.array(c.offsets),
                pattern=pattern,
                affine=aff,
                witness=np.asarray(c.witness, float),
                clearance=float(c.clearance),
            )
        )
    regions.sort(key=lambda r: r.pattern)
    return RegionSet(tuple(regions), box, net.depth)


def count_regions(net: Network, cfg: FeasibilityConfig | None = None) -> int:
    """Number of full-dimensional activation cells inside the box."""
    return enumerate_regions(net, cfg).count


# ---------------------------------------------------------------------------
# independent grid oracle

# Fractional position of the sample inside each grid cell.  A half-step
# (cell midpoints) looks natural but lands exactly on breakpoints whenever
# the resolution is odd and the box is symmetric -- e.g. 401 cells on
# [-1, 1] puts a midpoint at 0.  The golden-ratio offset keeps samples off
# every rational breakpoint lattice, so boundary tie-breaking never leaks
# into the observed pattern count.
_GRID_OFFSET = (5.0 ** 0.5 - 1.0) / 2.0


def oracle_count_by_grid(net: Network, box: Box, resolution: int) -> int:
    """Distinct activation patterns on a regular grid over ``box``.

    One sample per grid cell, placed at a fixed generic offset inside the
    cell (see ``_GRID_OFFSET``) so the probe stays off region boundaries,
    where tie-breaking would manufacture measure-zero patterns.  The value
    is a lower bound on the cell count over the same box, with equality
    once the grid is fine enough that every cell catches a point.  Only
    implemented for 1 or 2 input dimensions.
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    if net.input_dim > 2:
        raise ValueError("grid oracle supports input dimension <= 2")
    if len(box) != net.input_dim:
        raise ValueError("box dimension mismatch")
    axes = []
    for lo, hi in box:
        step = (hi - lo) / resolution
        axes.append(lo + step * (np.arange(resolution) + _GRID_OFFSET))
    if net.input_dim == 1:
        X = axes[0][:, None]
    else:
        g0, g1 = np.meshgrid(axes[0], axes[1], indexing="ij")
        X = np.column_stack([g0.ravel(), g1.ravel()])
    pats = pattern_matrix(net, X)
    return int(np.unique(pats, axis=0).shape[0])


# ---------------------------------------------------------------------------
# general position

def check_general_position(hyperplanes, dim: int, tol: float = 1e-8) -> bool:
    """True iff the hyperplanes ``normal . x = offset`` are in general
    position in R^dim: every <= dim of the (normalized) normals are
    linearly independent, and no dim+1 of the hyperplanes share a point."""
    normals = []
    offsets = []
    for normal, offset in hyperplanes:
        v = np.asarray(normal, dtype=float)
        n = np.linalg.norm(v)
        if n < tol:
            return False
        normals.append(v / n)
        offsets.append(float(offset) / n)
    N = np.array(normals)
    m = len(normals)
    for size in range(2, min(dim, m) + 1):
        for sub in itertools.combinations(range(m), size):
            s = np.linalg.svd(N[list(sub)], compute_uv=False)
            if s[-1] < tol:
                return False
    if m >= dim + 1:
        for sub in itertools.combinations(range(m), dim + 1):
            A = N[list(sub)]
            b = np.array([offsets[i] for i in sub])
            ra = np.linalg.matrix_rank(A, tol=tol)
            rab = np.linalg.matrix_rank(np.column_stack([A, b]), tol=tol)
            if rab == ra:  # consistent: a common point exists
                return False
    return True


# ---------------------------------------------------------------------------
# 2-d geometry

def region_polygons_2d(rs: RegionSet, tol: float = 1e-9) -> list[np.ndarray]:
    """Vertex lists of every region of a 2-d enumeration.

    Vertices are the feasible pairwise intersections of the bounding
    lines, deduplicated and ordered counterclockwise around the witness.
    Aligned 1:1 with ``rs.regions``.
    """
    if rs.regions and rs.regions[0].normals.shape[1] != 2:
        raise ValueError("polygon extraction is 2-d only")
    polys = []
    for region in rs.regions:
        N, o = region.normals, region.offsets
        m = len(o)
        pts = []
        for i in range(m):
            for j in range(i + 1, m):
                A = np.array([N[i], N[j]])
                det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
                if abs(det) < 1e-12:
                    continue
                v = np.linalg.solve(A, np.array([o[i], o[j]]))
                if (N @ v <= o + tol).all():
                    pts.append(v)
        uniq: list[np.ndarray] = []
        for v in pts:
            if all(np.max(np.abs(v - u)) > 1e-7 for u in uniq):
                uniq.append(v)
        if len(uniq) < 3:
            polys.append(np.zeros((0, 2)))
            continue
        arr = np.array(uniq)
        ang = np.arctan2(arr[:, 1] - region.witness[1], arr[:, 0] - region.witness[0])
        polys.append(arr[np.argsort(ang)])
    return polys


def polygon_area(vertices: np.ndarray) -> float:
    if len(vertices) < 3:
        return 0.0
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))
