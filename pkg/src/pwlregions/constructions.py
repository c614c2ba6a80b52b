"""Builders for the witness networks whose region counts attain the bounds.

Every builder returns a :class:`Construction`: the network itself, a
:class:`WitnessSpec` carrying the predicted region count (with the formula
it instantiates and whether the prediction is exact or a lower bound), an
optional linear readout absorbed out of the network, and, for folding
nets, the raw per-layer stages so the absorbed form can be checked against
an explicit reference evaluation.

Counting convention: predictions marked ``exact`` hold over the spec's
``count_box`` (falling back to the default enumeration box when None).
Folding constructions replicate computation only on the folded domain, so
their exactness box is the product of the first layer's fold intervals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import (
    deep_maxout_lower,
    deep_rectifier_lower,
    deep_rectifier_lower_refined,
    fold_counts,
    shallow_max_regions,
)
from .network import (
    ACT_RECTIFIER,
    AffineMap,
    Layer,
    Network,
    forward,
    maxout,
    pattern_affine,
    pattern_at,
    rectifier_structure,
)
from .regions import Box, FeasibilityConfig, check_general_position, enumerate_regions


class ConstructionError(RuntimeError):
    """A builder could not realize (or verify) its predicted count."""


@dataclass(frozen=True)
class WitnessSpec:
    """What a constructed network is predicted to do, and on which box."""

    kind: str
    params: dict
    predicted_count: int
    provenance: str          # name of the counting formula instantiated
    exact: bool              # True: count == predicted on count_box; False: >=
    count_box: Box | None    # None: any default-sized box works

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": self.params,
            "predicted_count": self.predicted_count,
            "provenance": self.provenance,
            "exact": self.exact,
            "count_box": None if self.count_box is None else [list(b) for b in self.count_box],
        }


@dataclass(frozen=True)
class Construction:
    network: Network
    spec: WitnessSpec
    readout: AffineMap | None = None
    # raw (weights, bias, mixing) triples before absorption; None elsewhere
    stages: tuple | None = None

    def value(self, x) -> np.ndarray:
        """The function the construction realizes (readout applied if any)."""
        acts = forward(self.network, np.asarray(x, float))[-1]
        return self.readout(acts) if self.readout is not None else acts


# ---------------------------------------------------------------------------
# sawtooth folding groups

def mixing_coefficients(p: int) -> np.ndarray:
    """Alternating signs (+1, -1, ...) summing a group's activations."""
    return np.array([(-1.0) ** t for t in range(p)])


def sawtooth_rows(p: int, direction: np.ndarray, scale: float = 1.0):
    """Weight rows and biases of a p-piece fold along ``direction``.

    Unit 1 is max{0, s·d.x}; unit t >= 2 is max{0, 2s·d.x - 2(t-1)}, which
    places the fold's breakpoints at d.x = (t-1)/s for t in [p].
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    d = np.asarray(direction, float)
    rows = [scale * d]
    biases = [0.0]
    for t in range(2, p + 1):
        rows.append(2.0 * scale * d)
        biases.append(-2.0 * (t - 1))
    return np.array(rows), np.array(biases)


def build_sawtooth_group(p: int, coordinate: int = 0, n0: int = 1):
    """One fold group as a Layer on coordinate ``coordinate`` of R^n0,
    plus the mixing row that turns its activations into the folded value."""
    if not 0 <= coordinate < n0:
        raise ValueError("coordinate out of range")
    e = np.zeros(n0)
    e[coordinate] = 1.0
    rows, biases = sawtooth_rows(p, e)
    return Layer(rows, biases, ACT_RECTIFIER), mixing_coefficients(p)


def sawtooth_value(x: float, p: int) -> float:
    """Scalar folded value: alternating sum of the group's unit responses."""
    total = max(0.0, x)
    for t in range(2, p + 1):
        total += (-1.0) ** (t - 1) * max(0.0, 2.0 * x - 2.0 * (t - 1))
    return total


def sawtooth_network(p: int, n0: int = 1, coordinate: int = 0) -> Construction:
    """Single fold group with its mixing row as the readout.

    The group alone has p + 1 activation cells on any box containing the
    breakpoints 0..p-1: the p fold pieces plus the constant tail x < 0.
    """
    layer, mix = build_sawtooth_group(p, coordinate, n0)
    spec = WitnessSpec(
        kind="SawtoothGroup",
        params={"p": p, "n0": n0, "coordinate": coordinate},
        predicted_count=p + 1,
        provenance="fold pieces p plus the constant tail",
        exact=True,
        count_box=tuple(
            (-1.0, float(p) + 1.0) if i == coordinate else (-1.0, 1.0) for i in range(n0)
        ),
    )
    return Construction(Network(n0, (layer,)), spec,
                        readout=AffineMap(mix[None, :], np.zeros(1)))


def sawtooth_with_threshold(p: int, theta: float) -> Construction:
    """Fold group followed by one rectifier unit max{0, folded - theta}.

    For 0 < theta < 1 the threshold crosses once inside every fold piece,
    giving 2p + 1 cells on any box containing the breakpoints."""
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie strictly between 0 and 1")
    layer, mix = build_sawtooth_group(p, 0, 1)
    second = Layer(mix[None, :], np.array([-float(theta)]), ACT_RECTIFIER)
    # one new breakpoint per fold piece, plus the group's own p breaks
    spec = WitnessSpec(
        kind="SawtoothGroup",
        params={"p": p, "theta": float(theta)},
        predicted_count=2 * p + 1,
        provenance="p fold breaks + p threshold crossings + 1",
        exact=True,
        count_box=None,
    )
    return Construction(Network(1, (layer, second)), spec)


# ---------------------------------------------------------------------------
# deep rectifier folding witness

def _draw_cube_hyperplanes(n0: int, count: int, rng: np.random.Generator):
    """Normals/offsets of ``count`` hyperplanes meant to be in general
    position with every arrangement cell meeting the open unit cube."""
    center = np.full(n0, 0.5)
    if n0 == 1:
        offs = np.array([
            (j + 1.0) / (count + 1.0) + 0.3 * (rng.random() - 0.5) / (count + 1.0)
            for j in range(count)
        ])
        return np.ones((count, 1)), offs
    if n0 == 2:
        normals, offsets = [], []
        for j in range(count):
            theta = math.pi * (j + 0.5 + 0.2 * (rng.random() - 0.5)) / count
            normal = np.array([math.cos(theta), math.sin(theta)])
            phi = 2.0 * math.pi * (j + 0.3 * rng.random()) / count
            through = center + 0.08 * np.array([math.cos(phi), math.sin(phi)])
            normals.append(normal)
            offsets.append(float(normal @ through))
        return np.array(normals), np.array(offsets)
    normals = rng.normal(size=(count, n0))
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    through = center + 0.1 * (rng.random(size=(count, n0)) - 0.5)
    offsets = np.einsum("ij,ij->i", normals, through)
    return normals, offsets


def _verified_cube_arrangement(n0: int, count: int, seed: int, attempts: int = 50):
    """Draw until the arrangement is in general position and all of its
    sum-of-binomials cells intersect the open unit cube."""
    want = shallow_max_regions(n0, count)
    cube = tuple((0.0, 1.0) for _ in range(n0))
    for attempt in range(attempts):
        rng = np.random.default_rng([seed, attempt, count, n0])
        normals, offsets = _draw_cube_hyperplanes(n0, count, rng)
        pairs = [(normals[j], offsets[j]) for j in range(count)]
        if not check_general_position(pairs, n0):
            continue
        probe = Network(n0, (Layer(normals, -offsets, ACT_RECTIFIER),))
        got = enumerate_regions(probe, FeasibilityConfig(box=cube)).count
        if got == want:
            return normals, offsets
    raise ConstructionError(
        f"could not place {count} hyperplanes with all {want} cells in the cube"
    )


def build_folding_rectifier_net(
    n0: int, widths, seed: int = 0, refined: bool = True
) -> Construction:
    """Deep rectifier witness: layers 1..L-1 fold each input coordinate,
    the last layer cuts the folded cube with a general-position arrangement.

    Every full-dimensional brick of the folded domain replays the last
    layer's arrangement, so the region count over the replication box
    (the product of the first layer's fold intervals) equals the product
    of all fold counts times the arrangement's cell count — exactly the
    closed-form lower bound the construction witnesses.
    """
    widths = tuple(int(w) for w in widths)
    L = len(widths)
    if L < 1 or n0 < 1:
        raise ValueError("need at least one layer and one input dimension")
    for w in widths[:-1]:
        if w < n0:
            raise ConstructionError(
                f"hidden width {w} below input dimension {n0}; folding needs one group per coordinate"
            )

    layers = []
    stages = []
    mixing_prev = np.eye(n0)       # folded coords as a map on previous activations
    first_folds = [1] * n0
    all_folds = []
    for li, w in enumerate(widths[:-1]):
        folds = fold_counts(n0, w, refined=refined)
        if li == 0:
            first_folds = list(folds)
        all_folds.append(list(folds))
        # raw rows live in folded coordinates (R^n0); absorption multiplies
        # in the previous layer's mixing matrix
        raw_rows, raw_bias, mix_rows = [], [], []
        row_at = 0
        for i, p in enumerate(folds):
            e = np.zeros(n0)
            e[i] = 1.0
            scale = 1.0 if li == 0 else float(p)
            rows, biases = sawtooth_rows(p, e, scale)
            raw_rows.extend(rows)
            raw_bias.extend(biases)
            mrow = np.zeros(w)
            mrow[row_at:row_at + p] = mixing_coefficients(p)
            mix_rows.append(mrow)
            row_at += p
        for _ in range(w - row_at):   # unrefined remainder: inert units
            raw_rows.append(np.zeros(n0))
            raw_bias.append(-1.0)
        R = np.array(raw_rows)
        b = np.array(raw_bias)
        M = np.array(mix_rows)
        W = R if li == 0 else R @ mixing_prev
        layers.append(Layer(W, b, ACT_RECTIFIER))
        stages.append((R, b, M))
        mixing_prev = M

    n_last = widths[-1]
    normals, offsets = _verified_cube_arrangement(n0, n_last, seed)
    W_last = normals @ mixing_prev if L > 1 else normals
    layers.append(Layer(W_last, -offsets, ACT_RECTIFIER))
    stages.append((normals, -offsets, None))

    structure = rectifier_structure(n0, widths)
    predicted = (
        deep_rectifier_lower_refined(structure) if refined else deep_rectifier_lower(structure)
    )
    count_box = tuple((0.0, float(p)) for p in first_folds) if L > 1 else tuple(
        (0.0, 1.0) for _ in range(n0)
    )
    spec = WitnessSpec(
        kind="FoldingRectifierNet",
        params={
            "n0": n0,
            "widths": list(widths),
            "seed": seed,
            "refined": refined,
            "fold_counts": all_folds,
        },
        predicted_count=predicted,
        provenance=(
            "product of fold counts times the last arrangement's cell count"
            + (" (remainder-refined)" if refined else "")
        ),
        exact=True,
        count_box=count_box,
    )
    net = Network(n0, tuple(layers))
    readout = AffineMap(mixing_prev, np.zeros(n0)) if L > 1 else None
    return Construction(net, spec, readout=readout, stages=tuple(stages))


def folding_reference_forward(stages, x) -> np.ndarray:
    """Evaluate a folding construction through explicit intermediary
    mixing steps (folded coordinates materialized between layers)
    instead of the absorbed weights."""
    u = np.asarray(x, float)
    for rows, bias, mix in stages:
        a = np.maximum(rows @ u + bias, 0.0)
        u = mix @ a if mix is not None else a
    return u


# ---------------------------------------------------------------------------
# small classic examples

def build_abs_net() -> Construction:
    """Four rectifier units realizing (|x1|, |x2|) through the readout;
    the four open quadrants are identified onto the positive quadrant."""
    W = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    b = np.zeros(4)
    readout = AffineMap(np.array([[1.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 1.0]]), np.zeros(2))
    spec = WitnessSpec(
        kind="AbsNet",
        params={"n0": 2},
        predicted_count=4,
        provenance="coordinate sign quadrants",
        exact=True,
        count_box=None,
    )
    return Construction(Network(2, (Layer(W, b, ACT_RECTIFIER),)), spec, readout=readout)


def build_maxout_parallel(n: int, m: int, k: int) -> Construction:
    """Single maxout layer whose unit j has envelope breakpoints at
    x_{j mod n} = 1, ..., k-1; regions form a k^min(n,m) grid."""
    if n < 1 or m < 1 or k < 2:
        raise ValueError("need n, m >= 1 and k >= 2")
    rows, bias = [], []
    for j in range(m):
        coord = j % n
        for t in range(1, k + 1):
            r = np.zeros(n)
            r[coord] = float(t)
            rows.append(r)
            bias.append(-t * (t - 1) / 2.0)
    spec = WitnessSpec(
        kind="MaxoutParallel",
        params={"n": n, "m": m, "k": k},
        predicted_count=k ** min(n, m),
        provenance="parallel-breakpoint grid k^min(n,m)",
        exact=True,
        count_box=None,
    )
    return Construction(Network(n, (Layer(np.array(rows), np.array(bias), maxout(k)),)), spec)


def build_shi_layer(n: int) -> Construction:
    """Rank-3 maxout layer whose units' envelope breaks lie on
    x_i - x_j in {0, 1} for all i < j: (n+1)^(n-1) regions."""
    if n < 2:
        raise ValueError("need n >= 2")
    rows, bias = [], []
    for i in range(n):
        for j in range(i + 1, n):
            d = np.zeros(n)
            d[i], d[j] = 1.0, -1.0
            rows.extend([np.zeros(n), d, 2.0 * d])
            bias.extend([0.0, 0.0, -1.0])
    spec = WitnessSpec(
        kind="ShiLayer",
        params={"n": n},
        predicted_count=(n + 1) ** (n - 1),
        provenance="difference arrangement with offsets {0,1}: (n+1)^(n-1)",
        exact=True,
        count_box=None,
    )
    return Construction(Network(n, (Layer(np.array(rows), np.array(bias), maxout(3)),)), spec)


def build_catalan_layer(n: int) -> Construction:
    """Rank-4 maxout layer breaking on x_i - x_j in {-1, 0, 1}:
    n! * Catalan(n) regions."""
    if n < 2:
        raise ValueError("need n >= 2")
    rows, bias = [], []
    for i in range(n):
        for j in range(i + 1, n):
            d = np.zeros(n)
            d[i], d[j] = 1.0, -1.0
            rows.extend([d, 2.0 * d, 3.0 * d, 4.0 * d])
            bias.extend([0.0, 1.0, 1.0, 0.0])
    catalan = math.comb(2 * n, n) // (n + 1)
    spec = WitnessSpec(
        kind="CatalanLayer",
        params={"n": n},
        predicted_count=math.factorial(n) * catalan,
        provenance="difference arrangement with offsets {-1,0,1}: n!*C_n",
        exact=True,
        count_box=None,
    )
    return Construction(Network(n, (Layer(np.array(rows), np.array(bias), maxout(4)),)), spec)


# ---------------------------------------------------------------------------
# maxout folding witnesses

def build_rank2_folding_maxout(n0: int, L: int) -> Construction:
    """L rank-2 maxout layers, unit j computing 2|u_j| - 1: every layer
    halves each coordinate's operating interval onto (-1, 1), so the net
    has exactly 2^(n0 L) regions on any box containing [-1, 1]^n0."""
    if n0 < 1 or L < 1:
        raise ValueError("need n0, L >= 1")
    layers = []
    for _ in range(L):
        rows, bias = [], []
        for j in range(n0):
            e = np.zeros(n0)
            e[j] = 2.0
            rows.extend([e, -e])
            bias.extend([-1.0, -1.0])
        layers.append(Layer(np.array(rows), np.array(bias), maxout(2)))
    spec = WitnessSpec(
        kind="MaxoutCones",
        params={"n0": n0, "L": L, "k": 2},
        predicted_count=2 ** (n0 * L),
        provenance="dyadic coordinate folding 2^(n0 L)",
        exact=True,
        count_box=None,
    )
    return Construction(Network(n0, tuple(layers)), spec)


@dataclass(frozen=True)
class SimulationPair:
    """A rank-2 maxout net, its rectifier simulation, and the measured
    max pointwise difference between the two."""

    maxout: Construction
    rectifier: Construction
    certificate: float
    sample_count: int


def build_rank2_maxout_as_rectifier(n0: int, L: int, seed: int = 0,
                                    sample_count: int = 1000) -> SimulationPair:
    """Simulate each rank-2 unit max{f1, f2} as f2 + max{0, f1 - f2}.

    Two rectifier units stand in for every maxout unit: one carries the
    envelope break (f1 - f2), the other carries f2 shifted up by a margin
    large enough (interval arithmetic over the default box) that it never
    turns off, so region counts of the two nets agree exactly.
    """
    source = build_rank2_folding_maxout(n0, L)
    B = FeasibilityConfig().box_halfwidth
    lo = np.full(n0, -B)
    hi = np.full(n0, B)

    C = np.eye(n0)               # maxout activations as a map on sim activations
    d = np.zeros(n0)
    sim_layers = []
    margins = []
    for _ in range(L):
        # per coordinate: u in [lo, hi]; f1 = 2u-1, f2 = -2u-1.  The margin
        # must keep f2 + M positive over the whole reachable interval, i.e.
        # clear f2's minimum (attained at u = hi).
        M = float(2.0 * np.max(hi) + 1.0) + 2.0
        margins.append(M)
        rows, bias = [], []
        for j in range(n0):
            rows.append(4.0 * C[j])            # f1 - f2 = 4u_j
            bias.append(4.0 * d[j])
            rows.append(-2.0 * C[j])           # f2 + M
            bias.append(-2.0 * d[j] - 1.0 + M)
        sim_layers.append(Layer(np.array(rows), np.array(bias), ACT_RECTIFIER))
        # value v_j = r_{2j} + r_{2j+1} - M
        C = np.zeros((n0, 2 * n0))
        for j in range(n0):
            C[j, 2 * j] = C[j, 2 * j + 1] = 1.0
        d = np.full(n0, -M)
        # next layer's input interval: v = 2|u|-1 over u in [lo, hi]
        abs_hi = np.maximum(np.abs(lo), np.abs(hi))
        lo, hi = np.full(n0, -1.0), 2.0 * abs_hi - 1.0

    readout = AffineMap(C, d)
    sim_spec = WitnessSpec(
        kind="Rank2MaxoutAsRectifier",
        params={"n0": n0, "L": L, "margins": margins},
        predicted_count=2 ** (n0 * L),
        provenance="dyadic coordinate folding 2^(n0 L); break-carrying unit pairs",
        exact=True,
        count_box=None,
    )
    sim = Construction(Network(n0, tuple(sim_layers)), sim_spec, readout=readout)

    rng = np.random.default_rng(seed)
    X = rng.uniform(-2.0, 2.0, size=(sample_count, n0))
    worst = 0.0
    for x in X:
        worst = max(worst, float(np.max(np.abs(source.value(x) - sim.value(x)))))
    return SimulationPair(source, sim, worst, sample_count)


_CONE_SHIFT = 200.0       # radius at which every cone's unit value crosses 0
_GRID_SPACING = 0.2       # last-layer breakpoint spacing around the origin


def _grid_layer(n0: int, k: int) -> Layer:
    """Rank-k layer with per-coordinate envelope breaks spread around 0."""
    rows, bias = [], []
    for j in range(n0):
        beta = 0.0
        for t in range(1, k + 1):
            r = np.zeros(n0)
            r[j] = float(t)
            rows.append(r)
            bias.append(beta)
            beta -= (t - k / 2.0) * _GRID_SPACING   # break between t, t+1
    return Layer(np.array(rows), np.array(bias), maxout(k))


def build_maxout_cones(n0: int, L: int, k: int, rotation: float = 1e-2) -> Construction:
    """Deep maxout witness: L-1 cone layers identify k sectors apiece,
    then a parallel-breakpoint layer contributes k^n0 grid cells, for at
    least k^(L-1+n0) regions (verified by the enumerator on build).

    k = 2 uses the dyadic coordinate folding net (whose 2^(n0 L) regions
    subsume the bound).  k >= 3 uses per-unit gradient fans +-e1, +-e2, ...
    truncated to k branches and rotated by ``rotation``*(j-1) in the
    (e1, e2) plane, biased by a large shift so each fan's value crosses 0
    far from the origin, where the rotation has opened a full-dimensional
    image; only n0 = 2 is supported for k >= 3.
    """
    if L < 1 or k < 2:
        raise ValueError("need L >= 1 and k >= 2")
    predicted = deep_maxout_lower(n0, L, k)
    if k == 2:
        folding = build_rank2_folding_maxout(n0, L)
        spec = WitnessSpec(
            kind="MaxoutCones",
            params={"n0": n0, "L": L, "k": 2, "true_count": 2 ** (n0 * L)},
            predicted_count=predicted,
            provenance="k^(L-1+n0) via dyadic folding (which attains 2^(n0 L))",
            exact=False,
            count_box=None,
        )
        return Construction(folding.network, spec)
    if n0 != 2:
        raise ConstructionError("cone fans with planar rotations need n0 = 2 for k >= 3")
    if k > 2 * n0:
        raise ConstructionError(f"rank {k} exceeds the 2*n0 = {2 * n0} fan directions")

    base = []
    for i in range(n0):
        e = np.zeros(n0)
        e[i] = 1.0
        base.extend([e, -e])
    base = np.array(base[:k])

    layers = []
    for _ in range(L - 1):
        rows, bias = [], []
        for j in range(n0):
            ang = rotation * j
            R = np.array([[math.cos(ang), -math.sin(ang)], [math.sin(ang), math.cos(ang)]])
            for g in base:
                rows.append(R @ g)
                bias.append(-_CONE_SHIFT)
        layers.append(Layer(np.array(rows), np.array(bias), maxout(k)))
    layers.append(_grid_layer(n0, k))

    net = Network(n0, tuple(layers))
    spec = WitnessSpec(
        kind="MaxoutCones",
        params={"n0": n0, "L": L, "k": k, "rotation": rotation,
                "shift": _CONE_SHIFT, "grid_spacing": _GRID_SPACING},
        predicted_count=predicted,
        provenance="k identified sectors per hidden layer times a k^n0 grid",
        exact=False,
        count_box=None,
    )
    got = enumerate_regions(net).count
    if got < predicted:
        raise ConstructionError(
            f"cone witness enumerated {got} < {predicted} regions at rotation {rotation}; "
            "adjust the rotation angle"
        )
    return Construction(net, spec)


# ---------------------------------------------------------------------------
# identification probe

def identification_check(net: Network, boxes, probe_count: int = 20,
                         readout: AffineMap | None = None,
                         tol: float = 1e-8, seed: int = 0) -> bool:
    """Do the given input boxes all map onto a common output set?

    For ``probe_count`` random points in the first box, a counterpart in
    every other box is computed by inverting that box's affine map (the
    network restricted to the box's region, composed with the readout if
    given).  True iff every counterpart lies in its box, keeps the box's
    activation pattern, and reproduces the probe's output within ``tol``.
    """
    boxes = [tuple((float(lo), float(hi)) for lo, hi in b) for b in boxes]
    if len(boxes) < 2:
        raise ValueError("need at least two boxes")

    def out(x):
        acts = forward(net, x)[-1]
        return readout(acts) if readout is not None else acts

    maps, patterns = [], []
    for b in boxes:
        center = np.array([(lo + hi) / 2 for lo, hi in b])
        pat = pattern_at(net, center)
        aff = pattern_affine(net, pat)
        if readout is not None:
            aff = readout.compose(aff)
        maps.append(aff)
        patterns.append(pat)

    rng = np.random.default_rng(seed)
    lo0 = np.array([lo for lo, _ in boxes[0]])
    hi0 = np.array([hi for _, hi in boxes[0]])
    for _ in range(probe_count):
        x = lo0 + (hi0 - lo0) * rng.random(len(boxes[0]))
        target = maps[0](x)
        if np.max(np.abs(out(x) - target)) > tol:      # box 0 not inside one region
            return False
        for b, aff, pat in zip(boxes[1:], maps[1:], patterns[1:]):
            A, c = aff.matrix, aff.offset
            if A.shape[0] != A.shape[1]:
                y, *_ = np.linalg.lstsq(A, target - c, rcond=None)
            else:
                try:
                    y = np.linalg.solve(A, target - c)
                except np.linalg.LinAlgError:
                    return False
            inside = all(lo < yi < hi for yi, (lo, hi) in zip(y, b))
            if not inside:
                return False
            if pattern_at(net, y) != pat:
                return False
            if np.max(np.abs(out(y) - target)) > tol:
                return False
    return True
