"""Affine maps realized by individual units at given inputs.

On the region containing x, every unit's activation is an affine function
u.x + c; this module extracts that map by composing the pattern-selected
weights below the unit, validates it against finite differences, lists
the distinct maps a unit realizes over a sample set, and adjusts one of
two points until a chosen unit outputs the same value at both — a probe
demonstrating that the two surrounding regions are folded together.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import (
    AffineMap,
    Network,
    forward,
    layer_selection,
    pattern_affine,
    pattern_at,
    preactivations,
)


class IdentificationError(RuntimeError):
    """No identified pair exists along the adjustment ray."""


def unit_activation(net: Network, layer: int, unit: int, x) -> float:
    """Post-nonlinearity output of one unit at x."""
    acts = forward(net, np.asarray(x, float))
    return float(acts[layer][unit])


def unit_linear_map(net: Network, layer: int, unit: int, x) -> AffineMap:
    """The affine map the unit's activation follows on x's region.

    Row ``unit`` of the pattern-fixed composition through ``layer``; an
    inactive rectifier therefore yields the zero map, and a maxout unit
    the map of its argmax branch.  The composition is computed with the
    same matrix products the region enumerator uses, so the row agrees
    exactly with the corresponding row of Region.affine.
    """
    if not 0 <= layer < net.depth:
        raise IndexError(f"layer {layer} out of range")
    if not 0 <= unit < net.layers[layer].width:
        raise IndexError(f"unit {unit} out of range")
    pattern = pattern_at(net, np.asarray(x, float))
    full = pattern_affine(net, pattern, upto=layer + 1)
    return AffineMap(full.matrix[unit:unit + 1].copy(), full.offset[unit:unit + 1].copy())


def readout_linear_map(net: Network, readout: AffineMap, x) -> AffineMap:
    """Affine map of a linear readout of the final activations on x's region."""
    pattern = pattern_at(net, np.asarray(x, float))
    return readout.compose(pattern_affine(net, pattern))


def finite_difference_gradient(net: Network, layer: int, unit: int, x,
                               step: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of the unit's activation at x."""
    x = np.asarray(x, float)
    grad = np.zeros(len(x))
    for i in range(len(x)):
        e = np.zeros(len(x))
        e[i] = step
        grad[i] = (
            unit_activation(net, layer, unit, x + e)
            - unit_activation(net, layer, unit, x - e)
        ) / (2.0 * step)
    return grad


def boundary_clearance(net: Network, x) -> float:
    """Distance from x to the nearest activation boundary, measured with
    input-space unit normals.  Infinite when no unit ever switches."""
    x = np.asarray(x, float)
    best = np.inf
    A = np.eye(net.input_dim)
    c = np.zeros(net.input_dim)
    for layer in net.layers:
        G = layer.weights @ A
        D = layer.weights @ c + layer.bias
        k = layer.activation.rank
        if k == 1:
            for j in range(layer.width):
                norm = float(np.linalg.norm(G[j]))
                if norm > 1e-12:
                    best = min(best, abs(float(G[j] @ x + D[j])) / norm)
            states = tuple(int(v > 0) for v in (G @ x + D))
        else:
            states = []
            for j in range(layer.width):
                rows = slice(j * k, (j + 1) * k)
                vals = G[rows] @ x + D[rows]
                t = int(np.argmax(vals))
                states.append(t)
                for s in range(k):
                    if s == t:
                        continue
                    diff = G[rows][t] - G[rows][s]
                    norm = float(np.linalg.norm(diff))
                    if norm > 1e-12:
                        best = min(best, float(vals[t] - vals[s]) / norm)
            states = tuple(states)
        Weff, beff = layer_selection(layer, states)
        A = Weff @ A
        c = Weff @ c + beff
    return best


@dataclass(frozen=True)
class UnitPiece:
    map: AffineMap
    representative: np.ndarray
    activation: float


def enumerate_unit_pieces(net: Network, layer: int, unit: int, samples,
                          readout: AffineMap | None = None,
                          tol: float = 1e-8) -> list[UnitPiece]:
    """Distinct affine maps a unit (or readout row) realizes over samples.

    Only samples where the tracked value is strictly positive are kept.
    Maps are deduplicated within ``tol`` (max coefficient difference),
    each retaining its first representative sample, then sorted by
    coefficients so the result is independent of traversal order.
    """
    pieces: list[UnitPiece] = []
    for raw in samples:
        x = np.asarray(raw, float)
        if readout is not None:
            act = float(readout(forward(net, x)[-1])[unit])
            if act <= 0.0:
                continue
            full = readout_linear_map(net, readout, x)
            m = AffineMap(full.matrix[unit:unit + 1].copy(),
                          full.offset[unit:unit + 1].copy())
        else:
            act = unit_activation(net, layer, unit, x)
            if act <= 0.0:
                continue
            m = unit_linear_map(net, layer, unit, x)
        key = np.concatenate([m.matrix.ravel(), m.offset])
        found = False
        for p in pieces:
            other = np.concatenate([p.map.matrix.ravel(), p.map.offset])
            if np.max(np.abs(key - other)) <= tol:
                found = True
                break
        if not found:
            pieces.append(UnitPiece(m, x, act))
    pieces.sort(key=lambda p: tuple(np.concatenate([p.map.matrix.ravel(), p.map.offset])))
    return pieces


@dataclass(frozen=True)
class IdentifiedPair:
    """Result of the equal-activation probe: the adjusted second point,
    the value maps at both points, and whether the points already shared
    one region (in which case no adjustment is performed)."""

    point: np.ndarray
    map1: AffineMap
    map2: AffineMap
    same_region: bool


def find_identified_pair(net: Network, layer: int, unit: int, x1, x2,
                         target_tol: float = 1e-10,
                         readout: AffineMap | None = None) -> IdentifiedPair:
    """Move x2 along its local value gradient until the tracked unit
    outputs the same value as at x1, without leaving x2's region.

    The value map is affine on the region, so a single exact step lands on
    the target; the result is rejected if that step crosses a region
    boundary or fails to reach ``target_tol``.
    """
    x1 = np.asarray(x1, float)
    x2 = np.asarray(x2, float)

    def value(x):
        if readout is not None:
            return float(readout(forward(net, x)[-1])[unit])
        return unit_activation(net, layer, unit, x)

    def vmap(x):
        if readout is not None:
            full = readout_linear_map(net, readout, x)
            return AffineMap(full.matrix[unit:unit + 1].copy(),
                             full.offset[unit:unit + 1].copy())
        return unit_linear_map(net, layer, unit, x)

    a1, a2 = value(x1), value(x2)
    if a1 <= 0.0 or a2 <= 0.0:
        raise ValueError("unit must be active (positive value) at both points")
    m1, m2 = vmap(x1), vmap(x2)
    p1, p2 = pattern_at(net, x1), pattern_at(net, x2)
    if p1 == p2:
        return IdentifiedPair(x2.copy(), m1, m2, True)

    g = m2.matrix[0]
    gnorm2 = float(g @ g)
    if gnorm2 < 1e-24:
        raise IdentificationError("value gradient vanishes at the second point")
    adjusted = x2 + ((a1 - a2) / gnorm2) * g
    if pattern_at(net, adjusted) != p2:
        raise IdentificationError(
            "no identified pair along this ray: the region boundary is crossed first"
        )
    if abs(value(adjusted) - a1) > target_tol:
        raise IdentificationError(
            f"adjustment landed {abs(value(adjusted) - a1):.3e} from the target value"
        )
    return IdentifiedPair(adjusted, m1, vmap(adjusted), False)
