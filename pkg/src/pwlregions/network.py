"""Data model for feedforward networks built from rectifier and maxout units.

A network here is the hidden stack only: an input dimension plus a sequence
of layers, each layer a weight matrix, bias vector and an activation.  Any
affine readout applied after the last hidden layer never changes where the
computed function switches affine pieces, so it is kept out of the model;
constructions that need one carry it separately.

Rectifier units compute ``max(0, w.x + b)``.  A maxout unit of rank k keeps
k rows of weights/biases (stored consecutively: unit j of a rank-k layer
owns rows ``j*k .. j*k+k-1``) and outputs the largest of its k branch
pre-activations.

Activation-pattern conventions, used consistently everywhere:

* rectifier: a unit is *active* iff its pre-activation is strictly
  positive; an exact zero counts as inactive.
* maxout: the selected branch is the argmax, ties resolved to the lowest
  branch index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np

from .serialize import render_json

RECTIFIER = "rectifier"
MAXOUT = "maxout"


class NetworkFormatError(ValueError):
    """Raised when a network file does not follow the on-disk schema."""


@dataclass(frozen=True)
class Activation:
    kind: str
    rank: int = 1

    def __post_init__(self):
        if self.kind == RECTIFIER:
            if self.rank != 1:
                raise ValueError("rectifier activation has rank 1")
        elif self.kind == MAXOUT:
            if self.rank < 2:
                raise ValueError("maxout rank must be >= 2")
        else:
            raise ValueError(f"unknown activation kind {self.kind!r}")


ACT_RECTIFIER = Activation(RECTIFIER, 1)


def maxout(rank: int) -> Activation:
    return Activation(MAXOUT, rank)


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(np.asarray(a, dtype=float))
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Layer:
    """One hidden layer: ``rank*width`` weight rows over the previous width."""

    weights: np.ndarray  # (rank*width, fan_in)
    bias: np.ndarray     # (rank*width,)
    activation: Activation = ACT_RECTIFIER

    def __post_init__(self):
        object.__setattr__(self, "weights", _freeze(np.atleast_2d(self.weights)))
        object.__setattr__(self, "bias", _freeze(np.atleast_1d(self.bias)))
        rows = self.weights.shape[0]
        k = self.activation.rank
        if rows == 0 or rows % k != 0:
            raise ValueError(f"{rows} weight rows not divisible by rank {k}")
        if self.bias.shape != (rows,):
            raise ValueError("bias length does not match weight rows")
        if not np.isfinite(self.weights).all() or not np.isfinite(self.bias).all():
            raise ValueError("non-finite layer parameters")

    @property
    def width(self) -> int:
        return self.weights.shape[0] // self.activation.rank

    @property
    def fan_in(self) -> int:
        return self.weights.shape[1]

    def unit_rows(self, j: int) -> slice:
        k = self.activation.rank
        return slice(j * k, (j + 1) * k)


@dataclass(frozen=True, eq=False)
class Network:
    input_dim: int
    layers: tuple[Layer, ...]

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if self.input_dim < 1:
            raise ValueError("input_dim must be >= 1")
        if not self.layers:
            raise ValueError("network needs at least one layer")
        fan = self.input_dim
        for i, layer in enumerate(self.layers):
            if layer.fan_in != fan:
                raise ValueError(
                    f"layer {i}: fan-in {layer.fan_in} does not match previous width {fan}"
                )
            fan = layer.width

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def widths(self) -> tuple[int, ...]:
        return tuple(layer.width for layer in self.layers)


# ---------------------------------------------------------------------------
# structure (shape-only view) and parameter counting

@dataclass(frozen=True)
class NetworkStructure:
    input_dim: int
    layers: tuple[tuple[int, Activation], ...]  # (width, activation) per layer

    def __post_init__(self):
        if self.input_dim < 1:
            raise ValueError("input_dim must be >= 1")
        for width, _ in self.layers:
            if width < 1:
                raise ValueError("layer width must be >= 1")

    @property
    def widths(self) -> tuple[int, ...]:
        return tuple(w for w, _ in self.layers)


def rectifier_structure(input_dim: int, widths: Sequence[int]) -> NetworkStructure:
    return NetworkStructure(input_dim, tuple((w, ACT_RECTIFIER) for w in widths))


def maxout_structure(input_dim: int, widths: Sequence[int], rank: int) -> NetworkStructure:
    act = maxout(rank)
    return NetworkStructure(input_dim, tuple((w, act) for w in widths))


def structure_of(net: Network) -> NetworkStructure:
    return NetworkStructure(
        net.input_dim, tuple((l.width, l.activation) for l in net.layers)
    )


def parameter_count(structure: NetworkStructure | Network) -> int:
    """Total number of weights and biases: sum of rank*width*(fan_in+1)."""
    if isinstance(structure, Network):
        structure = structure_of(structure)
    total = 0
    fan = structure.input_dim
    for width, act in structure.layers:
        total += act.rank * width * (fan + 1)
        fan = width
    return total


# ---------------------------------------------------------------------------
# evaluation

ActivationPattern = tuple  # tuple of per-layer tuples of ints


def preactivations(net: Network, x: np.ndarray) -> list[np.ndarray]:
    """Raw pre-activation vectors (rank*width per layer) along the stack."""
    x = np.asarray(x, dtype=float)
    pres = []
    h = x
    for layer in net.layers:
        z = layer.weights @ h + layer.bias
        pres.append(z)
        h = _apply_activation(layer, z)
    return pres


def _apply_activation(layer: Layer, z: np.ndarray) -> np.ndarray:
    k = layer.activation.rank
    if k == 1:
        return np.maximum(z, 0.0)
    return z.reshape(layer.width, k).max(axis=1)


def forward(net: Network, x: np.ndarray) -> list[np.ndarray]:
    """Per-layer activation vectors for input ``x``."""
    x = np.asarray(x, dtype=float)
    acts = []
    h = x
    for layer in net.layers:
        z = layer.weights @ h + layer.bias
        h = _apply_activation(layer, z)
        acts.append(h)
    return acts


def pattern_at(net: Network, x: np.ndarray) -> ActivationPattern:
    """Activation pattern at ``x`` (rectifier bits / maxout branch indices)."""
    x = np.asarray(x, dtype=float)
    pattern = []
    h = x
    for layer in net.layers:
        z = layer.weights @ h + layer.bias
        k = layer.activation.rank
        if k == 1:
            bits = tuple(int(v > 0.0) for v in z)
        else:
            zz = z.reshape(layer.width, k)
            bits = tuple(int(np.argmax(row)) for row in zz)
        pattern.append(bits)
        h = _apply_activation(layer, z)
    return tuple(pattern)


def pattern_matrix(net: Network, X: np.ndarray) -> np.ndarray:
    """Vectorized ``pattern_at`` over rows of ``X``; one int per unit."""
    X = np.asarray(X, dtype=float)
    H = X.T  # (dim, npoints)
    cols = []
    for layer in net.layers:
        Z = layer.weights @ H + layer.bias[:, None]
        k = layer.activation.rank
        if k == 1:
            cols.append((Z > 0.0).astype(np.int8).T)
            H = np.maximum(Z, 0.0)
        else:
            ZZ = Z.reshape(layer.width, k, -1)
            cols.append(ZZ.argmax(axis=1).astype(np.int8).T)
            H = ZZ.max(axis=1)
    return np.hstack(cols)


def pattern_code(pattern: ActivationPattern) -> str:
    """Compact text form of a pattern: units joined by ',', layers by '|'."""
    return "|".join(",".join(str(int(u)) for u in layer) for layer in pattern)


# ---------------------------------------------------------------------------
# pattern-fixed affine maps

@dataclass(frozen=True, eq=False)
class AffineMap:
    """x -> matrix @ x + offset."""

    matrix: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", _freeze(np.atleast_2d(self.matrix)))
        object.__setattr__(self, "offset", _freeze(np.atleast_1d(self.offset)))
        if self.matrix.shape[0] != self.offset.shape[0]:
            raise ValueError("matrix/offset shape mismatch")

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(x, dtype=float) + self.offset

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """self after inner: x -> self(inner(x))."""
        return AffineMap(self.matrix @ inner.matrix, self.matrix @ inner.offset + self.offset)


def identity_map(dim: int) -> AffineMap:
    return AffineMap(np.eye(dim), np.zeros(dim))


def layer_selection(layer: Layer, layer_pattern: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Effective (W, b) of one layer once its pattern is fixed.

    Inactive rectifier rows become zero rows; maxout keeps the selected
    branch row per unit.
    """
    k = layer.activation.rank
    if len(layer_pattern) != layer.width:
        raise ValueError("pattern length does not match layer width")
    if k == 1:
        sel = np.asarray(layer_pattern, dtype=float)[:, None]
        return layer.weights * sel, layer.bias * sel[:, 0]
    rows = [j * k + int(t) for j, t in enumerate(layer_pattern)]
    for j, t in enumerate(layer_pattern):
        if not 0 <= int(t) < k:
            raise ValueError(f"branch index {t} out of range for unit {j}")
    return layer.weights[rows], layer.bias[rows]


def pattern_affine(net: Network, pattern: ActivationPattern, upto: int | None = None) -> AffineMap:
    """Affine map input -> layer activations implied by a fixed pattern.

    ``upto`` limits composition to the first ``upto`` layers (default: all).
    """
    n = net.depth if upto is None else upto
    A = np.eye(net.input_dim)
    c = np.zeros(net.input_dim)
    for layer, lp in zip(net.layers[:n], pattern[:n]):
        W, b = layer_selection(layer, lp)
        c = W @ c + b
        A = W @ A
    return AffineMap(A, c)


# ---------------------------------------------------------------------------
# file format

def network_to_dict(net: Network) -> dict:
    layers = []
    for layer in net.layers:
        entry: dict = {"activation": layer.activation.kind}
        if layer.activation.kind == MAXOUT:
            entry["rank"] = layer.activation.rank
        entry["width"] = layer.width
        entry["weights"] = [[float(v) for v in row] for row in layer.weights]
        entry["bias"] = [float(v) for v in layer.bias]
        layers.append(entry)
    return {"input_dim": net.input_dim, "layers": layers}


def save_network(net: Network, fp: IO[str] | str) -> None:
    """Write a network as JSON; floats carry 17 significant digits."""
    text = render_json(network_to_dict(net))
    if isinstance(fp, str):
        with open(fp, "w") as f:
            f.write(text)
    else:
        fp.write(text)


def _require(cond: bool, where: str, msg: str):
    if not cond:
        raise NetworkFormatError(f"{where}: {msg}")


def network_from_dict(doc) -> Network:
    _require(isinstance(doc, dict), "top level", "expected an object")
    _require("input_dim" in doc, "top level", "missing 'input_dim'")
    _require("layers" in doc, "top level", "missing 'layers'")
    unknown = set(doc) - {"input_dim", "layers"}
    _require(not unknown, "top level", f"unknown fields {sorted(unknown)}")
    n0 = doc["input_dim"]
    _require(isinstance(n0, int) and not isinstance(n0, bool) and n0 >= 1,
             "input_dim", "expected a positive integer")
    _require(isinstance(doc["layers"], list) and doc["layers"],
             "layers", "expected a non-empty array")

    layers = []
    fan = n0
    for i, entry in enumerate(doc["layers"]):
        where = f"layer {i}"
        _require(isinstance(entry, dict), where, "expected an object")
        for fld in ("activation", "width", "weights", "bias"):
            _require(fld in entry, where, f"missing '{fld}'")
        kind = entry["activation"]
        _require(kind in (RECTIFIER, MAXOUT), where, f"unknown activation {kind!r}")
        if kind == RECTIFIER:
            _require("rank" not in entry, where, "rank not allowed for rectifier layers")
            act = ACT_RECTIFIER
        else:
            _require("rank" in entry, where, "maxout layers need a 'rank'")
            rank = entry["rank"]
            _require(isinstance(rank, int) and not isinstance(rank, bool) and rank >= 2,
                     where, "rank must be an integer >= 2")
            act = Activation(MAXOUT, rank)
        allowed = {"activation", "rank", "width", "weights", "bias"}
        unknown = set(entry) - allowed
        _require(not unknown, where, f"unknown fields {sorted(unknown)}")
        width = entry["width"]
        _require(isinstance(width, int) and not isinstance(width, bool) and width >= 1,
                 where, "width must be a positive integer")
        rows = entry["weights"]
        _require(isinstance(rows, list), where, "weights must be an array of rows")
        _require(len(rows) == act.rank * width, where,
                 f"expected {act.rank * width} weight rows, found {len(rows)}")
        mat = []
        for r, row in enumerate(rows):
            _require(isinstance(row, list), f"{where}: weights row {r}", "expected an array")
            _require(len(row) == fan, f"{where}: weights row {r}",
                     f"has length {len(row)}, expected {fan}")
            for v in row:
                _require(isinstance(v, (int, float)) and not isinstance(v, bool),
                         f"{where}: weights row {r}", "entries must be numbers")
            mat.append([float(v) for v in row])
        bias = entry["bias"]
        _require(isinstance(bias, list) and len(bias) == act.rank * width, where,
                 f"bias must be an array of length {act.rank * width}")
        for v in bias:
            _require(isinstance(v, (int, float)) and not isinstance(v, bool),
                     f"{where}: bias", "entries must be numbers")
        layers.append(Layer(np.array(mat, dtype=float), np.array(bias, dtype=float), act))
        fan = width
    return Network(n0, tuple(layers))


def load_network(fp: IO[str] | str) -> Network:
    """Parse a network file, raising NetworkFormatError with field context."""
    if isinstance(fp, str):
        with open(fp) as f:
            text = f.read()
    else:
        text = fp.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise NetworkFormatError(f"not valid JSON: {e}") from e
    return network_from_dict(doc)


def networks_equal(a: Network, b: Network) -> bool:
    if a.input_dim != b.input_dim or a.depth != b.depth:
        return False
    for la, lb in zip(a.layers, b.layers):
        if la.activation != lb.activation:
            return False
        if la.weights.shape != lb.weights.shape:
            return False
        if not (la.weights == lb.weights).all() or not (la.bias == lb.bias).all():
            return False
    return True
