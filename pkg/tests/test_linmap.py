"""Local affine maps of single units, and the identified-pair probe."""

import numpy as np
import pytest

from pwlregions.constructions import (
    build_abs_net,
    sawtooth_network,
    sawtooth_with_threshold,
)
from pwlregions.linmap import (
    IdentificationError,
    boundary_clearance,
    enumerate_unit_pieces,
    find_identified_pair,
    finite_difference_gradient,
    readout_linear_map,
    unit_activation,
    unit_linear_map,
)
from pwlregions.network import ACT_RECTIFIER, Layer, Network, forward
from pwlregions.regions import FeasibilityConfig, enumerate_regions


def random_net(seed=0, widths=(3, 3)):
    rng = np.random.default_rng(seed)
    layers = []
    fan = 2
    for w in widths:
        layers.append(Layer(rng.normal(size=(w, fan)), rng.normal(size=w), ACT_RECTIFIER))
        fan = w
    return Network(2, tuple(layers))


def test_unit_map_matches_finite_differences():
    net = random_net(2)
    rng = np.random.default_rng(3)
    checked = 0
    for x in rng.uniform(-2, 2, size=(60, 2)):
        if boundary_clearance(net, x) < 1e-4:
            continue
        checked += 1
        for layer in range(net.depth):
            for unit in range(net.layers[layer].width):
                m = unit_linear_map(net, layer, unit, x)
                fd = finite_difference_gradient(net, layer, unit, x)
                assert np.max(np.abs(m.matrix[0] - fd)) < 1e-6
                got = float(m.matrix[0] @ x + m.offset[0])
                assert abs(got - unit_activation(net, layer, unit, x)) < 1e-9
    assert checked > 30


def test_unit_map_rows_equal_region_affine():
    """A unit's map is literally one row of the enumerator's per-region
    affine map, so at a region witness they must agree bit for bit."""
    net = random_net(5, widths=(4,))
    rs = enumerate_regions(net, FeasibilityConfig(box=((-2, 2), (-2, 2))))
    for region in rs.regions:
        for unit in range(4):
            m = unit_linear_map(net, 0, unit, region.witness)
            assert np.array_equal(m.matrix[0], region.affine.matrix[unit])
            assert m.offset[0] == region.affine.offset[unit]


def test_boundary_clearance_geometry():
    net = build_abs_net().network
    assert boundary_clearance(net, np.array([0.3, 0.4])) == pytest.approx(0.3)
    assert boundary_clearance(net, np.array([1e-9, 0.5])) < 1e-8


def test_readout_linear_map():
    con = sawtooth_network(3)
    x = np.array([1.4])
    full = readout_linear_map(con.network, con.readout, x)
    assert np.allclose(full(x), con.value(x))
    assert full.matrix[0, 0] == pytest.approx(-1.0)  # descending piece


def test_enumerate_unit_pieces_raw_unit():
    con = sawtooth_network(3)
    samples = np.linspace(-0.5, 3.5, 41)[:, None]
    pieces = enumerate_unit_pieces(con.network, 0, 1, samples)
    # unit 1 is max{0, 2x - 2}: active on x > 1 with a single slope
    assert len(pieces) == 1
    assert pieces[0].map.matrix[0, 0] == pytest.approx(2.0)
    assert pieces[0].activation > 0


def test_enumerate_unit_pieces_with_readout():
    con = sawtooth_network(3)
    samples = np.linspace(0.1, 2.9, 29)[:, None]
    pieces = enumerate_unit_pieces(con.network, 0, 0, samples, readout=con.readout)
    slopes = sorted(round(float(p.map.matrix[0, 0]), 6) for p in pieces)
    assert slopes == [-1.0, 1.0, 1.0]
    offsets = {round(float(p.map.offset[0]), 6) for p in pieces}
    assert offsets == {0.0, 2.0, -2.0}


def test_identified_pair_exact_step():
    con = build_abs_net()
    pair = find_identified_pair(con.network, 0, 0, [0.7, 0.2], [-0.9, 0.2],
                                readout=con.readout)
    assert not pair.same_region
    assert np.allclose(pair.point, [-0.7, 0.2], atol=1e-12)
    assert np.allclose(pair.map1.matrix, [[1.0, 0.0]])
    assert np.allclose(pair.map2.matrix, [[-1.0, 0.0]])


def test_identified_pair_same_region_short_circuit():
    con = build_abs_net()
    pair = find_identified_pair(con.network, 0, 0, [0.7, 0.2], [0.4, 0.6],
                                readout=con.readout)
    assert pair.same_region
    assert np.allclose(pair.point, [0.4, 0.6])


def test_identified_pair_requires_active_unit():
    con = build_abs_net()
    with pytest.raises(ValueError):
        find_identified_pair(con.network, 0, 0, [-0.5, 0.2], [0.7, 0.2])


def test_identified_pair_detects_boundary_crossing():
    # adjusting from 0.8 toward the value 0.7 target means walking to 1.2,
    # but the fold flips direction at 1.0 first
    con = sawtooth_with_threshold(3, 0.5)
    with pytest.raises(IdentificationError):
        find_identified_pair(con.network, 1, 0, [3.2], [0.8])


def test_unit_activation_consistency():
    net = random_net(9)
    x = np.array([0.4, -1.1])
    acts = forward(net, x)
    for layer in range(net.depth):
        for unit in range(net.layers[layer].width):
            assert unit_activation(net, layer, unit, x) == acts[layer][unit]
