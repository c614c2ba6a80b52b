"""The package's acceptance suite: one function per criterion.

Each criterion returns a CriterionResult with a deterministic detail
string (no timings, no addresses), so the rendered table is byte-stable
for a fixed seed — which is itself one of the criteria.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import (
    deep_maxout_lower,
    deep_rectifier_lower,
    deep_rectifier_lower_refined,
    rectifier_upper_bound,
    shallow_max_regions,
)
from .constructions import (
    build_abs_net,
    build_catalan_layer,
    build_folding_rectifier_net,
    build_maxout_cones,
    build_maxout_parallel,
    build_rank2_maxout_as_rectifier,
    build_shi_layer,
    sawtooth_network,
)
from .linmap import (
    boundary_clearance,
    find_identified_pair,
    finite_difference_gradient,
    unit_activation,
    unit_linear_map,
)
from .network import ACT_RECTIFIER, Layer, Network, rectifier_structure
from .regions import (
    FeasibilityConfig,
    check_general_position,
    count_regions,
    enumerate_regions,
    oracle_count_by_grid,
)
from .reports import render_region_report
from .constructions import identification_check

# Frozen after the first verified enumeration runs; these witnesses are
# rebuilt with arrangement verification, so the exact values are seed-free.
FOLDING_2D_REGRESSION = 44
FOLDING_REFINED_REGRESSION = 42


@dataclass(frozen=True)
class CriterionResult:
    cid: str
    name: str
    passed: bool
    detail: str


def _cfg_for(con, workers: int) -> FeasibilityConfig:
    if con.spec.count_box is not None:
        return FeasibilityConfig(box=con.spec.count_box, workers=workers)
    return FeasibilityConfig(workers=workers)


def c01_shallow_attainment(seed: int, workers: int) -> CriterionResult:
    hits = 0
    for i in range(20):
        n1 = (i % 8) + 1
        rng = np.random.default_rng([seed, 1, i])
        W = rng.normal(size=(n1, 2))
        b = rng.normal(size=n1)
        gp = check_general_position([(W[r], -b[r]) for r in range(n1)], 2)
        count = count_regions(Network(2, (Layer(W, b, ACT_RECTIFIER),)),
                              FeasibilityConfig(workers=workers))
        if gp and count == shallow_max_regions(2, n1):
            hits += 1
    return CriterionResult("c01", "shallow-attainment", hits == 20,
                           f"{hits}/20 nets in general position at the binomial-sum count")


def c02_upper_bound(seed: int, workers: int) -> CriterionResult:
    violations = 0
    for i in range(50):
        rng = np.random.default_rng([seed, 2, i])
        n0 = 1 + (i % 3)
        depth = int(rng.integers(1, 4))
        widths, total = [], 0
        for _ in range(depth):
            w = int(rng.integers(1, 5))
            if total + w > 10:
                break
            widths.append(w)
            total += w
        if not widths:
            widths = [1]
        fan = n0
        layers = []
        for w in widths:
            layers.append(Layer(rng.normal(size=(w, fan)), rng.normal(size=w), ACT_RECTIFIER))
            fan = w
        count = count_regions(Network(n0, tuple(layers)), FeasibilityConfig(workers=workers))
        if count > rectifier_upper_bound(rectifier_structure(n0, tuple(widths))):
            violations += 1
    return CriterionResult("c02", "upper-bound-2N", violations == 0,
                           f"{violations} violations over 50 random nets")


def c03_folding_1d(seed: int, workers: int) -> CriterionResult:
    con = build_folding_rectifier_net(1, (2, 2), seed=seed)
    bound = deep_rectifier_lower(rectifier_structure(1, (2, 2)))
    count = count_regions(con.network, _cfg_for(con, workers))
    oracle = oracle_count_by_grid(con.network, con.spec.count_box, 2000)
    ok = count == 6 == bound and oracle == 6
    return CriterionResult("c03", "folding-1d-exact", ok,
                           f"count {count}, bound {bound}, grid oracle {oracle}")


def c04_folding_2d(seed: int, workers: int) -> CriterionResult:
    con = build_folding_rectifier_net(2, (4, 4), seed=seed)
    bound = deep_rectifier_lower(rectifier_structure(2, (4, 4)))
    count = count_regions(con.network, _cfg_for(con, workers))
    ok = count >= bound and count == FOLDING_2D_REGRESSION
    return CriterionResult("c04", "folding-2d-regression", ok,
                           f"count {count}, bound {bound}, frozen {FOLDING_2D_REGRESSION}")


def c05_folding_refined(seed: int, workers: int) -> CriterionResult:
    con = build_folding_rectifier_net(2, (5, 3), seed=seed)
    refined = deep_rectifier_lower_refined(rectifier_structure(2, (5, 3)))
    plain = deep_rectifier_lower(rectifier_structure(2, (5, 3)))
    count = count_regions(con.network, _cfg_for(con, workers))
    ok = count >= refined == 42 and count > plain == 28
    return CriterionResult("c05", "folding-remainder-refined", ok,
                           f"count {count} >= refined {refined} > plain {plain}")


def c06_maxout_exact(seed: int, workers: int) -> CriterionResult:
    checks = [
        (build_maxout_parallel(2, 2, 3), 9),
        (build_shi_layer(3), 16),
        (build_catalan_layer(3), 30),
        (build_shi_layer(2), 3),
    ]
    got = [count_regions(c.network, FeasibilityConfig(workers=workers)) for c, _ in checks]
    want = [w for _, w in checks]
    ok = got == want
    return CriterionResult("c06", "maxout-exact-counts", ok,
                           f"parallel/shi3/catalan3/shi2 = {got}, expected {want}")


def c07_maxout_cones(seed: int, workers: int) -> CriterionResult:
    cfg = FeasibilityConfig(workers=workers)
    cones2 = build_maxout_cones(2, 2, 2)
    count2 = count_regions(cones2.network, cfg)
    sim = build_rank2_maxout_as_rectifier(2, 2, seed=seed)
    sim_count = count_regions(sim.rectifier.network, cfg)
    cones3 = build_maxout_cones(2, 2, 3)
    count3 = count_regions(cones3.network, cfg)
    ok = (count2 >= deep_maxout_lower(2, 2, 2) == 8
          and count2 == sim_count
          and count3 >= deep_maxout_lower(2, 2, 3) == 27)
    return CriterionResult("c07", "maxout-cones-bound", ok,
                           f"k=2 count {count2} (sim {sim_count}), k=3 count {count3} >= 27")


def c08_rank2_equivalence(seed: int, workers: int) -> CriterionResult:
    pair = build_rank2_maxout_as_rectifier(2, 2, seed=seed, sample_count=1000)
    ok = pair.certificate <= 1e-9
    return CriterionResult("c08", "rank2-simulation-equivalence", ok,
                           f"max |difference| {pair.certificate:.3e} over 1000 points")


def c09_unit_maps(seed: int, workers: int) -> CriterionResult:
    rng = np.random.default_rng([seed, 9])
    layers = []
    fan = 2
    for w in (4, 4, 3):
        layers.append(Layer(rng.normal(size=(w, fan)), rng.normal(size=w), ACT_RECTIFIER))
        fan = w
    net = Network(2, tuple(layers))
    checked = 0
    worst_grad = 0.0
    worst_val = 0.0
    tries = 0
    while checked < 100 and tries < 2000:
        tries += 1
        x = rng.uniform(-3, 3, size=2)
        if boundary_clearance(net, x) < 1e-5:
            continue
        for li in range(net.depth):
            for j in range(net.layers[li].width):
                m = unit_linear_map(net, li, j, x)
                fd = finite_difference_gradient(net, li, j, x, 1e-6)
                worst_grad = max(worst_grad, float(np.max(np.abs(m.matrix[0] - fd))))
                act = unit_activation(net, li, j, x)
                worst_val = max(worst_val, abs(float(m.matrix[0] @ x + m.offset[0]) - act))
        checked += 1
    ok = checked == 100 and worst_grad <= 1e-6 and worst_val <= 1e-9
    return CriterionResult("c09", "unit-map-extraction", ok,
                           f"100 points, max grad err {worst_grad:.3e}, max value err {worst_val:.3e}")


def c10_identification(seed: int, workers: int) -> CriterionResult:
    ab = build_abs_net()
    quadrants = [((0.1, 0.9), (0.1, 0.9)), ((-0.9, -0.1), (0.1, 0.9)),
                 ((0.1, 0.9), (-0.9, -0.1)), ((-0.9, -0.1), (-0.9, -0.1))]
    abs_ok = identification_check(ab.network, quadrants, probe_count=20,
                                  readout=ab.readout, seed=seed)
    st = sawtooth_network(3)
    saw_ok = identification_check(
        st.network, [((0.05, 0.95),), ((1.05, 1.95),), ((2.05, 2.95),)],
        probe_count=20, readout=st.readout, seed=seed)
    same_region = identification_check(
        ab.network, [((0.1, 0.2), (0.1, 0.2)), ((0.5, 0.6), (0.5, 0.6))],
        probe_count=5, readout=ab.readout, seed=seed)
    pair = find_identified_pair(ab.network, 0, 0, [0.7, 0.2], [-0.9, 0.2],
                                target_tol=1e-10, readout=ab.readout)
    delta = abs(float(ab.value(pair.point)[0]) - float(ab.value(np.array([0.7, 0.2]))[0]))
    point_ok = float(np.max(np.abs(pair.point - np.array([-0.7, 0.2])))) <= 1e-9
    ok = abs_ok and saw_ok and not same_region and point_ok and delta <= 1e-10
    return CriterionResult("c10", "identification-probe", ok,
                           f"quadrants {abs_ok}, intervals {saw_ok}, "
                           f"one-region rejected {not same_region}, pair delta {delta:.1e}")


def _perturbed(net: Network, rng, eps: float = 1e-6) -> Network:
    layers = []
    for layer in net.layers:
        layers.append(Layer(
            layer.weights + rng.uniform(-eps, eps, size=layer.weights.shape),
            layer.bias + rng.uniform(-eps, eps, size=layer.bias.shape),
            layer.activation,
        ))
    return Network(net.input_dim, tuple(layers))


def c11_perturbation_stability(seed: int, workers: int) -> CriterionResult:
    witnesses = [
        build_folding_rectifier_net(1, (2, 2), seed=seed),
        build_folding_rectifier_net(2, (4, 4), seed=seed),
        build_folding_rectifier_net(2, (5, 3), seed=seed),
        build_maxout_parallel(2, 2, 3),
        build_shi_layer(3),
        build_shi_layer(2),
        build_catalan_layer(3),
    ]
    decreases = 0
    trials = 0
    for wi, con in enumerate(witnesses):
        cfg = _cfg_for(con, workers)
        base = count_regions(con.network, cfg)
        for t in range(20):
            rng = np.random.default_rng([seed, 11, wi, t])
            trials += 1
            if count_regions(_perturbed(con.network, rng), cfg) < base:
                decreases += 1
    return CriterionResult("c11", "perturbation-stability", decreases == 0,
                           f"{decreases} count decreases over {trials} perturbed trials")


def c12_determinism(seed: int, workers: int) -> CriterionResult:
    con = build_folding_rectifier_net(2, (4, 4), seed=seed)
    box = con.spec.count_box
    rs1 = enumerate_regions(con.network, FeasibilityConfig(box=box, workers=1))
    rs4 = enumerate_regions(con.network, FeasibilityConfig(box=box, workers=max(4, workers)))
    order_ok = [r.pattern for r in rs1.regions] == [r.pattern for r in rs4.regions]
    report_a = render_region_report(rs1)
    report_b = render_region_report(
        enumerate_regions(con.network, FeasibilityConfig(box=box, workers=1)))
    bytes_ok = report_a == report_b
    ok = order_ok and bytes_ok and rs1.count == rs4.count
    return CriterionResult("c12", "determinism", ok,
                           f"1 vs {max(4, workers)} workers: order identical {order_ok}, "
                           f"re-render byte-identical {bytes_ok}")


ALL_CRITERIA = [
    c01_shallow_attainment,
    c02_upper_bound,
    c03_folding_1d,
    c04_folding_2d,
    c05_folding_refined,
    c06_maxout_exact,
    c07_maxout_cones,
    c08_rank2_equivalence,
    c09_unit_maps,
    c10_identification,
    c11_perturbation_stability,
    c12_determinism,
]


def run_all(seed: int = 0, workers: int = 1) -> list[CriterionResult]:
    return [fn(seed, workers) for fn in ALL_CRITERIA]


def format_table(results) -> str:
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.cid}  {r.name:<30} {r.detail}")
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} criteria passed")
    return "\n".join(lines) + "\n"
