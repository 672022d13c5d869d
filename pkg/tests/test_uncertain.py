"""Instance construction, expected distances, mass bookkeeping, and medians."""

from __future__ import annotations

import random

import numpy as np
import pytest

from conftest import draw_case, square_instance, tri_graph, tri_instance
from ucactus.errors import ValidationError
from ucactus.graph import GraphPoint, validate_cactus
from ucactus.uncertain import (
    Location,
    UncertainPoint,
    build_instance,
    component_sums,
    expected_distance,
    expected_distances,
    group_eccentricity,
    location_point,
    median,
    median_values,
    objective,
)


def _two_vertex_graph():
    return validate_cactus(["x", "y"], [("x", "y", 1.0)])


# ---------------------------------------------------------------------------
# validation


def test_rejects_negative_weight():
    with pytest.raises(ValidationError, match="negative weight"):
        build_instance(
            _two_vertex_graph(), [UncertainPoint("P", -1.0, (Location(0, 1.0),))]
        )


def test_accepts_zero_weight():
    inst = build_instance(
        _two_vertex_graph(), [UncertainPoint("P", 0.0, (Location(0, 1.0),))]
    )
    assert inst.n == 1


def test_rejects_probabilities_not_summing_to_one():
    with pytest.raises(ValidationError, match="probabilities sum to 0.5"):
        build_instance(
            _two_vertex_graph(), [UncertainPoint("P", 1.0, (Location(0, 0.5),))]
        )


def test_rejects_negative_probability():
    with pytest.raises(ValidationError, match="probability -0.25"):
        build_instance(
            _two_vertex_graph(),
            [UncertainPoint("P", 1.0, (Location(0, -0.25), Location(1, 1.25)))],
        )


def test_rejects_unknown_location_vertex():
    with pytest.raises(ValidationError, match="no vertex 5"):
        build_instance(
            _two_vertex_graph(), [UncertainPoint("P", 1.0, (Location(5, 1.0),))]
        )


def test_rejects_duplicate_labels():
    with pytest.raises(ValidationError, match="duplicate point label 'P'"):
        build_instance(
            _two_vertex_graph(),
            [
                UncertainPoint("P", 1.0, (Location(0, 1.0),)),
                UncertainPoint("P", 1.0, (Location(1, 1.0),)),
            ],
        )


def test_rejects_empty_point_list():
    with pytest.raises(ValidationError, match="at least one uncertain point"):
        build_instance(_two_vertex_graph(), [])


# ---------------------------------------------------------------------------
# expected distance and the two-center objective


def test_expected_distance_on_fixed_instance():
    inst = tri_instance()
    g = inst.graph
    assert expected_distance(inst, 0, g.vertex_point(2)) == pytest.approx(1.0)
    assert expected_distance(inst, 0, GraphPoint(0, 0.5)) == pytest.approx(0.5)
    assert expected_distance(inst, 1, g.vertex_point(3)) == 0.0


def test_expected_distances_match_single_queries():
    for seed in range(10):
        inst = draw_case(seed, edge_locations=True)
        rng = random.Random(seed)
        e = rng.choice(inst.graph.edges)
        q = GraphPoint(e.id, rng.uniform(0.0, e.length))
        vec = expected_distances(inst, q)
        for k in range(inst.n):
            assert vec[k] == pytest.approx(expected_distance(inst, k, q), abs=1e-9)


def test_objective_takes_the_better_center_per_point():
    inst = tri_instance()
    assert objective(inst, GraphPoint(0, 0.0), GraphPoint(3, 2.0)) == pytest.approx(0.5)


def test_expected_distance_is_affine_along_bridge_edges():
    for seed in range(15):
        inst = draw_case(seed)
        g = inst.graph
        bridges = [e for e in g.edges if g.cycles.edge_cycle[e.id] is None]
        rng = random.Random(seed)
        for e in rng.choices(bridges, k=3) if bridges else []:
            at_u = expected_distances(inst, g.vertex_point(e.u))
            at_v = expected_distances(inst, g.vertex_point(e.v))
            t = rng.uniform(0.0, e.length)
            frac = t / e.length
            want = (1.0 - frac) * at_u + frac * at_v
            got = expected_distances(inst, GraphPoint(e.id, t))
            assert np.allclose(got, want, atol=1e-9)


# ---------------------------------------------------------------------------
# mass split at a skeleton node


def test_component_sums_on_fixed_instance():
    inst = tri_instance()
    cs = component_sums(inst, 0)
    assert [(c.gate, c.first, set(c.nodes)) for c in cs.comps] == [
        (0, 1, {1}),
        (0, 2, {2}),
    ]
    assert [list(s) for s in cs.sums] == [[0.0, 1.0], [1.0, 0.0]]
    assert list(cs.at_node) == [0.0, 0.0]


def test_component_sums_account_for_all_mass():
    for seed in range(15):
        inst = draw_case(seed)
        for node in range(len(inst.graph.skeleton.nodes)):
            cs = component_sums(inst, node)
            total = np.array(cs.at_node, dtype=float)
            for s in cs.sums:
                total = total + np.asarray(s, dtype=float)
            assert np.allclose(total, 1.0, atol=1e-9)


# ---------------------------------------------------------------------------
# medians


def test_median_on_fixed_instance():
    inst = tri_instance()
    where0, val0 = median(inst, 0)
    assert (where0, val0) == (GraphPoint(0, 0.0), 0.5)
    where1, val1 = median(inst, 1)
    assert (where1, val1) == (GraphPoint(3, 2.0), 0.0)
    assert list(median_values(inst)) == [0.5, 0.0]


def test_median_of_flat_profile_still_achieves_its_value():
    # equal mass on opposite corners of a unit square: every ring position
    # has expected distance exactly 1
    g = square_instance().graph
    inst = build_instance(
        g, [UncertainPoint("P", 1.0, (Location(0, 0.5), Location(2, 0.5)))]
    )
    where, val = median(inst, 0)
    assert val == pytest.approx(1.0, abs=1e-9)
    assert expected_distance(inst, 0, where) == pytest.approx(val, abs=1e-9)


def test_median_is_no_worse_than_sampled_positions():
    for seed in range(10):
        inst = draw_case(seed)
        vals = median_values(inst)
        rng = random.Random(seed)
        for _ in range(20):
            e = rng.choice(inst.graph.edges)
            q = GraphPoint(e.id, rng.uniform(0.0, e.length))
            ed = expected_distances(inst, q)
            assert np.all(vals <= ed + 1e-9)


# ---------------------------------------------------------------------------
# group eccentricity


def test_group_eccentricity_on_fixed_instance():
    inst = tri_instance()
    assert group_eccentricity(inst, [0, 1], 2) == (2.0, 1)
    assert group_eccentricity(inst, [], 2) == (0.0, None)


def test_group_eccentricity_accepts_interior_points():
    # P1 is two units from the pendant midpoint, P2 only one
    inst = tri_instance()
    val, worst = group_eccentricity(inst, [0, 1], GraphPoint(3, 1.0))
    assert val == pytest.approx(2.0)
    assert worst == 0


# ---------------------------------------------------------------------------
# odds and ends


def test_location_point_places_vertex_and_interior_locations():
    g = tri_graph()
    assert location_point(g, Location(3, 1.0)) == g.vertex_point(3)
    p = GraphPoint(3, 0.25)
    assert location_point(g, Location(p, 1.0)) == p


def test_vertex_constrained_flag():
    assert tri_instance().is_vertex_constrained
    inst = draw_case(3, edge_locations=True)
    assert not inst.is_vertex_constrained


def test_node_mass_distributes_each_points_probability():
    for seed in range(10):
        inst = draw_case(seed)
        assert np.allclose(inst.node_mass.sum(axis=0), 1.0, atol=1e-9)


def test_vertex_mass_requires_vertex_constrained_input():
    inst = draw_case(3, edge_locations=True)
    with pytest.raises(ValidationError, match="edge-interior locations"):
        inst.vertex_mass
