"""Shared fixtures: small hand-checked instances and a seeded case drawer."""

from __future__ import annotations

import random

import pytest

from ucactus.graph import CactusGraph, validate_cactus
from ucactus.io import random_instance
from ucactus.uncertain import Instance, Location, UncertainPoint, build_instance


def tri_graph() -> CactusGraph:
    """Unit triangle a-b-c with a pendant edge (c, d) of length 2."""
    return validate_cactus(
        ["a", "b", "c", "d"],
        [("a", "b", 1.0), ("b", "c", 1.0), ("c", "a", 1.0), ("c", "d", 2.0)],
    )


def tri_instance() -> Instance:
    """Two unit-weight points on the triangle-plus-pendant graph.

    P1 sits on a or b with equal chance; P2 is surely at d.  The optimum
    covering radius is 0.5: one center at d, the other at a (or b).
    """
    return build_instance(
        tri_graph(),
        [
            UncertainPoint("P1", 1.0, (Location(0, 0.5), Location(1, 0.5))),
            UncertainPoint("P2", 1.0, (Location(3, 1.0),)),
        ],
    )


def square_instance() -> Instance:
    """Unit 4-cycle with one certain point per corner; optimum is 0.5."""
    g = validate_cactus(
        ["a", "b", "c", "d"],
        [("a", "b", 1.0), ("b", "c", 1.0), ("c", "d", 1.0), ("d", "a", 1.0)],
    )
    pts = [
        UncertainPoint(f"Q{v}", 1.0, (Location(v, 1.0),)) for v in range(4)
    ]
    return build_instance(g, pts)


@pytest.fixture
def tri() -> Instance:
    return tri_instance()


@pytest.fixture
def square() -> Instance:
    return square_instance()


def draw_case(
    seed: int,
    *,
    max_vertices: int = 12,
    max_cycles: int = 3,
    max_points: int = 5,
    max_locations: int = 3,
    **extra,
) -> Instance:
    """A random instance with sizes themselves drawn from ``seed``."""
    rng = random.Random(seed)
    n_vertices = rng.randint(3, max_vertices)
    n_cycles = rng.randint(0, min(max_cycles, (n_vertices - 1) // 2))
    return random_instance(
        seed,
        n_vertices=n_vertices,
        n_cycles=n_cycles,
        n_points=rng.randint(1, max_points),
        n_locations=rng.randint(1, max_locations),
        **extra,
    )
