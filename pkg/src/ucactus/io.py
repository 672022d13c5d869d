"""JSON input/output and the seeded instance generator.

File schema::

    {
      "vertices": ["a", "b", ...],
      "edges": [["a", "b", 2.0], ...],
      "uncertain_points": [
        {"id": "P1", "weight": 1.0,
         "locations": [["a", 0.5], [["a", "b", 0.75], 0.5]]}
      ],
      "eps": 1e-9
    }

A location is a vertex name, or ``[u, v, t]`` for the point ``t`` units from
``u`` along edge ``(u, v)``.  ``eps`` is optional.
"""

from __future__ import annotations

import json
import random
from pathlib import Path
from typing import Any

from ucactus.errors import FormatError, InfeasibleParams
from ucactus.graph import CactusGraph, GraphPoint, validate_cactus
from ucactus.uncertain import (
    Instance,
    Location,
    UncertainPoint,
    build_instance,
)


def _fmt(x: float) -> float:
    """Round-trip through %.12g so emitted files are stable across runs."""
    return float(f"{float(x):.12g}")


def parse_instance(data: Any) -> Instance:
    if not isinstance(data, dict):
        raise FormatError("top level must be an object")
    try:
        names = data["vertices"]
        edge_rows = data["edges"]
        point_rows = data["uncertain_points"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"missing required key: {exc}") from exc
    if not isinstance(names, list) or not all(isinstance(s, str) for s in names):
        raise FormatError("vertices must be a list of names")

    spec = []
    for row in edge_rows:
        if not isinstance(row, (list, tuple)) or len(row) != 3:
            raise FormatError(f"bad edge entry {row!r}")
        u, v, length = row
        if not isinstance(u, str) or not isinstance(v, str):
            raise FormatError(f"bad edge entry {row!r}")
        spec.append((u, v, float(length)))
    graph = validate_cactus(names, spec)

    points = []
    for row in point_rows:
        if not isinstance(row, dict):
            raise FormatError(f"bad uncertain point entry {row!r}")
        try:
            label = row["id"]
            weight = float(row["weight"])
            loc_rows = row["locations"]
        except (KeyError, TypeError) as exc:
            raise FormatError(f"uncertain point missing key: {exc}") from exc
        locs = []
        for pair in loc_rows:
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise FormatError(f"bad location entry {pair!r}")
            where, prob = pair
            locs.append(Location(_parse_place(graph, where), float(prob)))
        points.append(UncertainPoint(str(label), weight, tuple(locs)))

    eps = data.get("eps")
    return build_instance(graph, points, None if eps is None else float(eps))


def _parse_place(graph: CactusGraph, where: Any) -> int | GraphPoint:
    if isinstance(where, str):
        if where not in graph.vertex_id:
            raise FormatError(f"unknown vertex {where!r}")
        return graph.vertex_id[where]
    if not isinstance(where, (list, tuple)) or len(where) != 3:
        raise FormatError(f"bad location place {where!r}")
    u_name, v_name, t = where
    try:
        u, v = graph.vertex_id[u_name], graph.vertex_id[v_name]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad location place {where!r}") from exc
    for eid, other in graph.adj[u]:
        if other == v:
            e = graph.edges[eid]
            t = float(t)
            if not 0.0 <= t <= e.length:
                raise FormatError(f"offset {t} outside edge {u_name!r}-{v_name!r}")
            return GraphPoint(eid, t if e.u == u else e.length - t)
    raise FormatError(f"no edge {u_name!r}-{v_name!r}")


def read_instance(path: str | Path) -> Instance:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    return parse_instance(data)


def place_to_json(graph: CactusGraph, place: int | GraphPoint) -> Any:
    if isinstance(place, int):
        return graph.names[place]
    v = graph.point_on_vertex(place)
    if v is not None:
        return graph.names[v]
    e = graph.edges[place.edge]
    return [graph.names[e.u], graph.names[e.v], _fmt(place.t)]


def instance_to_dict(inst: Instance) -> dict:
    g = inst.graph
    return {
        "vertices": list(g.names),
        "edges": [[g.names[e.u], g.names[e.v], _fmt(e.length)] for e in g.edges],
        "uncertain_points": [
            {
                "id": p.label,
                "weight": _fmt(p.weight),
                "locations": [
                    [place_to_json(g, loc.place), _fmt(loc.prob)]
                    for loc in p.locations
                ],
            }
            for p in inst.points
        ],
        "eps": _fmt(inst.eps),
    }


def write_instance(inst: Instance, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_dict(inst), fh, indent=2)
        fh.write("\n")


def random_instance(
    seed: int,
    *,
    n_vertices: int = 12,
    n_cycles: int = 2,
    n_points: int = 4,
    n_locations: int = 3,
    prob_denominator: int = 8,
    edge_locations: bool = False,
    eps: float | None = None,
) -> Instance:
    """Seeded random cactus instance; identical arguments give identical
    output.  Probabilities are multiples of ``1/prob_denominator``."""
    if n_vertices < 1 or n_points < 1 or n_locations < 1 or n_cycles < 0:
        raise InfeasibleParams("all size parameters must be positive")
    if n_locations > prob_denominator:
        raise InfeasibleParams("need n_locations <= prob_denominator")
    if n_vertices < 1 + 2 * n_cycles:
        raise InfeasibleParams("each cycle needs at least two vertices of its own")

    rng = random.Random(seed)
    names = [f"v{i}" for i in range(n_vertices)]
    spec: list[tuple[str, str, float]] = []
    used = [0]
    free = list(range(1, n_vertices))
    rng.shuffle(free)

    for i in range(n_cycles):
        # leave two fresh vertices for every cycle still to come
        avail = len(free) - 2 * (n_cycles - i - 1)
        take = min(rng.randint(2, 5), avail)
        ring = [rng.choice(used)] + [free.pop() for _ in range(take)]
        for a, b in zip(ring, ring[1:] + ring[:1]):
            spec.append((names[a], names[b], float(rng.randint(1, 9))))
        used.extend(ring[1:])
    while free:
        v = free.pop()
        spec.append((names[rng.choice(used)], names[v], float(rng.randint(1, 9))))
        used.append(v)
    graph = validate_cactus(names, spec)

    denom = prob_denominator
    points = []
    for k in range(n_points):
        m = n_locations
        if m <= n_vertices:
            verts = rng.sample(range(n_vertices), m)
        else:
            verts = rng.sample(range(n_vertices), n_vertices) + [
                rng.randrange(n_vertices) for _ in range(m - n_vertices)
            ]
        cuts = sorted(rng.sample(range(1, denom), m - 1)) if m > 1 else []
        bounds = [0] + cuts + [denom]
        locs = []
        for j, v in enumerate(verts):
            prob = (bounds[j + 1] - bounds[j]) / denom
            place: int | GraphPoint = v
            if edge_locations and spec and rng.random() < 0.35:
                eid = rng.randrange(len(graph.edges))
                e = graph.edges[eid]
                place = GraphPoint(eid, round(rng.uniform(0.0, e.length), 3))
            locs.append(Location(place, prob))
        points.append(UncertainPoint(f"P{k + 1}", float(rng.randint(1, 5)), tuple(locs)))
    return build_instance(graph, points, eps)
