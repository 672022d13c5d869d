"""Expected-distance profiles along edges and cycles, and interval stabbing.

The stabbing kernels run compiled when the extension built; the pure-Python
twin is the fallback.  ``HAVE_COMPILED_KERNEL`` records which one is live.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ucactus.errors import ValidationError
from ucactus.graph import Cycle, GraphPoint
from ucactus.uncertain import Instance

try:
    from ucactus import _segsweep as _kernel

    HAVE_COMPILED_KERNEL = True
except ImportError:  # extension not built; same behaviour, slower
    from ucactus import _segsweep_py as _kernel

    HAVE_COMPILED_KERNEL = False

Interval = tuple[float, float]


@dataclass(slots=True)
class Profile:
    """Piecewise-linear samples of one point's expected distance along an
    edge (``cyclic`` False, domain [0, length]) or around a cycle's arc
    coordinate (``cyclic`` True, wrapping at the perimeter)."""

    xs: np.ndarray
    ys: np.ndarray
    cyclic: bool

    @property
    def length(self) -> float:
        return float(self.xs[-1])

    def value(self, x: float) -> float:
        if self.cyclic:
            x %= self.length
        return float(np.interp(x, self.xs, self.ys))

    def pieces(self) -> zip:
        return zip(self.xs[:-1], self.ys[:-1], self.xs[1:], self.ys[1:])


@dataclass(slots=True)
class CycleAccess:
    """How mass reaches one cycle: every location enters through a unique
    ring vertex, so each point's profile is ``const + ring-distance mixture``.
    """

    cycle: Cycle
    coords: np.ndarray  # (C,) arc coordinate per ring vertex
    const: np.ndarray  # (n,)
    source_mass: np.ndarray  # (C, n)


def cycle_access(inst: Instance, cycle_id: int) -> CycleAccess:
    cache = inst.__dict__.setdefault("_cycle_access", {})
    if cycle_id not in cache:
        cyc = inst.graph.cycles.cycles[cycle_id]
        ring = np.array(cyc.vertices)
        dist = inst.graph.vertex_distances
        gate_idx = np.argmin(dist[:, ring], axis=1)  # (V,) index into ring
        gate_dist = dist[np.arange(len(gate_idx)), ring[gate_idx]]
        const = gate_dist @ inst.vertex_mass
        source = np.zeros((len(ring), inst.n))
        np.add.at(source, gate_idx, inst.vertex_mass)
        cache[cycle_id] = CycleAccess(cyc, np.array(cyc.pos), const, source)
    return cache[cycle_id]


def cycle_profiles(inst: Instance, cycle_id: int) -> list[Profile]:
    """Profiles of every point around one cycle, breakpoint-exact."""
    cache = inst.__dict__.setdefault("_cycle_profiles", {})
    if cycle_id not in cache:
        acc = cycle_access(inst, cycle_id)
        per = acc.cycle.perimeter
        xs = np.concatenate(
            [acc.coords, (acc.coords + per / 2) % per, [0.0, per]]
        )
        xs = np.unique(xs)
        gaps = np.abs(xs[:, None] - acc.coords[None, :])
        ring = np.minimum(gaps, per - gaps)
        ys = ring @ acc.source_mass + acc.const
        cache[cycle_id] = [
            Profile(xs, ys[:, k], cyclic=True) for k in range(inst.n)
        ]
    return cache[cycle_id]


def edge_profile(inst: Instance, k: int, edge: int) -> Profile:
    """Profile along an out-of-cycle edge; affine, so two samples suffice."""
    e = inst.graph.edges[edge]
    if inst.graph.cycles.edge_cycle[edge] is not None:
        raise ValidationError(f"edge {edge} lies on a cycle")
    ys = np.array([inst.ed_at_vertices[e.u, k], inst.ed_at_vertices[e.v, k]])
    return Profile(np.array([0.0, e.length]), ys, cyclic=False)


def coverage_set(
    profile: Profile, weight: float, lam: float, eps: float
) -> list[Interval]:
    """Closed intervals where the weighted profile stays within ``lam``.

    On cyclic profiles the result is reported in [0, perimeter] without
    joining across the wrap point; a region through the wrap appears as a
    leading and a trailing interval.
    """
    slack = lam + eps * max(1.0, abs(lam))
    if weight == 0.0:
        # weightless points cost nothing anywhere
        return [(0.0, float(profile.xs[-1]))] if slack >= 0.0 else []
    thr = slack / weight
    out: list[Interval] = []
    for x0, y0, x1, y1 in profile.pieces():
        if x1 <= x0:
            continue
        if y0 <= thr and y1 <= thr:
            seg = (x0, x1)
        elif y0 <= thr < y1:
            seg = (x0, x0 + (thr - y0) * (x1 - x0) / (y1 - y0))
        elif y1 <= thr < y0:
            seg = (x0 + (thr - y0) * (x1 - x0) / (y1 - y0), x1)
        else:
            continue
        if out and out[-1][1] >= seg[0]:
            out[-1] = (out[-1][0], max(out[-1][1], seg[1]))
        else:
            out.append(seg)
    return out


def _event_arrays(
    sets: Sequence[Sequence[Interval]],
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    pos: list[float] = []
    side: list[int] = []
    owner: list[int] = []
    for k, ivals in enumerate(sets):
        for a, b in ivals:
            pos.append(a)
            side.append(0)
            owner.append(k)
            pos.append(b)
            side.append(1)
            owner.append(k)
    pos_a = np.array(pos, dtype=np.float64)
    side_a = np.array(side, dtype=np.int8)
    owner_a = np.array(owner, dtype=np.intc)
    order = np.lexsort((side_a, pos_a))
    return pos_a[order], side_a[order], owner_a[order]


def stab_one(sets: Sequence[Sequence[Interval]]) -> float | None:
    """A single position inside every family of closed intervals, or None."""
    pos, side, owner = _event_arrays(sets)
    return _kernel.stab_one_events(pos, side, owner, len(sets))


def stab_two(sets: Sequence[Sequence[Interval]]) -> tuple[float, float] | None:
    """Two positions jointly hitting every family, or None."""
    pos, side, owner = _event_arrays(sets)
    return _kernel.stab_two_events(pos, side, owner, len(sets))


def intersect_families(sets: Sequence[Sequence[Interval]]) -> list[Interval]:
    """Common part of several interval families (each a disjoint union)."""
    n = len(sets)
    if n == 0:
        return []
    pos, side, owner = _event_arrays(sets)
    out: list[Interval] = []
    depth = 0
    start = 0.0
    for p, s in zip(pos.tolist(), side.tolist()):
        if s == 0:
            depth += 1
            if depth == n:
                start = p
        else:
            if depth == n:
                out.append((start, p))
            depth -= 1
    return out
