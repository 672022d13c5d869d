"""Pure-Python sweep kernels; behavioural twin of the compiled module.

Events describe closed intervals grouped into families: ``side`` 0 opens an
interval, 1 closes it, ``owner`` is the family.  Events must be sorted by
position with opens before closes at equal positions.
"""

from __future__ import annotations

import numpy as np


def stab_one_events(
    pos: np.ndarray, side: np.ndarray, owner: np.ndarray, n_sets: int
) -> float | None:
    """A position contained in every family's union, or None."""
    if n_sets == 0:
        return 0.0
    posl = pos.tolist()
    sidel = side.tolist()
    ownerl = owner.tolist()
    open_cnt = [0] * n_sets
    covered = 0
    for j in range(len(posl)):
        k = ownerl[j]
        if sidel[j] == 0:
            if open_cnt[k] == 0:
                covered += 1
                if covered == n_sets:
                    return posl[j]
            open_cnt[k] += 1
        else:
            open_cnt[k] -= 1
            if open_cnt[k] == 0:
                covered -= 1
    return None


def stab_two_events(
    pos: np.ndarray, side: np.ndarray, owner: np.ndarray, n_sets: int
) -> tuple[float, float] | None:
    """Two positions jointly hitting every family, or None.

    The first stabber can always slide right onto some interval's close
    endpoint, so candidates range over distinct close positions; for each,
    the families it misses must share a single position, found by one sweep.
    """
    if n_sets == 0:
        return (0.0, 0.0)
    posl = pos.tolist()
    sidel = side.tolist()
    ownerl = owner.tolist()
    M = len(posl)
    open_cnt = [0] * n_sets
    hit = [False] * n_sets
    for ci in range(M):
        if sidel[ci] != 1:
            continue
        if ci > 0 and sidel[ci - 1] == 1 and posl[ci - 1] == posl[ci]:
            continue
        x = posl[ci]
        for k in range(n_sets):
            open_cnt[k] = 0
        for j in range(ci):
            if sidel[j] == 0:
                open_cnt[ownerl[j]] += 1
            else:
                open_cnt[ownerl[j]] -= 1
        beta = 0
        for k in range(n_sets):
            h = open_cnt[k] > 0
            hit[k] = h
            if not h:
                beta += 1
        if beta == 0:
            return (x, x)
        alpha = 0
        for j in range(M):
            if hit[ownerl[j]]:
                continue
            if sidel[j] == 0:
                alpha += 1
                if alpha == beta:
                    return (x, posl[j])
            else:
                alpha -= 1
    return None
