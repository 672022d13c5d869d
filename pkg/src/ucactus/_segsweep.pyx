# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sweep kernels; behavioural twin of ``_segsweep_py``.

Events describe closed intervals grouped into families: ``side`` 0 opens an
interval, 1 closes it, ``owner`` is the family.  Events must be sorted by
position with opens before closes at equal positions.
"""

import numpy as np


def stab_one_events(double[::1] pos, signed char[::1] side, int[::1] owner,
                    int n_sets):
    """A position contained in every family's union, or None."""
    cdef Py_ssize_t M = pos.shape[0]
    cdef Py_ssize_t j
    cdef int k, covered = 0
    if n_sets == 0:
        return 0.0
    cdef int[::1] open_cnt = np.zeros(n_sets, dtype=np.intc)
    for j in range(M):
        k = owner[j]
        if side[j] == 0:
            if open_cnt[k] == 0:
                covered += 1
                if covered == n_sets:
                    return pos[j]
            open_cnt[k] += 1
        else:
            open_cnt[k] -= 1
            if open_cnt[k] == 0:
                covered -= 1
    return None


def stab_two_events(double[::1] pos, signed char[::1] side, int[::1] owner,
                    int n_sets):
    """Two positions jointly hitting every family, or None.

    The first stabber can always slide right onto some interval's close
    endpoint, so candidates range over distinct close positions; for each,
    the families it misses must share a single position, found by one sweep.
    """
    cdef Py_ssize_t M = pos.shape[0]
    cdef Py_ssize_t ci, j
    cdef int k, beta, alpha
    cdef double x
    if n_sets == 0:
        return (0.0, 0.0)
    cdef int[::1] open_cnt = np.zeros(n_sets, dtype=np.intc)
    cdef signed char[::1] hit = np.zeros(n_sets, dtype=np.int8)
    for ci in range(M):
        if side[ci] != 1:
            continue
        if ci > 0 and side[ci - 1] == 1 and pos[ci - 1] == pos[ci]:
            continue
        x = pos[ci]
        for k in range(n_sets):
            open_cnt[k] = 0
        for j in range(ci):
            if side[j] == 0:
                open_cnt[owner[j]] += 1
            else:
                open_cnt[owner[j]] -= 1
        beta = 0
        for k in range(n_sets):
            if open_cnt[k] > 0:
                hit[k] = 1
            else:
                hit[k] = 0
                beta += 1
        if beta == 0:
            return (x, x)
        alpha = 0
        for j in range(M):
            if hit[owner[j]]:
                continue
            if side[j] == 0:
                alpha += 1
                if alpha == beta:
                    return (x, pos[j])
            else:
                alpha -= 1
    return None
