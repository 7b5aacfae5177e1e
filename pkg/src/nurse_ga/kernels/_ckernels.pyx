# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled evaluation kernels; same contract as ``_pykernels``."""

import numpy as np

from libc.stdint cimport int8_t, int64_t, uint8_t


cdef inline void _row_costs(
    const int64_t* genes,
    Py_ssize_t n,
    const uint8_t[:, ::1] cover,
    const int64_t[:, ::1] penalty,
    const int8_t[::1] grade,
    const int64_t[:, ::1] demand,
    int mask,
    const uint8_t[::1] senior,
    int64_t* out,
) noexcept nogil:
    cdef int64_t supply[3][14]
    cdef Py_ssize_t i, k, q
    cdef int64_t pref = 0, short = 0, sunday = 0, saturday = 0, running, need
    cdef int64_t j
    cdef int g
    for q in range(3):
        for k in range(14):
            supply[q][k] = 0
    for i in range(n):
        j = genes[i]
        g = grade[i] - 1
        if senior[i]:
            if cover[j, 0] or cover[j, 7]:
                sunday += 1
            if cover[j, 6] or cover[j, 13]:
                saturday += 1
        if not (mask >> g) & 1:
            continue
        pref += penalty[i, j]
        for k in range(14):
            supply[g][k] += cover[j, k]
    for k in range(14):
        running = 0
        for q in range(3):
            running += supply[q][k]
            if (mask >> q) & 1:
                need = demand[k, q]
                if need > running:
                    short += need - running
    out[0] = pref
    out[1] = short
    out[2] = (sunday - 1 if sunday > 1 else 0) + (saturday - 1 if saturday > 1 else 0)


def population_costs(
    const int64_t[:, ::1] genes,
    const uint8_t[:, ::1] cover,
    const int64_t[:, ::1] penalty,
    const int8_t[::1] grade,
    const int64_t[:, ::1] demand,
    const uint8_t[::1] masks,
    const uint8_t[::1] senior,
):
    cdef Py_ssize_t rows = genes.shape[0], n = genes.shape[1], r
    pref = np.empty(rows, dtype=np.int64)
    short = np.empty(rows, dtype=np.int64)
    excess = np.empty(rows, dtype=np.int64)
    cdef int64_t[::1] pv = pref, sv = short, ev = excess
    cdef int64_t out[3]
    with nogil:
        for r in range(rows):
            _row_costs(&genes[r, 0], n, cover, penalty, grade, demand, masks[r], senior, out)
            pv[r] = out[0]
            sv[r] = out[1]
            ev[r] = out[2]
    return pref, short, excess


def enumerate_optimum(
    const int64_t[:, ::1] table,
    const int64_t[::1] sizes,
    const uint8_t[:, ::1] cover,
    const int64_t[:, ::1] penalty,
    const int8_t[::1] grade,
    const int64_t[:, ::1] demand,
    const uint8_t[::1] senior,
    int64_t demand_weight,
    int64_t senior_weight,
):
    cdef Py_ssize_t n = sizes.shape[0], i
    cdef int64_t[::1] digits = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] genes = np.empty(n, dtype=np.int64)
    cdef int64_t out[3]
    cdef int64_t rank = 0, best_rank = -1, best_total = 0, feas_rank = -1, feas_pref = 0, fitness
    cdef bint done = n == 0
    for i in range(n):
        genes[i] = table[i, 0]
    with nogil:
        while not done:
            _row_costs(&genes[0], n, cover, penalty, grade, demand, 7, senior, out)
            fitness = out[0] + demand_weight * out[1] + senior_weight * out[2]
            if best_rank < 0 or fitness < best_total:
                best_rank = rank
                best_total = fitness
            if out[1] == 0 and (feas_rank < 0 or out[0] < feas_pref):
                feas_rank = rank
                feas_pref = out[0]
            rank += 1
            i = n - 1
            while True:
                digits[i] += 1
                if digits[i] < sizes[i]:
                    genes[i] = table[i, digits[i]]
                    break
                digits[i] = 0
                genes[i] = table[i, 0]
                if i == 0:
                    done = True
                    break
                i -= 1
    return best_rank, best_total, feas_rank, feas_pref, rank
