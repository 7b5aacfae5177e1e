"""Pure numpy implementation of the evaluation kernels."""

from __future__ import annotations

import numpy as np

_CHUNK = 1 << 15


def population_costs(genes, cover, penalty, grade, demand, masks, senior):
    """Preference cost, coverage shortfall and senior excess for each row.

    ``masks`` holds one grade bitmask per row (bit 0 = grade 1). Only nurses
    whose grade bit is set contribute preference cost and supply, and only
    the demand columns whose bit is set are counted.
    """
    rows, n = genes.shape
    grade_bits = (grade.astype(np.int64) - 1)[None, :]
    included = ((masks.astype(np.int64)[:, None] >> grade_bits) & 1).astype(bool)
    pref = np.where(included, penalty[np.arange(n)[None, :], genes], 0).sum(axis=1)

    worked = cover[genes]  # (rows, n, 14)
    supply = np.zeros((rows, 3, 14), dtype=np.int64)
    for g in range(3):
        members = included & (grade[None, :] == g + 1)
        supply[:, g, :] = (worked * members[:, :, None]).sum(axis=1)
    supply = np.cumsum(supply, axis=1)
    deficit = np.maximum(demand.T[None, :, :] - supply, 0).sum(axis=2)
    active_rows = (masks.astype(np.int64)[:, None] >> np.arange(3)[None, :]) & 1
    shortfall = (deficit * active_rows).sum(axis=1)

    senior_on = senior.astype(np.int64)[None, :]
    sunday = ((worked[:, :, 0] | worked[:, :, 7]) * senior_on).sum(axis=1)
    saturday = ((worked[:, :, 6] | worked[:, :, 13]) * senior_on).sum(axis=1)
    excess = np.maximum(sunday - 1, 0) + np.maximum(saturday - 1, 0)
    return pref.astype(np.int64), shortfall.astype(np.int64), excess.astype(np.int64)


def enumerate_optimum(table, sizes, cover, penalty, grade, demand, senior, demand_weight, senior_weight):
    """Exhaustive search over all gene combinations, last nurse fastest.

    Returns ``(best_rank, best_total, feasible_rank, feasible_pref, count)``
    where ranks are positions in the enumeration order and ``-1`` marks a
    missing feasible assignment. Ties keep the earliest rank.
    """
    n = len(sizes)
    total = int(np.prod(sizes, dtype=object))
    strides = np.ones(n, dtype=np.int64)
    for i in range(n - 2, -1, -1):
        strides[i] = strides[i + 1] * sizes[i + 1]
    masks_full = None
    best = (-1, None)
    feasible = (-1, None)
    for start in range(0, total, _CHUNK):
        ranks = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        digits = (ranks[:, None] // strides[None, :]) % sizes[None, :]
        genes = table[np.arange(n)[None, :], digits]
        if masks_full is None or len(masks_full) != len(ranks):
            masks_full = np.full(len(ranks), 7, dtype=np.uint8)
        pref, short, excess = population_costs(genes, cover, penalty, grade, demand, masks_full, senior)
        fitness = pref + demand_weight * short + senior_weight * excess
        pos = int(np.argmin(fitness))
        if best[1] is None or fitness[pos] < best[1]:
            best = (start + pos, int(fitness[pos]))
        ok = np.flatnonzero(short == 0)
        if len(ok):
            pos = int(ok[np.argmin(pref[ok])])
            if feasible[1] is None or pref[pos] < feasible[1]:
                feasible = (start + pos, int(pref[pos]))
    return best[0], best[1], feasible[0], (-1 if feasible[1] is None else feasible[1]), total
