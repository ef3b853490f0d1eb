import logging
import math

import numpy as np
from scipy.optimize import linprog

from gid_bribery.errors import Infeasible

logger = logging.getLogger(__name__)


# /////////////////////////////////////////////////////////////////////////////
# Exact 0/1 covering program: min w.x subject to A x >= b, x in {0,1}
def covering_bnb(weights, rows, thresholds):
    """
    Solve a 0/1 covering program exactly by branch-and-bound.

    - Upper bound from a greedy cover with redundant variables removed
    - Lower bound at every node: the largest, over open rows, sum of the
      cheapest free weights that row still needs
    - Root lower bound from the LP relaxation

    Parameters:
    weights : sequence of positive ints, one per variable
    rows : 0/1 matrix (one row per constraint, one column per variable)
    thresholds : sequence of ints, one per row; values <= 0 are always met

    Returns:
    (cost, assignment) where assignment is a tuple of 0/1 per variable

    Raises:
    Infeasible if some threshold exceeds its row sum

    Dependencies:
    - numpy
    - scipy.optimize.linprog (HiGHS)
    """
    w = np.asarray(weights, dtype=np.int64).reshape(-1)
    need = np.asarray(thresholds, dtype=np.int64).reshape(-1)
    k, m = w.size, need.size
    a = np.asarray(rows, dtype=np.int64).reshape(m, k)

    if np.any(w <= 0):
        raise ValueError("Covering weights must be positive")
    short = np.flatnonzero(need > a.sum(axis=1))
    if short.size:
        raise Infeasible(f"Rows {short.tolist()} ask for more than they can cover")
    need = np.maximum(need, 0)
    if not need.any():
        return 0, (0,) * k

    best_cost, best_x = _greedy_cover(w, a, need)
    root_bound = max(_lp_bound(w, a, need), _row_bound(w, a, need, np.full(k, -1)))
    logger.debug("covering: %d vars, %d rows, greedy %d, root bound %d", k, m, best_cost, root_bound)
    if root_bound >= best_cost:
        return int(best_cost), tuple(int(v) for v in best_x)

    order = np.lexsort((np.arange(k), w))
    fixed = np.full(k, -1, dtype=np.int64)
    nodes = 0

    def search(deficit, cost):
        nonlocal best_cost, best_x, nodes
        nodes += 1
        if cost >= best_cost:
            return
        open_rows = np.flatnonzero(deficit > 0)
        if not open_rows.size:
            best_cost, best_x = cost, (fixed == 1).astype(np.int64)
            return
        if cost + _row_bound(w, a, deficit, fixed) >= best_cost:
            return

        free = fixed < 0
        slack = (a[open_rows] * free).sum(axis=1) - deficit[open_rows]
        if slack.min() < 0:
            return
        row = open_rows[int(np.argmin(slack))]
        candidates = [v for v in order if free[v] and a[row, v]]
        v = candidates[0]

        fixed[v] = 1
        search(deficit - a[:, v], cost + int(w[v]))
        fixed[v] = 0
        search(deficit, cost)
        fixed[v] = -1

    search(need.copy(), 0)
    logger.debug("covering: optimum %d after %d nodes", best_cost, nodes)
    return int(best_cost), tuple(int(v) for v in best_x)


def _row_bound(w, a, deficit, fixed):
    free = fixed < 0
    bound = 0
    for r in np.flatnonzero(deficit > 0):
        pool = np.sort(w[free & (a[r] == 1)])
        d = int(deficit[r])
        if pool.size < d:
            return math.inf
        bound = max(bound, int(pool[:d].sum()))
    return bound


def _lp_bound(w, a, need):
    res = linprog(c=w, A_ub=-a, b_ub=-need, bounds=(0, 1), method="highs")
    if res.status != 0:
        return 0
    # the tolerance keeps an integral LP optimum from rounding up
    return int(math.ceil(res.fun - 1e-7))


def _greedy_cover(w, a, need):
    """Chvatal-style greedy followed by removal of redundant variables."""
    k = w.size
    x = np.zeros(k, dtype=np.int64)
    deficit = need.copy()
    while (deficit > 0).any():
        gain = (a * (deficit > 0)[:, None]).sum(axis=0) * (1 - x)
        ratio = np.where(gain > 0, gain / w, -1.0)
        v = int(np.argmax(ratio))
        x[v] = 1
        deficit = deficit - a[:, v]

    for v in sorted(np.flatnonzero(x), key=lambda i: -int(w[i])):
        x[v] = 0
        if ((a @ x) < need).any():
            x[v] = 1
    return int(w @ x), x
