#
#  greedyapprox/optimize.py
#  GreedyApproxProject
#
"""Scalar and coordinate-wise minimization helpers."""
import logging
log = logging.getLogger(__name__)

import math
import numpy as np
from scipy.optimize import minimize_scalar

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI2 = (3 - math.sqrt(5)) / 2

GRID_POINTS = 33

def golden_section(func, lo, hi, tol = 1e-10, max_iter = 500):
    """Golden-section search for a minimum of a unimodal function on [lo, hi].

    Returns:
        (x, f(x)): the best point seen, including both end points.
    """
    a, b = float(min(lo, hi)), float(max(lo, hi))
    best = min((func(a), a), (func(b), b))
    h = b - a
    if h <= tol:
        return best[1], best[0]
    c = a + INV_PHI2 * h
    d = a + INV_PHI * h
    yc, yd = func(c), func(d)
    for _ in range(max_iter):
        if h <= tol:
            break
        if yc < yd:
            b, d, yd = d, c, yc
            h = INV_PHI * h
            c = a + INV_PHI2 * h
            yc = func(c)
        else:
            a, c, yc = c, d, yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = func(d)
    best = min(best, (yc, c), (yd, d))
    return best[1], best[0]

def grid_refine(func, batch, lo, hi, points = GRID_POINTS, tol = 1e-10):
    """Minimize a scalar function by a grid scan plus golden refinement.

    Args:
        func: scalar objective.
        batch: vectorized objective evaluating an array of points.
        lo, hi: the search interval.

    Returns:
        (x, f(x)) with the golden refinement bracketed by the grid neighbours
        of the best grid point.
    """
    grid = np.linspace(lo, hi, points)
    values = batch(grid)
    k = int(np.argmin(values))
    a = grid[max(k - 1, 0)]
    b = grid[min(k + 1, points - 1)]
    x, y = golden_section(func, a, b, tol = tol)
    if values[k] <= y:
        return float(grid[k]), float(values[k])
    return x, y

def line_minimum(func, batch, candidates, lo, hi, convex):
    """Minimum of a function of one real variable.

    The candidates (typically the kinks of the objective) are always
    evaluated. Convex objectives are then refined by bounded Brent search on
    [lo, hi], others by :func:`grid_refine`.
    """
    candidates = np.asarray(candidates, dtype = float)
    values = batch(candidates)
    k = int(np.argmin(values))
    best = (float(values[k]), float(candidates[k]))
    if hi - lo <= 1e-15:
        return best[1], best[0]
    if convex:
        res = minimize_scalar(func, bounds = (lo, hi), method = 'bounded',
                              options = {'xatol': 1e-12})
        best = min(best, (float(res.fun), float(res.x)))
    else:
        x, y = grid_refine(func, batch, lo, hi)
        best = min(best, (y, x))
    return best[1], best[0]

def coordinate_descent(objective, directions, x0, line_search, tol = 1e-10, max_iter = 10_000):
    """Cyclic coordinate descent with exact line searches.

    Args:
        objective: maps a parameter vector to its value.
        directions (int): number of coordinates.
        x0 (array): starting parameters.
        line_search: ``line_search(x, j) -> (t, value)`` minimizing along
            coordinate j from x.

    Returns:
        (x, value, iterations)
    """
    x = np.array(x0, dtype = float)
    value = objective(x)
    iterations = 0
    while iterations < max_iter:
        start = value
        for j in range(directions):
            t, v = line_search(x, j)
            iterations += 1
            if v < value:
                x[j] += t
                value = v
            if iterations >= max_iter:
                break
        if start - value <= tol * max(1., start):
            break
    return x, value, iterations
