#
#  greedyapprox/tga.py
#  GreedyApproxProject
#
"""The thresholding greedy algorithm.

Coefficient magnitudes are grouped into tie levels (relative tolerance
1e-9); the greedy ordering sorts by level and then by index. Greedy sets
are enumerated over the whole tie level at the threshold.
"""
import logging
log = logging.getLogger(__name__)

import itertools
import numpy as np
from collections import namedtuple

from .spaces import ZERO_TOL
from .basis import coefficients, reconstruct, check_indices

TIE_RTOL = 1e-9

class TGAError(Exception):
    pass

GreedySetFamily = namedtuple('GreedySetFamily', 'm sets')

def magnitudes(coeffs):
    mags = np.abs(np.asarray(coeffs))
    mags[mags <= ZERO_TOL] = 0
    return mags

def tie_levels(mags):
    """Tie level of every index; level 0 holds the largest magnitudes.

    A level starts at its largest magnitude and absorbs every following
    magnitude within relative tolerance of it.
    """
    order = sorted(range(len(mags)), key = lambda i: (-mags[i], i))
    levels = [0] * len(mags)
    level, lead = 0, None
    for i in order:
        if lead is None:
            lead = mags[i]
        elif lead - mags[i] > TIE_RTOL * lead:
            level += 1
            lead = mags[i]
        levels[i] = level
    return levels

def ordering_of(coeffs):
    levels = tie_levels(magnitudes(coeffs))
    return tuple(sorted(range(len(levels)), key = lambda i: (levels[i], i)))

def _check_m(m, dim, lower = 0):
    if not lower <= m <= dim:
        raise TGAError(f'm={m} outside [{lower}, {dim}].')

def greedy_sets_of(coeffs, m):
    """ All greedy sets of cardinality m, lexicographically sorted. """
    n = len(coeffs)
    _check_m(m, n)
    if m == 0:
        return [()]
    levels = tie_levels(magnitudes(coeffs))
    pi = sorted(range(n), key = lambda i: (levels[i], i))
    edge = levels[pi[m - 1]]
    must = [i for i in range(n) if levels[i] < edge]
    tied = [i for i in range(n) if levels[i] == edge]
    return [tuple(sorted(must + list(extra)))
            for extra in itertools.combinations(tied, m - len(must))]

def threshold_of(coeffs, m):
    """ The m-th largest magnitude; the minimum over its tie level. """
    n = len(coeffs)
    _check_m(m, n, lower = 1)
    mags = magnitudes(coeffs)
    levels = tie_levels(mags)
    pi = sorted(range(n), key = lambda i: (levels[i], i))
    edge = levels[pi[m - 1]]
    return float(min(mags[i] for i in range(n) if levels[i] == edge))

def greedy_ordering(basis, f):
    """The greedy ordering pi of f.

    Decreasing coefficient magnitude, ties broken by increasing index; indices
    outside the support follow in increasing order.

    Example:
        coefficients (0.5, -2, 2, 1) give pi = (1, 2, 3, 0).
    """
    return ordering_of(coefficients(basis, f))

def project(basis, f, A):
    """ P_A f = sum_{n in A} x_n^*(f) x_n. """
    A = check_indices(basis, A)
    c = coefficients(basis, f)
    mask = np.zeros(basis.dim)
    mask[list(A)] = 1
    return reconstruct(basis, c * mask)

def greedy_sum(basis, f, m):
    """ G_m f, the projection onto the first m indices of the greedy ordering. """
    _check_m(m, basis.dim)
    return project(basis, f, greedy_ordering(basis, f)[:m])

def greedy_sets(basis, f, m):
    """ The exhaustive family of greedy sets of f of cardinality m. """
    return GreedySetFamily(m, greedy_sets_of(coefficients(basis, f), m))

def mth_threshold(basis, f, m):
    """ alpha = min_{n in A_m(f)} |x_n^*(f)|, 1 <= m <= dim. """
    return threshold_of(coefficients(basis, f), m)
