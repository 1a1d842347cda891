#
#  greedyapprox/errors.py
#  GreedyApproxProject
#
"""Approximation errors of m-term approximation.

* sigma_m: best m-term error with free coefficients.
* rho_m / varrho_m: best error by a single multiple alpha 1_{eps,A} of a
  signed / unsigned indicator, alpha the m-th threshold.
* best_projection_error: best error by a coordinate projection P_B, |B| <= m.

Infima over index sets and sign patterns are exhaustive. The inner
minimization of sigma_m is exact for coordinate norms (projection), q = 2
(least squares) and real q <= 1 (vertices of the residual hyperplane
arrangement); everything else runs multistart coordinate descent.
"""
import logging
log = logging.getLogger(__name__)

import math
import itertools
import numpy as np
from collections import namedtuple

from .spaces import (SearchBudgetError, ZERO_TOL,
                     as_budget, eval_norm, net_spacing)
from .basis import coefficients, reconstruct
from .tga import threshold_of, TGAError
from .optimize import coordinate_descent, line_minimum

EXHAUSTIVE = 'Exhaustive'
GRIDREFINE = 'GridRefine'

MAX_SEARCH_DIM = 16
MULTISTARTS = 8
DESCENT_TOL = 1e-10
DESCENT_MAXITER = 10_000
BATCH_ROWS = 4096

Witness = namedtuple('Witness', 'indices signs coeffs')
ErrorValue = namedtuple('ErrorValue', 'value witness method resolution')
ErrorProfile = namedtuple('ErrorProfile', 'coeffs sigma rho varrho bpe')

def candidate(basis, witness):
    """ The approximant sum_{j in A} coeffs_j x_j described by a witness. """
    c = np.zeros(basis.dim, dtype = basis.space.dtype)
    if witness.indices:
        c[list(witness.indices)] = witness.coeffs
    return reconstruct(basis, c)

def is_coordinate_norm(basis):
    """ True when the norm is a weighted lq norm and X is diagonal. """
    X = basis.X
    return basis.space.norm.kind == 'weightedLq' and \
            np.count_nonzero(X - np.diag(np.diag(X))) == 0

def _check_m(basis, m, lower = 0):
    if not lower <= m <= basis.dim:
        raise TGAError(f'm={m} outside [{lower}, {basis.dim}].')

def _check_dim(basis):
    if basis.dim > MAX_SEARCH_DIM:
        raise SearchBudgetError(f'Exhaustive search is limited to dimension {MAX_SEARCH_DIM}.')

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~ #
# Inner minimization over coefficients   #
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~ #

def _arrangement_vertices(LB, Lf):
    """ Solutions a of k residual coordinates (Lf - LB a)_S = 0, |S| = k. """
    n, k = LB.shape
    rows = np.array(list(itertools.combinations(range(n), k)))
    mats = LB[rows]
    rhs = Lf[rows]
    dets = np.linalg.det(mats)
    scale = max(float(np.max(np.abs(LB))), ZERO_TOL) ** k
    ok = np.abs(dets) > 1e-12 * scale
    if not np.any(ok):
        return np.zeros((0, k))
    return np.linalg.solve(mats[ok], rhs[ok][..., np.newaxis])[..., 0]

def _descent(basis, f, B, start, A, budget):
    space = basis.space
    k = len(A)
    L = space.norm.matrix
    cplx = space.is_complex
    directions = [B[:, j] for j in range(k)]
    if cplx:
        directions += [1j * B[:, j] for j in range(k)]
    Ldirs = [d if L is None else L @ d for d in directions]
    convex = space.norm.q >= 1

    def to_coeffs(x):
        return x[:k] + 1j * x[k:] if cplx else x

    def objective(x):
        return eval_norm(space, f - B @ to_coeffs(x), budget)

    def line_search(x, j):
        r = f - B @ to_coeffs(x)
        d = directions[j]
        Lr = r if L is None else L @ r
        Ld = Ldirs[j]
        nz = np.abs(Ld) > ZERO_TOL
        if not np.any(nz):
            return 0., objective(x)
        kinks = np.real(Lr[nz] / Ld[nz])
        phi = lambda t: eval_norm(space, r - t * d, budget)
        batch = lambda ts: eval_norm(space, r[np.newaxis, :] - np.outer(ts, d), budget)
        return line_minimum(phi, batch, np.append(kinks, 0.),
                            float(kinks.min()), float(kinks.max()), convex)

    x0 = np.concatenate([start.real, start.imag]) if cplx else np.array(start, dtype = float)
    scale = max(float(np.max(np.abs(x0))), 1.)
    rng = np.random.default_rng([basis.dim, k] + list(A))
    starts = [x0] + [x0 + scale * rng.standard_normal(len(x0)) for _ in range(MULTISTARTS - 1)]

    best = None
    for x in starts:
        x, value, iterations = coordinate_descent(objective, len(x0), x, line_search,
                                                  tol = DESCENT_TOL, max_iter = DESCENT_MAXITER)
        if best is None or value < best[0]:
            best = (value, to_coeffs(x))
    return best

def _inner_minimum(basis, f, c, A, coordinate, budget):
    """Returns (value, coeffs, exact) for min_a ||f - sum_{j in A} a_j x_j||."""
    space = basis.space
    if not A:
        return eval_norm(space, f, budget), np.zeros(0, dtype = space.dtype), True
    B = basis.X[:, list(A)]
    start = c[list(A)]
    value = eval_norm(space, f - B @ start, budget)
    if coordinate:
        return value, start, True

    q = space.norm.q
    L = space.norm.matrix
    LB = B if L is None else L @ B
    Lf = f if L is None else L @ f
    if q == 2:
        w = np.sqrt(space.norm.weights)
        a = np.linalg.lstsq(w[:, np.newaxis] * LB, w * Lf, rcond = None)[0]
        v = eval_norm(space, f - B @ a, budget)
        return (v, a, True) if v < value else (value, start, True)
    if q <= 1 and not space.is_complex:
        vertices = _arrangement_vertices(LB, Lf)
        if len(vertices):
            values = eval_norm(space, f[np.newaxis, :] - vertices @ B.T, budget)
            i = int(np.argmin(values))
            if values[i] < value:
                return float(values[i]), vertices[i], True
        return value, start, True

    v, a = _descent(basis, f, B, start, A, budget)
    return (v, a, False) if v < value else (value, start, False)

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~ #
# Exhaustive profile helpers   #
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~ #

def _set_minima(basis, f, c, max_k, budget):
    _check_dim(basis)
    n = basis.dim
    budget.require(sum(math.comb(n, k) for k in range(max_k + 1)), 'best m-term search')
    coordinate = is_coordinate_norm(basis)
    minima, exact = [], True
    for k in range(max_k + 1):
        best = None
        for A in itertools.combinations(range(n), k):
            value, a, ex = _inner_minimum(basis, f, c, A, coordinate, budget)
            exact = exact and ex
            if best is None or value < best[0]:
                best = (value, A, a)
        minima.append(best)
    return minima, exact

def _projection_profile(basis, f, c, max_m, budget):
    """ Cumulative best projection errors for m = 0..max_m. """
    _check_dim(basis)
    n = basis.dim
    out, current = [], None
    for k in range(max_m + 1):
        sets = list(itertools.combinations(range(n), k))
        masks = np.zeros((len(sets), n))
        for i, A in enumerate(sets):
            masks[i, list(A)] = 1
        values = eval_norm(basis.space, f[np.newaxis, :] - reconstruct(basis, c * masks), budget)
        i = int(np.argmin(values))
        if current is None or values[i] < current[0]:
            A = sets[i]
            current = (float(values[i]), Witness(A, None, tuple(c[list(A)])))
        out.append(ErrorValue(current[0], current[1], EXHAUSTIVE, 0.))
    return out

def _constant_coefficient_errors(basis, f, c, m, budget):
    """ (rho_m, varrho_m) from one enumeration; varrho uses the eps = 1 rows. """
    _check_dim(basis)
    space = basis.space
    n = basis.dim
    alpha = threshold_of(c, m)
    signs = space.signs()
    P = len(signs) ** m
    budget.require(math.comb(n, m) * P, 'constant coefficient search')
    patterns = np.array(list(itertools.product(signs, repeat = m)))

    sets = list(itertools.combinations(range(n), m))
    per_chunk = max(1, BATCH_ROWS // P)
    rho = varrho = None
    for start in range(0, len(sets), per_chunk):
        chunk = sets[start:start + per_chunk]
        rows = np.zeros((len(chunk) * P, n), dtype = space.dtype)
        for i, A in enumerate(chunk):
            block = rows[i * P:(i + 1) * P]
            block[:, list(A)] = alpha * patterns
        values = eval_norm(space, f[np.newaxis, :] - reconstruct(basis, rows), budget)
        k = int(np.argmin(values))
        if rho is None or values[k] < rho[0]:
            rho = (float(values[k]), chunk[k // P], patterns[k % P])
        unsigned = values[::P]
        k = int(np.argmin(unsigned))
        if varrho is None or unsigned[k] < varrho[0]:
            varrho = (float(unsigned[k]), chunk[k], patterns[0])

    resolution = 0.
    if space.is_complex:
        resolution = m ** (1 / space.p) * alpha * net_spacing(space.field.net_order) * basis.c1

    def value(best, res):
        v, A, eps = best
        return ErrorValue(v, Witness(A, tuple(eps), tuple(alpha * eps)), EXHAUSTIVE, res)
    return value(rho, resolution), value(varrho, 0.)

def _sigma_profile(basis, f, c, max_m, budget, rho, bpe):
    minima, exact = _set_minima(basis, f, c, max_m, budget)
    method = EXHAUSTIVE if exact else GRIDREFINE
    out, current = [], None
    for m in range(max_m + 1):
        v, A, a = minima[m]
        cands = [(v, Witness(A, None, tuple(a))), (bpe[m].value, bpe[m].witness)]
        if m >= 1:
            w = rho[m].witness
            cands.append((rho[m].value, Witness(w.indices, None, w.coeffs)))
        best = cands[0]
        for cand in cands[1:]:
            if cand[0] < best[0]:
                best = cand
        if current is None or best[0] < current[0]:
            current = best
        out.append(ErrorValue(float(current[0]), current[1], method, 0.))
    return out

# ~~~~~~~~~~~~~~~~~~ #
# Public operations  #
# ~~~~~~~~~~~~~~~~~~ #

def sigma_m(basis, f, m, budget = None):
    """Best m-term approximation error.

    inf over |A| <= m and free coefficients of ||f - sum_{j in A} a_j x_j||.
    Feasible values from rho_j (j <= m) and the projection errors are part
    of the constraint set and enter the minimum, which keeps sigma_m below
    both and nonincreasing in m.
    """
    _check_m(basis, m)
    budget = as_budget(budget)
    f = np.asarray(f)
    c = coefficients(basis, f)
    rho = [None] + [_constant_coefficient_errors(basis, f, c, j, budget)[0]
                    for j in range(1, m + 1)]
    bpe = _projection_profile(basis, f, c, m, budget)
    return _sigma_profile(basis, f, c, m, budget, rho, bpe)[m]

def rho_m(basis, f, m, budget = None):
    """ inf ||f - alpha 1_{eps,A}|| over |A| = m and all sign patterns. """
    _check_m(basis, m, lower = 1)
    f = np.asarray(f)
    return _constant_coefficient_errors(basis, f, coefficients(basis, f), m, as_budget(budget))[0]

def varrho_m(basis, f, m, budget = None):
    """ inf ||f - alpha 1_A|| over |A| = m. """
    _check_m(basis, m, lower = 1)
    f = np.asarray(f)
    return _constant_coefficient_errors(basis, f, coefficients(basis, f), m, as_budget(budget))[1]

def best_projection_error(basis, f, m, budget = None):
    """ inf ||f - P_B f|| over |B| <= m. """
    _check_m(basis, m)
    f = np.asarray(f)
    return _projection_profile(basis, f, coefficients(basis, f), m, as_budget(budget))[m]

def error_profile(basis, f, budget = None):
    """All four errors of f for m = 0..dim.

    Returns:
        ErrorProfile: rho and varrho hold None at m = 0.
    """
    budget = as_budget(budget)
    f = np.asarray(f)
    c = coefficients(basis, f)
    n = basis.dim
    rho, varrho = [None], [None]
    for m in range(1, n + 1):
        r, v = _constant_coefficient_errors(basis, f, c, m, budget)
        rho.append(r)
        varrho.append(v)
    bpe = _projection_profile(basis, f, c, n, budget)
    sigma = _sigma_profile(basis, f, c, n, budget, rho, bpe)
    return ErrorProfile(c, sigma, rho, varrho, bpe)

def chain_violations(profile, tol = 1e-9):
    """Pointwise chain checks of one error profile.

    Returns a list of messages: sigma <= rho <= varrho, sigma <= best
    projection error, and nonincreasing sigma and projection errors.
    """
    issues = []
    n = len(profile.sigma) - 1
    for m in range(n + 1):
        s, b = profile.sigma[m].value, profile.bpe[m].value
        if s > b + tol:
            issues.append(f'm={m}: sigma {s!r} > best projection error {b!r}')
        if m >= 1:
            r, v = profile.rho[m].value, profile.varrho[m].value
            if s > r + tol:
                issues.append(f'm={m}: sigma {s!r} > rho {r!r}')
            if r > v + tol:
                issues.append(f'm={m}: rho {r!r} > varrho {v!r}')
            if s > profile.sigma[m - 1].value + tol:
                issues.append(f'm={m}: sigma increases')
            if b > profile.bpe[m - 1].value + tol:
                issues.append(f'm={m}: best projection error increases')
    return issues
