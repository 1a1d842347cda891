#
#  greedyapprox/spaces.py
#  GreedyApproxProject
#
"""Finite-dimensional p-Banach spaces.

A :class:`Space` couples a dimension, a scalar field and a quasi-norm given
by a :data:`NormSpec`. Norm evaluation is vectorized over leading axes, so
exhaustive searches can evaluate whole candidate batches in one call. Every
evaluated row can be charged to a :class:`SearchBudget`.
"""
import logging
log = logging.getLogger(__name__)

import os
import math
import itertools
import threading
import numpy as np
from collections import namedtuple

DEFAULT_BUDGET = 10_000_000
BUDGET_ENV = 'GREEDY_APPROX_BUDGET'
ZERO_TOL = 1e-12
SLACK_TOL = 1e-9
MAX_LEMMA_VECTORS = 16

class SpaceError(Exception):
    pass

class SearchBudgetError(Exception):
    pass

Field = namedtuple('Field', 'name net_order')
NormSpec = namedtuple('NormSpec', 'kind q weights matrix')
GeometryConstants = namedtuple('GeometryConstants', 'a_p b_p')

# ~~~~~~~~~~~~~~~~~~~~~~ #
# Search budget handling #
# ~~~~~~~~~~~~~~~~~~~~~~ #

def default_budget():
    """ The per-call norm evaluation budget, overridable by environment. """
    value = os.environ.get(BUDGET_ENV)
    if value is None:
        return DEFAULT_BUDGET
    try:
        budget = int(float(value))
    except ValueError:
        raise SpaceError(f'Cannot interpret {BUDGET_ENV}={value!r} as a number.')
    if budget < 1:
        raise SpaceError(f'{BUDGET_ENV} must be positive, got {budget}.')
    return budget

class SearchBudget:
    """Counts norm evaluations and aborts a search that exceeds its limit.

    A budget object may be shared between threads of one estimator pass.
    """
    def __init__(self, limit=None):
        self.limit = default_budget() if limit is None else int(limit)
        self.used = 0
        self._lock = threading.Lock()

    def __repr__(self):
        return f'SearchBudget({self.used}/{self.limit})'

    def charge(self, count):
        with self._lock:
            self.used += int(count)
            if self.used > self.limit:
                raise SearchBudgetError(
                        f'Search budget of {self.limit} norm evaluations exceeded.')

    def require(self, count, what = 'search'):
        """ Refuse a search whose size is known to exceed the remaining budget. """
        if count > self.limit - self.used:
            raise SearchBudgetError(
                    f'The {what} needs {count} norm evaluations, '
                    f'only {self.limit - self.used} of {self.limit} remain.')

def as_budget(budget):
    """ Normalize None, an integer limit or a SearchBudget to a SearchBudget. """
    if isinstance(budget, SearchBudget):
        return budget
    return SearchBudget(budget)

# ~~~~~~~~~~~~~~~~~~ #
# Fields and norms   #
# ~~~~~~~~~~~~~~~~~~ #

def real_field():
    return Field('real', 2)

def complex_field(net_order = 8):
    if int(net_order) < 4:
        raise SpaceError(f'Complex sign nets need order >= 4, got {net_order}.')
    return Field('complex', int(net_order))

def make_field(name, net_order = 8):
    if isinstance(name, Field):
        return name
    if name == 'real':
        return real_field()
    if name == 'complex':
        return complex_field(net_order)
    raise SpaceError(f'Unknown scalar field: {name}')

def unimodular_net(field):
    """The sign family of a field.

    Real: (1, -1). Complex: the roots of unity of order ``net_order``
    starting at 1; quarter turns are exact.
    """
    if field.name == 'real':
        return np.array([1., -1.])
    order = field.net_order
    k = np.arange(order)
    net = np.exp(2j * np.pi * k / order)
    quarter = (4 * k) % order == 0
    net[quarter] = np.array([1, 1j, -1, -1j])[(4 * k[quarter]) // order]
    return net

def weighted_lq(q, weights):
    """ WeightedLq(f) = (sum_j w_j |f_j|^q)^(1/q). """
    q = float(q)
    weights = np.asarray(weights, dtype = float)
    if not q > 0:
        raise SpaceError(f'Norm exponent q must be positive, got {q}.')
    if weights.ndim != 1 or len(weights) == 0:
        raise SpaceError('Norm weights must be a nonempty vector.')
    if np.any(~np.isfinite(weights)) or np.any(weights <= 0):
        raise SpaceError('Norm weights must be strictly positive.')
    return NormSpec('weightedLq', q, weights, None)

def matrix_induced(matrix, q):
    """ MatrixInduced(f) = WeightedLq(M f) with unit weights. """
    q = float(q)
    matrix = np.asarray(matrix)
    if not q > 0:
        raise SpaceError(f'Norm exponent q must be positive, got {q}.')
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise SpaceError('The norm matrix must be square.')
    cond = np.linalg.cond(matrix)
    if not np.isfinite(cond) or cond > 1e12:
        raise SpaceError('The norm matrix is singular or ill-conditioned.')
    return NormSpec('matrixInduced', q, np.ones(matrix.shape[0]), matrix)

class Space:
    """A finite-dimensional p-Banach space.

    Args:
        dim (int): The dimension.
        norm (NormSpec): The quasi-norm.
        field (Field, optional): Scalar field. Defaults to the reals.
        p (float, optional): Geometry exponent; defaults to min(q, 1).
    """
    def __init__(self, dim, norm, field = None, p = None):
        dim = int(dim)
        if dim < 1:
            raise SpaceError(f'Dimension must be positive, got {dim}.')
        if len(norm.weights) != dim:
            raise SpaceError(f'Norm has dimension {len(norm.weights)}, space has {dim}.')
        self.dim = dim
        self.norm = norm
        self.field = real_field() if field is None else field
        self.p = min(norm.q, 1.) if p is None else float(p)
        if not 0 < self.p <= 1:
            raise SpaceError(f'Geometry exponent p must lie in (0,1], got {self.p}.')

    def __repr__(self):
        return f'Space(dim={self.dim}, {self.norm.kind}(q={self.norm.q}), {self.field.name}, p={self.p})'

    @property
    def is_complex(self):
        return self.field.name == 'complex'

    @property
    def dtype(self):
        return complex if self.is_complex else float

    def signs(self):
        return unimodular_net(self.field)

    def descriptor(self):
        norm = {'kind': self.norm.kind, 'q': self.norm.q}
        if self.norm.kind == 'weightedLq':
            norm['weights'] = self.norm.weights
        else:
            norm['matrix'] = self.norm.matrix
        desc = {'dim': self.dim, 'field': self.field.name, 'p': self.p, 'norm': norm}
        if self.is_complex:
            desc['netOrder'] = self.field.net_order
        return desc

# ~~~~~~~~~~~~~~~~~~ #
# Norm evaluation    #
# ~~~~~~~~~~~~~~~~~~ #

def _check_dim(space, f):
    f = np.asarray(f)
    if f.ndim == 0 or f.shape[-1] != space.dim:
        raise SpaceError(f'Expected vectors of length {space.dim}, got shape {f.shape}.')
    return f

def eval_norm(space, f, budget = None):
    """Evaluate the quasi-norm along the last axis of f.

    Args:
        space (Space): The ambient space.
        f (array): A vector of length dim, or a stack of them.
        budget (SearchBudget, optional): Charged one unit per vector.

    Returns:
        A float for a single vector, otherwise an array of norms.
    """
    f = _check_dim(space, f)
    if budget is not None:
        budget.charge(f.size // space.dim)
    norm = space.norm
    if norm.kind == 'matrixInduced':
        f = f @ norm.matrix.T
    a = np.abs(f)
    q = norm.q
    if q == 2:
        value = np.sqrt(np.sum(norm.weights * a * a, axis = -1))
    elif q == 1:
        value = np.sum(norm.weights * a, axis = -1)
    else:
        value = np.sum(norm.weights * a ** q, axis = -1) ** (1 / q)
    return float(value) if np.ndim(value) == 0 else value

def geometry_constants(p, field = 'real'):
    """ A_p = (2^p - 1)^(-1/p); B_p = 2^(1/p) A_p (real) or 4^(1/p) A_p (complex). """
    p = float(p)
    if not 0 < p <= 1:
        raise SpaceError(f'Geometry exponent p must lie in (0,1], got {p}.')
    name = field.name if isinstance(field, Field) else field
    a_p = (2 ** p - 1) ** (-1 / p)
    b_p = (4 if name == 'complex' else 2) ** (1 / p) * a_p
    return GeometryConstants(a_p, b_p)

def check_p_triangle(space, f, g):
    """ Returns ||f||^p + ||g||^p - ||f+g||^p. """
    f = _check_dim(space, f)
    g = _check_dim(space, g)
    p = space.p
    return eval_norm(space, f) ** p + eval_norm(space, g) ** p - eval_norm(space, f + g) ** p

def verify_convexity_lemma(space, vectors, coeffs, budget = None):
    """Both sides of the convexity lemma for a finite collection of vectors.

    Returns:
        (lhs, rhs_b, rhs_a): lhs = ||sum a_j f_j||; rhs_b = B_p max|a_j|
        times the largest subset sum norm; rhs_a = A_p max|a_j| times the
        largest signed sum norm over the sign family of the field.
    """
    vectors = np.asarray(vectors, dtype = space.dtype).reshape(-1, space.dim)
    coeffs = np.asarray(coeffs)
    if len(coeffs) != len(vectors):
        raise SpaceError('Vector and coefficient lists differ in length.')
    k = len(vectors)
    if k > MAX_LEMMA_VECTORS:
        raise SearchBudgetError(f'Convexity lemma search limited to {MAX_LEMMA_VECTORS} vectors.')
    if k == 0:
        return 0., 0., 0.
    budget = as_budget(budget)
    gc = geometry_constants(space.p, space.field)
    signs = space.signs()
    budget.require(2 ** k + len(signs) ** k, 'convexity lemma search')

    lhs = eval_norm(space, coeffs @ vectors, budget)
    amax = float(np.max(np.abs(coeffs)))

    masks = np.array(list(itertools.product((0., 1.), repeat = k)))
    subset_max = float(np.max(eval_norm(space, masks @ vectors, budget)))
    patterns = np.array(list(itertools.product(signs, repeat = k)))
    sign_max = float(np.max(eval_norm(space, patterns @ vectors, budget)))
    log.debug(f'Convexity lemma: lhs={lhs}, subsets={subset_max}, signs={sign_max}.')
    return lhs, gc.b_p * amax * subset_max, gc.a_p * amax * sign_max

def net_spacing(order):
    """ Coverage radius 2 sin(pi/(2N)) of the N-th roots of unity. """
    return 2 * math.sin(math.pi / (2 * order))
