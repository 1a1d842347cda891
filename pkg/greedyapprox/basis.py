#
#  greedyapprox/basis.py
#  GreedyApproxProject
#
"""Bases of finite-dimensional spaces and their dual functionals.

Index sets are sorted tuples of 0-based indices. All coefficient
extraction goes through :func:`coefficients`.
"""
import logging
log = logging.getLogger(__name__)

import numpy as np
from collections import namedtuple

from .spaces import SpaceError, ZERO_TOL, eval_norm

BIORTHOGONALITY_TOL = 1e-10
MAX_CONDITION = 1e12

class BasisError(Exception):
    pass

SignPattern = namedtuple('SignPattern', 'indices values')

class Basis:
    """An invertible matrix X (column j is x_j) with dual rows Xdual.

    Use :func:`build_basis` to construct one; it validates biorthogonality
    and fills in c1 and the c2 estimate.
    """
    def __init__(self, space, X, Xdual, c1, c2, name = None):
        self.space = space
        self.X = X
        self.Xdual = Xdual
        self.c1 = c1
        self.c2 = c2
        self.name = name

    def __repr__(self):
        return f'Basis({self.name or "custom"}, {self.space})'

    @property
    def dim(self):
        return self.space.dim

    def descriptor(self):
        desc = dict(self.space.descriptor())
        desc.update({'id': self.name or 'custom',
                     'matrix': self.X,
                     'c1': self.c1,
                     'c2': self.c2,
                     'c2_kind': 'estimate'})
        return desc

def _estimate_c2(space, X, Xdual, count, seed):
    # max_n |x_n^*(f)| / ||f|| over seeded samples and the basis vectors
    rng = np.random.default_rng(seed)
    samples = rng.standard_normal((count, space.dim))
    if space.is_complex:
        samples = samples + 1j * rng.standard_normal((count, space.dim))
    samples = np.vstack([samples, X.T])
    norms = eval_norm(space, samples)
    coeffs = np.abs(samples @ Xdual.T)
    return float(np.max(np.max(coeffs, axis = 1) / norms))

def build_basis(space, X, dual = None, normalize = False, name = None,
                sample_count = 64, sample_seed = 0):
    """Build a basis from the columns of X.

    Args:
        space (Space): The ambient space.
        X (matrix): dim x dim, column j is the basis vector x_j.
        dual (matrix, optional): Dual functionals as rows. Computed by
            inversion if omitted, validated otherwise.
        normalize (bool, optional): Scale columns to unit norm.
        name (str, optional): Identifier used in reports.

    Raises:
        BasisError: X is not square, singular, ill-conditioned, or the dual
            is not biorthogonal to X.
    """
    X = np.array(X, dtype = space.dtype)
    n = space.dim
    if X.shape != (n, n):
        raise BasisError(f'Basis matrix must have shape ({n}, {n}), got {X.shape}.')
    if not np.all(np.isfinite(X)):
        raise BasisError('Basis matrix has non-finite entries.')
    if normalize:
        X = X / eval_norm(space, X.T)[np.newaxis, :]
    cond = np.linalg.cond(X)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise BasisError(f'Basis matrix is singular or ill-conditioned (cond={cond:.3g}).')

    if dual is None:
        Xdual = np.linalg.inv(X)
    else:
        Xdual = np.array(dual, dtype = space.dtype)
        if Xdual.shape != (n, n):
            raise BasisError(f'Dual matrix must have shape ({n}, {n}), got {Xdual.shape}.')
    error = np.max(np.abs(Xdual @ X - np.eye(n)))
    if not error < BIORTHOGONALITY_TOL:
        raise BasisError(f'Dual functionals are not biorthogonal (max error {error:.3g}).')

    c1 = float(np.max(eval_norm(space, X.T)))
    c2 = _estimate_c2(space, X, Xdual, sample_count, sample_seed)
    log.debug(f'Built basis {name}: cond={cond:.3g}, c1={c1:.6g}, c2~{c2:.6g}.')
    return Basis(space, X, Xdual, c1, c2, name = name)

def coefficients(basis, f):
    """ Returns Xdual f (along the last axis for stacks of vectors). """
    f = np.asarray(f)
    if f.ndim == 0 or f.shape[-1] != basis.dim:
        raise SpaceError(f'Expected vectors of length {basis.dim}, got shape {f.shape}.')
    return f @ basis.Xdual.T

def reconstruct(basis, coeffs):
    """ Returns X c (along the last axis for stacks of coefficient vectors). """
    return np.asarray(coeffs) @ basis.X.T

def check_indices(basis, A):
    """ Validate an index set and return it as a sorted tuple. """
    A = tuple(sorted(int(i) for i in A))
    if len(set(A)) != len(A):
        raise BasisError(f'Repeated index in {A}.')
    if A and (A[0] < 0 or A[-1] >= basis.dim):
        raise BasisError(f'Index set {A} out of range for dimension {basis.dim}.')
    return A

def sign_pattern(A, values):
    """ A SignPattern with validated unimodular values. """
    A = tuple(A)
    values = tuple(values)
    if len(A) != len(values):
        raise BasisError('Sign pattern indices and values differ in length.')
    if any(abs(abs(v) - 1) > ZERO_TOL for v in values):
        raise BasisError(f'Sign values must be unimodular: {values}.')
    return SignPattern(A, values)

def unimodular_sign(c):
    """ sgn(c) = c/|c| elementwise, with sgn(0) = 1. """
    c = np.asarray(c)
    mag = np.abs(c)
    out = np.ones_like(c)
    nz = mag > ZERO_TOL
    out[nz] = c[nz] / mag[nz]
    return out

def indicator_coefficients(basis, A, values = None):
    coeffs = np.zeros(basis.dim, dtype = basis.space.dtype)
    if A:
        coeffs[list(A)] = 1 if values is None else values
    return coeffs

def indicator(basis, A, eps = None):
    """The vector 1_{eps,A} = sum_{j in A} eps_j x_j.

    Args:
        A (iterable): Index set.
        eps (SignPattern, optional): Signs on A; all ones if omitted.
    """
    A = check_indices(basis, A)
    values = None
    if eps is not None:
        order = sorted(range(len(eps.indices)), key = lambda i: eps.indices[i])
        if tuple(eps.indices[i] for i in order) != A:
            raise BasisError(f'Sign pattern indices {eps.indices} do not match {A}.')
        values = [eps.values[i] for i in order]
    return reconstruct(basis, indicator_coefficients(basis, A, values))

def support(basis, f):
    """ {n : |x_n^*(f)| > 1e-12} as a sorted tuple. """
    return tuple(int(i) for i in np.flatnonzero(np.abs(coefficients(basis, f)) > ZERO_TOL))
