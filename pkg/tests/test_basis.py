#!/usr/bin/env python
#
#  test_basis.py
#  GreedyApproxProject
#
import unittest
import numpy as np

from greedyapprox.spaces import Space, weighted_lq, complex_field, eval_norm
from greedyapprox.basis import (BasisError, build_basis, coefficients, reconstruct,
                                check_indices, sign_pattern, unimodular_sign,
                                indicator, support)

def summing(n, q = 1):
    return build_basis(Space(n, weighted_lq(q, np.ones(n))), np.triu(np.ones((n, n))),
                       name = f'summing:{n}')

class TestBuildBasis(unittest.TestCase):
    def test_summing_dual(self):
        basis = summing(3)
        assert np.allclose(basis.Xdual, [[1, -1, 0], [0, 1, -1], [0, 0, 1]])
        assert np.max(np.abs(basis.Xdual @ basis.X - np.eye(3))) < 1e-10

    def test_constants(self):
        basis = summing(3)
        assert basis.c1 == 3
        # |x_0^*(e_0)| = 1 for f = e_0
        assert basis.c2 >= 1

    def test_singular(self):
        space = Space(2, weighted_lq(2, np.ones(2)))
        with self.assertRaises(BasisError):
            build_basis(space, [[1, 1], [1, 1]])
        with self.assertRaises(BasisError):
            build_basis(space, np.eye(3))
        with self.assertRaises(BasisError):
            build_basis(space, [[1, 0], [0, np.nan]])

    def test_corrupt_dual(self):
        space = Space(2, weighted_lq(2, np.ones(2)))
        with self.assertRaises(BasisError):
            build_basis(space, np.eye(2), dual = [[1, 0.1], [0, 1]])
        basis = build_basis(space, np.eye(2), dual = np.eye(2))
        assert np.array_equal(basis.Xdual, np.eye(2))

    def test_normalize(self):
        space = Space(3, weighted_lq(2, np.ones(3)))
        basis = build_basis(space, np.triu(np.ones((3, 3))), normalize = True)
        assert np.allclose(eval_norm(space, basis.X.T), 1)

    def test_descriptor(self):
        desc = summing(2).descriptor()
        assert desc['id'] == 'summing:2'
        assert desc['dim'] == 2
        assert desc['norm']['kind'] == 'weightedLq'

class TestCoefficients(unittest.TestCase):
    def test_round_trip(self):
        basis = summing(4)
        c = np.array([1., -2., 0.5, 3.])
        assert np.allclose(coefficients(basis, reconstruct(basis, c)), c)

    def test_summing_vector(self):
        basis = summing(2)
        # x_0 - x_1 = -e_1
        assert np.allclose(reconstruct(basis, [1, -1]), [0, -1])

    def test_indices(self):
        basis = summing(3)
        assert check_indices(basis, [2, 0]) == (0, 2)
        with self.assertRaises(BasisError):
            check_indices(basis, [3])
        with self.assertRaises(BasisError):
            check_indices(basis, [1, 1])

    def test_unimodular_sign(self):
        assert list(unimodular_sign([2., -3., 0.])) == [1, -1, 1]
        s = unimodular_sign(np.array([3j, 0j]))
        assert np.allclose(s, [1j, 1])

    def test_indicator(self):
        basis = summing(3)
        assert np.allclose(indicator(basis, [0, 2]), [2, 1, 1])
        eps = sign_pattern([2, 0], [-1, 1])
        assert np.allclose(indicator(basis, [0, 2], eps), [0, -1, -1])
        with self.assertRaises(BasisError):
            indicator(basis, [0, 1], eps)
        with self.assertRaises(BasisError):
            sign_pattern([0], [0.5])

    def test_complex_indicator(self):
        space = Space(2, weighted_lq(2, np.ones(2)), complex_field(4))
        basis = build_basis(space, np.eye(2))
        v = indicator(basis, [0, 1], sign_pattern([0, 1], [1j, -1]))
        assert np.allclose(v, [1j, -1])

    def test_support(self):
        basis = summing(3)
        assert support(basis, reconstruct(basis, [0, 2, 0])) == (1,)
        assert support(basis, np.zeros(3)) == ()
