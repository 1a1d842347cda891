#!/usr/bin/env python
#
#  test_parser.py
#  GreedyApproxProject
#
import unittest

from greedyapprox.parser import (BasisId, BasisIdParseError, parse_basis_id,
                                 parse_coefficients)

class TestBasisIds(unittest.TestCase):
    def test_canonical(self):
        assert parse_basis_id('canonical:2:4') == BasisId('canonical', 2., 4, None, None,
                                                          'canonical:2:4')
        assert parse_basis_id(' canonical:0.5:3 ').q == 0.5

    def test_weighted(self):
        bid = parse_basis_id('weighted:1:1,1/2,1/4,1/8')
        assert bid.n == 4
        assert bid.weights == [1., 0.5, 0.25, 0.125]

    def test_summing(self):
        assert parse_basis_id('summing:6').q == 1
        bid = parse_basis_id('summing:3:1.5')
        assert (bid.n, bid.q) == (3, 1.5)

    def test_perturbed(self):
        bid = parse_basis_id('perturbed:4:0.5')
        assert (bid.n, bid.offdiag, bid.q) == (4, 0.5, 1.)
        bid = parse_basis_id('perturbed:4:-1e-1:2')
        assert (bid.offdiag, bid.q) == (-0.1, 2.)

    def test_errors(self):
        for text in ('canonical:2', 'canonical:2:4:1', 'summing:x', 'unknown:1:2',
                     'weighted:1:', 'weighted:1:1/0', 'canonical:1+2j:3', 'summing:2.5'):
            with self.assertRaises(BasisIdParseError):
                parse_basis_id(text)

class TestCoefficients(unittest.TestCase):
    def test_reals(self):
        assert parse_coefficients('4,3,2,1') == [4., 3., 2., 1.]
        assert parse_coefficients('-0.5, 1e-3, 1/4') == [-0.5, 0.001, 0.25]

    def test_complex(self):
        assert parse_coefficients('1+2j,0,-1j') == [1 + 2j, 0., -1j]
        assert parse_coefficients('0.5-0.25j') == [0.5 - 0.25j]

    def test_errors(self):
        for text in ('', '1,,2', '1;2', 'a,b'):
            with self.assertRaises(BasisIdParseError):
                parse_coefficients(text)
