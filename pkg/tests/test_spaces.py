#!/usr/bin/env python
#
#  test_spaces.py
#  GreedyApproxProject
#
import os
import math
import unittest
from unittest import mock
import numpy as np

from greedyapprox.spaces import (SpaceError, SearchBudgetError, SearchBudget,
                                 BUDGET_ENV, DEFAULT_BUDGET,
                                 as_budget, default_budget, Space, weighted_lq,
                                 matrix_induced, real_field, complex_field,
                                 unimodular_net, eval_norm, geometry_constants,
                                 check_p_triangle, verify_convexity_lemma, net_spacing)

def lq_space(q, n, field = None, weights = None):
    weights = np.ones(n) if weights is None else weights
    return Space(n, weighted_lq(q, weights), field)

class TestNorms(unittest.TestCase):
    def test_weighted_lq(self):
        assert eval_norm(lq_space(2, 2), [3, 4]) == 5
        assert eval_norm(lq_space(1, 2, weights = [1, 0.5]), [2, -2]) == 3
        self.assertAlmostEqual(eval_norm(lq_space(0.5, 2), [1, 1]), 4)
        self.assertAlmostEqual(eval_norm(lq_space(3, 2), [1, 1]), 2 ** (1 / 3))

    def test_complex_entries(self):
        space = lq_space(2, 2, field = complex_field(8))
        self.assertAlmostEqual(eval_norm(space, [3j, 4]), 5)

    def test_matrix_induced(self):
        space = Space(2, matrix_induced([[1, 1], [0, 1]], 1))
        assert eval_norm(space, [1, -1]) == 1

    def test_batch(self):
        space = lq_space(1, 2)
        values = eval_norm(space, np.array([[1, 1], [2, -1], [0, 0]]))
        assert values.shape == (3,)
        assert list(values) == [2, 3, 0]

    def test_input_errors(self):
        with self.assertRaises(SpaceError):
            eval_norm(lq_space(2, 3), [1, 2])
        with self.assertRaises(SpaceError):
            weighted_lq(1, [1, 0])
        with self.assertRaises(SpaceError):
            weighted_lq(0, [1, 1])
        with self.assertRaises(SpaceError):
            matrix_induced([[1, 1], [1, 1]], 2)
        with self.assertRaises(SpaceError):
            Space(3, weighted_lq(1, [1, 1]))
        with self.assertRaises(SpaceError):
            Space(2, weighted_lq(1, [1, 1]), p = 1.5)

    def test_geometry_exponent(self):
        assert lq_space(2, 2).p == 1
        assert lq_space(0.5, 2).p == 0.5
        assert lq_space(2, 2).dtype is float
        assert lq_space(2, 2, field = complex_field()).dtype is complex

class TestFields(unittest.TestCase):
    def test_real(self):
        assert list(unimodular_net(real_field())) == [1, -1]

    def test_complex_quarter_turns_exact(self):
        net = unimodular_net(complex_field(4))
        assert list(net) == [1, 1j, -1, -1j]
        net = unimodular_net(complex_field(8))
        assert len(net) == 8
        assert net[2] == 1j and net[4] == -1
        assert np.allclose(np.abs(net), 1)

    def test_complex_order(self):
        with self.assertRaises(SpaceError):
            complex_field(2)

    def test_net_spacing(self):
        self.assertAlmostEqual(net_spacing(2), math.sqrt(2))
        self.assertAlmostEqual(net_spacing(1), 2)

class TestGeometry(unittest.TestCase):
    def test_constants(self):
        gc = geometry_constants(1)
        assert gc.a_p == 1 and gc.b_p == 2
        assert geometry_constants(1, 'complex').b_p == 4
        gc = geometry_constants(0.5)
        self.assertAlmostEqual(gc.a_p, 1 / (math.sqrt(2) - 1) ** 2)
        self.assertAlmostEqual(gc.b_p, 4 * gc.a_p)
        with self.assertRaises(SpaceError):
            geometry_constants(1.5)

    def test_p_triangle(self):
        rng = np.random.default_rng(1)
        for q in (0.5, 1, 2):
            space = lq_space(q, 4)
            for _ in range(200):
                f, g = rng.standard_normal((2, 4))
                assert check_p_triangle(space, f, g) >= -1e-9

    def test_convexity_lemma(self):
        space = lq_space(1, 3)
        lhs, rhs_b, rhs_a = verify_convexity_lemma(space, np.eye(3), [1, -2, 0.5])
        assert lhs == 3.5
        assert rhs_b == 2 * 2 * 3
        assert rhs_a == 1 * 2 * 3

    def test_convexity_lemma_random(self):
        rng = np.random.default_rng(2)
        for q in (0.5, 1):
            space = lq_space(q, 3)
            for _ in range(50):
                k = int(rng.integers(1, 6))
                vectors = rng.standard_normal((k, 3))
                coeffs = rng.uniform(-1, 1, size = k)
                lhs, rhs_b, rhs_a = verify_convexity_lemma(space, vectors, coeffs)
                assert lhs <= rhs_b + 1e-9
                assert lhs <= rhs_a + 1e-9

    def test_convexity_lemma_limit(self):
        space = lq_space(1, 2)
        with self.assertRaises(SearchBudgetError):
            verify_convexity_lemma(space, np.ones((17, 2)), np.ones(17))

class TestBudget(unittest.TestCase):
    def test_charge(self):
        budget = SearchBudget(5)
        budget.charge(5)
        with self.assertRaises(SearchBudgetError):
            budget.charge(1)

    def test_require(self):
        budget = SearchBudget(10)
        budget.require(10)
        budget.charge(4)
        with self.assertRaises(SearchBudgetError):
            budget.require(7)

    def test_eval_norm_charges(self):
        budget = SearchBudget(100)
        eval_norm(lq_space(2, 2), np.ones((7, 2)), budget)
        assert budget.used == 7

    def test_as_budget(self):
        budget = SearchBudget(3)
        assert as_budget(budget) is budget
        assert as_budget(5).limit == 5

    def test_environment(self):
        with mock.patch.dict(os.environ, {BUDGET_ENV: '1e3'}):
            assert default_budget() == 1000
            assert as_budget(None).limit == 1000
        with mock.patch.dict(os.environ, {BUDGET_ENV: 'many'}):
            with self.assertRaises(SpaceError):
                default_budget()
        with mock.patch.dict(os.environ, {}, clear = True):
            assert default_budget() == DEFAULT_BUDGET
