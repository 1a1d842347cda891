#!/usr/bin/env python
#
#  test_optimize.py
#  GreedyApproxProject
#
import unittest
import numpy as np

from greedyapprox.optimize import golden_section, grid_refine, line_minimum, coordinate_descent

class TestScalarSearch(unittest.TestCase):
    def test_golden_section(self):
        x, fx = golden_section(lambda t: (t - 1) ** 2, 0, 3, tol = 1e-10)
        self.assertAlmostEqual(x, 1, places = 6)
        self.assertAlmostEqual(fx, 0, places = 10)

    def test_golden_section_end_point(self):
        x, fx = golden_section(lambda t: t, 2, 5)
        assert x == 2 and fx == 2

    def test_grid_refine_nonconvex(self):
        func = lambda t: min(abs(t + 1) + 0.5, abs(t - 2))
        batch = lambda ts: np.minimum(np.abs(ts + 1) + 0.5, np.abs(ts - 2))
        x, fx = grid_refine(func, batch, -3, 3)
        self.assertAlmostEqual(x, 2, places = 6)
        assert fx < 1e-6

    def test_line_minimum_candidates(self):
        func = lambda t: abs(t - 0.3) + abs(t + 0.2)
        batch = lambda ts: np.abs(ts - 0.3) + np.abs(ts + 0.2)
        x, fx = line_minimum(func, batch, [0.3, -0.2], -0.2, 0.3, convex = True)
        self.assertAlmostEqual(fx, 0.5)

class TestCoordinateDescent(unittest.TestCase):
    def test_quadratic(self):
        target = np.array([1., -2.])
        objective = lambda x: float(np.sum((x - target) ** 2))

        def line_search(x, j):
            t = target[j] - x[j]
            y = x.copy()
            y[j] += t
            return t, objective(y)

        x, value, iterations = coordinate_descent(objective, 2, [0., 0.], line_search)
        assert np.allclose(x, target)
        assert value == 0
        assert iterations >= 2
