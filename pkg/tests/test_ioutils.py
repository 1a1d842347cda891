#!/usr/bin/env python
#
#  test_ioutils.py
#  GreedyApproxProject
#
import os
import json
import tempfile
import unittest
import numpy as np

from greedyapprox.basis import BasisError
from greedyapprox.catalog import make_basis
from greedyapprox.ioutils import (ConfigError, atomic_write, jsonable, write_json, read_json,
                                  write_csv, basis_from_dict, basis_to_dict, load_basis_file,
                                  write_basis_file)

class TestSerialization(unittest.TestCase):
    def test_jsonable(self):
        data = {'a': np.arange(2), 'b': (1 + 2j, np.float64(0.5)), 1: np.bool_(True)}
        assert jsonable(data) == {'a': [0, 1], 'b': [[1., 2.], 0.5], '1': True}

    def test_write_json(self):
        text = write_json({'b': 1, 'a': [1.5]})
        assert json.loads(text) == {'a': [1.5], 'b': 1}
        assert text.index('"a"') < text.index('"b"')

    def test_read_json(self):
        assert read_json('{"x": 1}') == {'x': 1}
        with self.assertRaises(ConfigError):
            read_json('{"x": ')

    def test_csv(self):
        text = write_csv(('name', 'value', 'note'), [['a', 0.1, None], ['b', 2, 'x']])
        lines = text.splitlines()
        assert lines[0] == 'name,value,note'
        assert lines[1] == 'a,0.10000000000000001,'
        assert lines[2] == 'b,2,x'
        assert float(lines[1].split(',')[1]) == 0.1

    def test_atomic_write(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'out.txt')
            atomic_write(path, 'one')
            atomic_write(path, 'two')
            with open(path) as fh:
                assert fh.read() == 'two'
            assert os.listdir(tmp) == ['out.txt']

class TestBasisFiles(unittest.TestCase):
    def test_round_trip(self):
        basis = make_basis('summing:3')
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'basis.json')
            write_basis_file(basis, path, dual = True)
            other = load_basis_file(path)
        assert np.array_equal(other.X, basis.X)
        assert np.allclose(other.Xdual, basis.Xdual)
        assert other.name == 'summing:3'
        assert other.space.norm.q == 1

    def test_complex(self):
        data = {'field': 'complex', 'netOrder': 4,
                'norm': {'kind': 'weightedLq', 'q': 2, 'weights': [1, 1]},
                'matrix': [[1, [0, 1]], [0, 1]]}
        basis = basis_from_dict(data)
        assert basis.X[0, 1] == 1j
        assert basis_to_dict(basis)['matrix'][0][1] == [0., 1.]

    def test_matrix_induced(self):
        data = {'norm': {'kind': 'matrixInduced', 'q': 1, 'matrix': [[1, 1], [0, 1]]},
                'matrix': [[1, 0], [0, 1]]}
        basis = basis_from_dict(data)
        assert basis.space.norm.kind == 'matrixInduced'

    def test_corrupt_dual(self):
        data = {'norm': {'q': 2}, 'matrix': [[1, 0], [0, 1]], 'dual': [[1, 0.5], [0, 1]]}
        with self.assertRaises(BasisError):
            basis_from_dict(data)

    def test_invalid(self):
        with self.assertRaises(ConfigError):
            basis_from_dict({'matrix': [[1]]})
        with self.assertRaises(ConfigError):
            basis_from_dict({'norm': {'kind': 'sup', 'q': 1}, 'matrix': [[1]]})
        with self.assertRaises(ConfigError):
            basis_from_dict({'norm': {'q': 1}, 'matrix': [[[0, 1]]]})
        with self.assertRaises(ConfigError):
            basis_from_dict({'norm': {'q': 1}, 'matrix': [['x']]})
        with self.assertRaises(ConfigError):
            basis_from_dict({'norm': {'q': -1}, 'matrix': [[1]]})
