#!/usr/bin/env python
#
#  test_framework.py
#  GreedyApproxProject
#
import io
import os
import math
import tempfile
import unittest
from unittest import mock

from greedyapprox.catalog import DEFAULT_CATALOG, CorpusSpec
from greedyapprox.ioutils import ConfigError, read_json, write_json
from greedyapprox.verify import SCHEMA_VERSION
from greedyapprox.framework import (EXIT_OK, EXIT_INPUT, EXIT_BUDGET, RunConfig, main)

SMALL_CORPUS = {'gridCount': 8, 'randomCount': 4, 'indicatorCount': 8, 'perturbedCount': 2}

class TestRunConfig(unittest.TestCase):
    def test_round_trip(self):
        config = RunConfig(basis = 'summing:3', corpus = CorpusSpec(seed = 2),
                           budget = 1000, options = {'m': 1})
        data = config.to_dict()
        assert data['corpus']['seed'] == 2
        assert data['basisFile'] is None
        assert RunConfig.from_dict(data) == config

    def test_invalid(self):
        with self.assertRaises(ConfigError):
            RunConfig.from_dict({'bases': 'summing:3'})
        with self.assertRaises(ConfigError):
            RunConfig.from_dict([])

class TestCommandLine(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def path(self, name):
        return os.path.join(self.tmp.name, name)

    def write_config(self, data):
        path = self.path('config.json')
        with open(path, 'w') as fh:
            write_json(data, fh)
        return path

    def test_list(self):
        with mock.patch('sys.stdout', new_callable = io.StringIO) as out:
            assert main(['constants', '--list']) == EXIT_OK
        assert out.getvalue().split() == list(DEFAULT_CATALOG)

    def test_tga(self):
        out = self.path('tga.csv')
        assert main(['tga', '--basis', 'canonical:2:4', '--f', '4,3,2,1', '--out', out]) == EXIT_OK
        with open(out) as fh:
            lines = fh.read().splitlines()
        assert lines[0] == '# ordering: 0 1 2 3'
        assert lines[1] == 'm,greedy_sets,residual,sigma,rho,varrho'
        row = lines[4].split(',')
        assert row[:2] == ['2', '0 1']
        self.assertAlmostEqual(float(row[2]), math.sqrt(5))
        self.assertAlmostEqual(float(row[3]), math.sqrt(5))
        self.assertAlmostEqual(float(row[4]), math.sqrt(6))
        assert lines[2].split(',')[4:] == ['', '']

    def test_tga_single_m(self):
        out = self.path('tga.json')
        argv = ['tga', '--basis', 'canonical:2:4', '--f', '4,3,2,1', '--m', '1',
                '--format', 'json', '--out', out]
        assert main(argv) == EXIT_OK
        doc = read_json(out, is_file = True)
        assert doc['ordering'] == [0, 1, 2, 3]
        assert [r['m'] for r in doc['rows']] == [1]
        assert doc['rows'][0]['greedySets'] == '0'

    def test_input_errors(self):
        assert main(['tga', '--basis', 'canonical:2:4', '--f', '1,2']) == EXIT_INPUT
        assert main(['tga', '--basis', 'canonical:2:4']) == EXIT_INPUT
        assert main(['tga', '--basis', 'canonical:2:2', '--f', '1j,1']) == EXIT_INPUT
        assert main(['tga', '--basis', 'canonical:x:2', '--f', '1,1']) == EXIT_INPUT
        assert main(['constants', '--basis-file', self.path('missing.json')]) == EXIT_INPUT
        assert main(['constants']) == EXIT_INPUT

    def test_budget(self):
        config = self.write_config({'corpus': SMALL_CORPUS})
        out = self.path('constants.json')
        argv = ['constants', '--basis', 'canonical:1:2', '--config', config,
                '--budget', '10', '--out', out]
        assert main(argv) == EXIT_BUDGET
        doc = read_json(out, is_file = True)
        assert doc['complete'] is False

    def test_verify(self):
        config = self.write_config({'basis': 'canonical:1:2', 'corpus': SMALL_CORPUS})
        out = self.path('report.json')
        assert main(['verify', '--config', config, '--seed', '5', '--out', out]) == EXIT_OK
        doc = read_json(out, is_file = True)
        assert doc['schemaVersion'] == SCHEMA_VERSION
        assert doc['seed'] == 5
        assert doc['config']['basis'] == 'canonical:1:2'

    def test_report_diff(self):
        a, b, c = self.path('a.json'), self.path('b.json'), self.path('c.json')
        for name, value in ((a, 1), (b, 1), (c, 2)):
            with open(name, 'w') as fh:
                write_json({'schemaVersion': SCHEMA_VERSION, 'x': value}, fh)
        assert main(['report-diff', a, b]) == EXIT_OK
        with mock.patch('sys.stdout', new_callable = io.StringIO) as out:
            assert main(['report-diff', a, c]) == EXIT_INPUT
        assert out.getvalue() == 'x: 1 -> 2\n'
