#!/usr/bin/env python
#
#  test_catalog.py
#  GreedyApproxProject
#
import unittest
import numpy as np

from greedyapprox.spaces import eval_norm
from greedyapprox.basis import coefficients, reconstruct
from greedyapprox.parser import BasisIdParseError
from greedyapprox.tga import greedy_sets_of, threshold_of, greedy_sum
from greedyapprox.errors import sigma_m, rho_m
from greedyapprox.constants import unconditionality_witness, slc_witnesses
from greedyapprox.catalog import (DEFAULT_CATALOG, CatalogError, CorpusSpec, make_basis,
                                  is_exact, generate_corpus, close_corpus, fresh_index,
                                  pad_pair, split_signs, slc_padding, padded_ties)

SKIP_SLOW = True

def grid_only(levels, **kwargs):
    return CorpusSpec(grid_levels = levels, random_count = 0, indicators = False,
                      perturbed = False, **kwargs)

def rows_of(corpus):
    return {tuple(float(x) for x in row) for row in corpus}

class TestCatalogBases(unittest.TestCase):
    def test_default_catalog(self):
        for bid in DEFAULT_CATALOG:
            basis = make_basis(bid)
            assert basis.name == bid
            assert basis.dim == 4

    def test_families(self):
        assert np.allclose(make_basis('summing:3').X, np.triu(np.ones((3, 3))))
        assert np.allclose(make_basis('perturbed:3:0.5').X,
                           [[1, 0.5, 0], [0, 1, 0.5], [0, 0, 1]])
        basis = make_basis('weighted:2:1,1/4')
        assert np.allclose(basis.space.norm.weights, [1, 0.25])
        assert basis.space.norm.q == 2
        assert make_basis('summing:3:0.5').space.p == 0.5

    def test_field(self):
        basis = make_basis('canonical:2:2', field = 'complex', net_order = 4)
        assert basis.space.is_complex
        assert basis.space.field.net_order == 4

    def test_exact(self):
        assert is_exact(make_basis('canonical:1:3'))
        assert not is_exact(make_basis('weighted:1:1,1/2'))

    def test_invalid(self):
        with self.assertRaises(CatalogError):
            make_basis('canonical:2:0')
        with self.assertRaises(CatalogError):
            make_basis('canonical:2:17')
        with self.assertRaises(CatalogError):
            make_basis('canonical:0:3')
        with self.assertRaises(CatalogError):
            make_basis('weighted:1:1,-1')
        with self.assertRaises(BasisIdParseError):
            make_basis('diagonal:2:3')

class TestCorpusSpec(unittest.TestCase):
    def test_round_trip(self):
        spec = CorpusSpec(seed = 7, grid_count = 5, lemma42 = False)
        data = spec.to_dict()
        assert data['gridCount'] == 5
        assert data['lemma42'] is False
        assert data['randomRange'] == [0.1, 3.]
        assert CorpusSpec.from_dict(data) == spec

    def test_validation(self):
        with self.assertRaises(CatalogError):
            CorpusSpec.from_dict({'gridSize': 3})
        with self.assertRaises(CatalogError):
            CorpusSpec(random_range = (2., 1.))
        with self.assertRaises(CatalogError):
            CorpusSpec(random_range = (1.,))
        with self.assertRaises(CatalogError):
            CorpusSpec(zero_fraction = 1.)
        with self.assertRaises(CatalogError):
            CorpusSpec(grid_count = -1)
        with self.assertRaises(CatalogError):
            CorpusSpec(max_size = 0)

class TestGenerateCorpus(unittest.TestCase):
    def test_grid(self):
        basis = make_basis('canonical:2:2')
        corpus = generate_corpus(basis, grid_only((0, 1, -1)))
        assert corpus.shape == (8, 2)
        assert (0., 0.) not in rows_of(corpus)

    def test_indicators(self):
        basis = make_basis('canonical:2:2')
        spec = CorpusSpec(grid = False, random_count = 0, perturbed = False)
        stats = {}
        corpus = generate_corpus(basis, spec, stats = stats)
        expected = {(1., 0.), (-1., 0.), (0., 1.), (0., -1.),
                    (1., 1.), (1., -1.), (-1., 1.), (-1., -1.)}
        assert rows_of(corpus) == expected
        assert stats == {'indicators': 8}

    def test_ambient_vectors(self):
        basis = make_basis('summing:2')
        corpus = generate_corpus(basis, grid_only((0, 1)))
        assert rows_of(coefficients(basis, corpus)) == {(1., 0.), (0., 1.), (1., 1.)}

    def test_deterministic(self):
        basis = make_basis('perturbed:4:0.5')
        a = generate_corpus(basis, CorpusSpec(seed = 3))
        b = generate_corpus(basis, CorpusSpec(seed = 3))
        c = generate_corpus(basis, CorpusSpec(seed = 4))
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_sample_size(self):
        basis = make_basis('canonical:1:4')
        stats = {}
        generate_corpus(basis, CorpusSpec(grid_count = 20, random_count = 5,
                                          indicator_count = 10, perturbed_count = 3), stats)
        assert stats['grid'] == 20
        assert stats['indicators'] == 10
        assert stats['random'] <= 5
        assert stats['perturbed'] <= 3

    def test_size_cap(self):
        basis = make_basis('canonical:2:2')
        with self.assertRaises(CatalogError):
            generate_corpus(basis, grid_only((0, 1, -1), max_size = 5))

    def test_complex(self):
        basis = make_basis('canonical:2:2', field = 'complex', net_order = 4)
        corpus = generate_corpus(basis, grid_only((0, 1)))
        # {0} plus the four quarter turns in each coordinate
        assert corpus.shape == (24, 2)
        assert corpus.dtype == complex

    def test_perturbed_levels(self):
        basis = make_basis('canonical:1:4')
        spec = CorpusSpec(grid = False, indicators = False, random_count = 0, perturbed_count = 16)
        for c in coefficients(basis, generate_corpus(basis, spec)):
            mags = np.abs(c)
            assert np.max(mags) <= 1 + 1e-6 + 1e-15
            assert np.any(np.abs(mags - (1 + 1e-6)) < 1e-15)

class TestClosure(unittest.TestCase):
    def test_fresh_index(self):
        assert fresh_index((0, 2), (1,), n = 4) == 3
        assert fresh_index((), n = 2) == 0
        assert fresh_index((0, 1), n = 2) is None

    def test_pad_pair(self):
        f = np.array([1., 0., 0.])
        g = np.array([0., 1., 0.])
        h, A0, t0 = pad_pair(f, g, 2)
        assert list(h) == [1, 4, 3]
        assert A0 == (1, 2) and t0 == 3
        assert greedy_sets_of(h, 2) == [(1, 2)]
        assert threshold_of(h, 2) == 3

    def test_pad_pair_random(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            f = np.zeros(5)
            g = np.zeros(5)
            f[:2] = rng.uniform(-3, 3, size = 2)
            g[2:4] = rng.uniform(-3, 3, size = 2)
            h, A0, t0 = pad_pair(f, g, 4)
            assert greedy_sets_of(h, len(A0)) == [A0]
            assert abs(threshold_of(h, len(A0)) - t0) <= 1e-12 * t0
            assert np.allclose(h[[0, 1]], f[:2])

    def test_split_signs(self):
        g1, g2 = split_signs([1., -2., 0.])
        assert list(g1) == [1, 0, 0]
        assert list(g2) == [0, 2, 0]

    def test_empty(self):
        basis = make_basis('canonical:2:3')
        closed = close_corpus(basis, np.zeros((0, 3)))
        assert closed.shape == (0, 3)

    def test_base_first(self):
        basis = make_basis('summing:3')
        spec = CorpusSpec(grid_count = 10, random_count = 4, indicator_count = 10,
                          perturbed_count = 4)
        base = generate_corpus(basis, spec)
        stats = {}
        closed = close_corpus(basis, base, spec, stats = stats)
        assert np.array_equal(closed[:len(base)], base)
        assert len(closed) > len(base)
        assert stats['anchor'] in (0, 1)
        for key in ('pairs', 'lemma41', 'lemma42', 'lemma32real', 'slc', 'democracy', 'thag'):
            assert key in stats

    def test_anchor(self):
        basis = make_basis('canonical:1:3')
        spec = CorpusSpec(grid = False, indicators = False, random_count = 0, perturbed = False,
                          lemma41 = False, lemma42 = False, lemma32real = False, thag_proof = False)
        closed = close_corpus(basis, np.array([[0., 0., 5.]]), spec)
        assert rows_of(closed) == {(0., 0., 5.), (1., 2., 0.)}

    def test_projection_padding(self):
        # the padded vector turns the unconditionality witness into a greedy residual
        basis = make_basis('summing:3')
        spec = CorpusSpec(grid = False, indicators = False, random_count = 0, perturbed = False,
                          lemma42 = False, lemma32real = False, thag_proof = False)
        f = reconstruct(basis, [1., -1., 0.])
        ratio, A = unconditionality_witness(basis, f)
        closed = close_corpus(basis, f[np.newaxis, :], spec)
        best = 0.
        for h in closed[1:]:
            m = len(np.flatnonzero(np.abs(coefficients(basis, h)) > 1e-12)) - len(A)
            if not 1 <= m <= 3:
                continue
            residual = eval_norm(basis.space, h - greedy_sum(basis, h, m))
            best = max(best, residual / rho_m(basis, h, m).value)
        assert best >= ratio - 1e-6

    def test_slc_padding(self):
        basis = make_basis('weighted:1:1,1/2,1/4,1/8')
        rows = slc_padding(basis, np.zeros(4))
        assert len(rows) == 1
        assert list(np.abs(rows[0])) == [1, 0, 0, 1]
        assert slc_padding(basis, np.ones(4)) == []

    def test_padded_ties(self):
        # one of the two ties bounds ||1_A|| / ||1_B|| for |A| < |B|
        basis = make_basis('weighted:1:1,1/2,1/4,1/8')
        witness = slc_witnesses(basis, np.zeros(4))['padded']
        ratio, A, _, B, _ = witness
        assert len(A) < len(B)
        best = 0.
        for h in padded_ties(np.zeros(4), witness):
            assert B in greedy_sets_of(h, len(B))
            rest = h.copy()
            rest[list(B)] = 0
            residual = eval_norm(basis.space, reconstruct(basis, rest))
            best = max(best, residual / rho_m(basis, reconstruct(basis, h), len(B)).value)
        assert best >= ratio - 1e-9
        with self.assertRaises(CatalogError):
            padded_ties(np.zeros(3), (1., (0,), (1.,), (1, 2), (1., 1.)))

    def test_greedy_canonical(self):
        # canonical bases are 1-greedy on the closed corpus
        for bid in ('canonical:1:3', 'canonical:2:3'):
            basis = make_basis(bid)
            spec = CorpusSpec(grid_count = 10, random_count = 4, indicator_count = 10,
                              perturbed_count = 4, lemma41 = False, lemma42 = False)
            for f in close_corpus(basis, generate_corpus(basis, spec), spec):
                for m in range(4):
                    residual = eval_norm(basis.space, f - greedy_sum(basis, f, m))
                    assert abs(residual - sigma_m(basis, f, m).value) <= 1e-9

    @unittest.skipIf(SKIP_SLOW, "skipping slow tests")
    def test_default_spec(self):
        for bid in DEFAULT_CATALOG:
            basis = make_basis(bid)
            closed = close_corpus(basis, generate_corpus(basis))
            assert len(closed) <= CorpusSpec().max_size
