#
#  greedyapprox/catalog.py
#  GreedyApproxProject
#
"""Built-in bases, corpus generation and corpus closure.

Corpus vectors are generated in coefficient space and mapped to the ambient
space with the basis matrix. Closure appends the vectors used by the
padding constructions of the bound proofs, so that the closure ledger
entries hold for the empirical estimates.
"""
import logging
log = logging.getLogger(__name__)

import itertools
import numpy as np
from collections import deque
from dataclasses import dataclass, asdict, fields

from .spaces import ZERO_TOL, SpaceError, Space, weighted_lq, make_field
from .basis import build_basis, coefficients, reconstruct, unimodular_sign
from .tga import ordering_of, threshold_of
from .parser import parse_basis_id
from .constants import unconditionality_witness, slc_scale, slc_witnesses, estimate_democracy

MAX_DIM = 16
MAX_CORPUS = 100_000
ALL_PAIRS_LIMIT = 300
PERTURBATION = 1e-6
DEMOCRACY_PADDING = 3.
PADDING_DEPTH = 0

DEFAULT_CATALOG = ('canonical:1:4',
                   'canonical:2:4',
                   'weighted:1:1,1/2,1/4,1/8',
                   'summing:4',
                   'perturbed:4:0.5')

class CatalogError(Exception):
    pass

# ~~~~~~~~~~~~~~~~~ #
# Catalog bases     #
# ~~~~~~~~~~~~~~~~~ #

def make_basis(basis_id, field = None, normalize = False, net_order = 8):
    """Instantiate a catalog basis.

    Args:
        basis_id (str or BasisId): e.g. ``canonical:2:4`` or ``summing:3``.
        field (str or Field, optional): Defaults to 'real'.

    Raises:
        CatalogError: invalid id parameters.
    """
    bid = parse_basis_id(basis_id) if isinstance(basis_id, str) else basis_id
    n = bid.n
    if not 1 <= n <= MAX_DIM:
        raise CatalogError(f'Catalog bases need 1 <= n <= {MAX_DIM}, got {n}.')
    try:
        fld = make_field(field or 'real', net_order)
        weights = np.ones(n) if bid.weights is None else np.asarray(bid.weights, dtype = float)
        space = Space(n, weighted_lq(bid.q, weights), fld)
    except SpaceError as err:
        raise CatalogError(f'Invalid parameters in {bid.name}: {err}')

    if bid.family in ('canonical', 'weighted'):
        X = np.eye(n)
    elif bid.family == 'summing':
        X = np.triu(np.ones((n, n)))
    elif bid.family == 'perturbed':
        X = np.eye(n) + bid.offdiag * np.eye(n, k = 1)
    else:
        raise CatalogError(f'Unknown basis family {bid.family}.')
    return build_basis(space, X, normalize = normalize, name = bid.name)

def is_exact(basis):
    """ True for bases whose constants are all 1 analytically. """
    return (basis.name or '').startswith('canonical:')

# ~~~~~~~~~~~~~~~~~~~~~ #
# Corpus specification  #
# ~~~~~~~~~~~~~~~~~~~~~ #

_CAMEL = {'grid_levels': 'gridLevels', 'grid_count': 'gridCount',
          'random_count': 'randomCount', 'random_range': 'randomRange',
          'zero_fraction': 'zeroFraction', 'indicator_count': 'indicatorCount',
          'perturbed_count': 'perturbedCount', 'lemma32real': 'lemma32Real',
          'thag_proof': 'thagProof', 'pair_cap': 'pairCap', 'max_size': 'maxSize'}

@dataclass
class CorpusSpec:
    """Parameters of corpus generation and closure.

    Regeneration from the same spec is bit-identical.
    """
    seed: int = 0
    grid: bool = True
    grid_levels: tuple = (0., 0.5, -0.5, 1., -1., 2., -2.)
    grid_count: int = 96
    random_count: int = 32
    random_range: tuple = (0.1, 3.)
    zero_fraction: float = 0.25
    indicators: bool = True
    indicator_count: int = 64
    perturbed: bool = True
    perturbed_count: int = 32
    lemma41: bool = True
    lemma42: bool = True
    lemma32real: bool = True
    thag_proof: bool = True
    pair_cap: int = 10_000
    max_size: int = MAX_CORPUS

    def __post_init__(self):
        self.grid_levels = tuple(float(x) for x in self.grid_levels)
        self.random_range = tuple(float(x) for x in self.random_range)
        if not 0 < self.max_size <= MAX_CORPUS:
            raise CatalogError(f'Corpus size cap must lie in (0, {MAX_CORPUS}].')
        if len(self.random_range) != 2 or not 0 <= self.random_range[0] <= self.random_range[1]:
            raise CatalogError(f'Invalid random magnitude range {self.random_range}.')
        if not 0 <= self.zero_fraction < 1:
            raise CatalogError(f'zeroFraction must lie in [0, 1), got {self.zero_fraction}.')
        for name in ('grid_count', 'random_count', 'indicator_count', 'perturbed_count', 'pair_cap'):
            if getattr(self, name) < 0:
                raise CatalogError(f'{_CAMEL[name]} must be nonnegative.')

    def to_dict(self):
        return {_CAMEL.get(k, k): list(v) if isinstance(v, tuple) else v
                for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, data):
        known = {_CAMEL.get(f.name, f.name): f.name for f in fields(cls)}
        unknown = set(data) - set(known)
        if unknown:
            raise CatalogError(f'Unknown corpus spec fields: {sorted(unknown)}.')
        return cls(**{known[k]: v for k, v in data.items()})

# ~~~~~~~~~~~~~~~~~~~ #
# Corpus generation   #
# ~~~~~~~~~~~~~~~~~~~ #

def _rng(spec, stream):
    return np.random.default_rng([spec.seed, stream])

def _lattice(values, n, count, rng):
    """ Nonzero rows over a value set: all of them if few, else a seeded sample. """
    values = np.asarray(values)
    total = len(values) ** n
    if total - 1 <= count:
        rows = np.array(list(itertools.product(values, repeat = n)))
        return rows[np.any(np.abs(rows) > ZERO_TOL, axis = 1)]
    rows, seen = [], set()
    for _ in range(64):
        picks = values[rng.integers(0, len(values), size = (count, n))]
        for row in picks:
            key = _key(row)
            if key in seen or not np.any(np.abs(row) > ZERO_TOL):
                continue
            seen.add(key)
            rows.append(row)
            if len(rows) == count:
                return np.array(rows)
    return np.array(rows).reshape(-1, n)

def _key(row):
    return np.ascontiguousarray(np.asarray(row) + 0.).tobytes()

def _grid_values(levels, signs, is_complex):
    if not is_complex:
        return np.array(sorted(set(levels), key = lambda x: (abs(x), -x)))
    mags = sorted({abs(x) for x in levels if abs(x) > ZERO_TOL})
    return np.array([0j] + [m * s for m in mags for s in signs])

def _random_rows(count, n, spec, signs, rng):
    lo, hi = spec.random_range
    mags = rng.uniform(lo, hi, size = (count, n))
    phases = signs[rng.integers(0, len(signs), size = (count, n))]
    zeros = rng.random((count, n)) < spec.zero_fraction
    return np.where(zeros, 0, mags * phases)

def _perturbed_rows(count, n, spec, signs, rng):
    """ f + 1_{eps,A} + (1+1e-6) 1_{eta,B} with |A| <= |B| and small f off A and B. """
    rows = []
    for _ in range(count):
        perm = rng.permutation(n)
        b = int(rng.integers(1, n + 1))
        a = int(rng.integers(0, min(b, n - b) + 1))
        A, B, rest = perm[:a], perm[a:a + b], perm[a + b:]
        row = np.zeros(n, dtype = signs.dtype)
        row[A] = signs[rng.integers(0, len(signs), size = a)]
        row[B] = (1 + PERTURBATION) * signs[rng.integers(0, len(signs), size = b)]
        mags = rng.uniform(0, 1, size = len(rest))
        mags[rng.random(len(rest)) < spec.zero_fraction] = 0
        row[rest] = mags * signs[rng.integers(0, len(signs), size = len(rest))]
        rows.append(row)
    return np.array(rows).reshape(-1, n)

class _Collector:
    """ Deduplicating, size-capped list of coefficient rows. """
    def __init__(self, n, dtype, cap, rows = None):
        self.n = n
        self.rows = []
        self.seen = set()
        self.cap = cap
        self.dtype = dtype
        if rows is not None:
            self.extend(rows)

    def add(self, row):
        row = np.asarray(row, dtype = self.dtype)
        key = _key(row)
        if key in self.seen:
            return False
        if len(self.rows) >= self.cap:
            raise CatalogError(f'Corpus exceeds the size cap of {self.cap} vectors.')
        self.seen.add(key)
        self.rows.append(row)
        return True

    def extend(self, rows):
        return sum(self.add(r) for r in rows)

    def array(self):
        return np.array(self.rows, dtype = self.dtype).reshape(-1, self.n)

def generate_corpus(basis, spec = None, stats = None):
    """Generate the base corpus: grid, indicator, random and perturbed vectors.

    Args:
        stats (dict, optional): receives the number of vectors per source.

    Returns:
        array: ambient vectors, one per row, in deterministic order.

    Raises:
        CatalogError: the corpus exceeds the size cap.
    """
    spec = spec or CorpusSpec()
    space = basis.space
    n = basis.dim
    signs = space.signs().astype(space.dtype)
    out = _Collector(n, space.dtype, spec.max_size)
    stats = {} if stats is None else stats

    if spec.grid:
        values = _grid_values(spec.grid_levels, signs, space.is_complex)
        stats['grid'] = out.extend(_lattice(values, n, spec.grid_count, _rng(spec, 1)))
    if spec.indicators:
        values = np.concatenate([np.zeros(1, dtype = space.dtype), signs])
        stats['indicators'] = out.extend(_lattice(values, n, spec.indicator_count, _rng(spec, 2)))
    if spec.random_count:
        stats['random'] = out.extend(_random_rows(spec.random_count, n, spec, signs, _rng(spec, 3)))
    if spec.perturbed and spec.perturbed_count:
        stats['perturbed'] = out.extend(_perturbed_rows(spec.perturbed_count, n, spec, signs, _rng(spec, 4)))
    log.info(f'Generated {len(out.rows)} corpus vectors for {basis.name}: {stats}.')
    return reconstruct(basis, out.array())

# ~~~~~~~~~~~~~~~~~~~ #
# Corpus closure      #
# ~~~~~~~~~~~~~~~~~~~ #

def fresh_index(*supports, n):
    """ Smallest index outside the union of the supports, or None. """
    used = set().union(*supports)
    for i in range(n):
        if i not in used:
            return i
    return None

def _support(c):
    return tuple(int(i) for i in np.flatnonzero(np.abs(c) > ZERO_TOL))

def pad_pair(f, g, n0):
    """The padded vector h = f + g + t0 1_{eps,A0} on coefficients.

    A0 = supp(g) + {n0}, eps = sgn(g) on supp(g) and 1 at n0, and
    t0 = 1 + max|g| + max|f|. A0 is the unique greedy set of h of its size
    and t0 its threshold.

    Example:
        f = (1, 0, 0), g = (0, 1, 0), n0 = 2 gives t0 = 3 and h = (1, 4, 3).
    """
    f, g = np.asarray(f), np.asarray(g)
    t0 = 1 + float(np.max(np.abs(g))) + float(np.max(np.abs(f)))
    A0 = list(_support(g)) + [n0]
    eps = unimodular_sign(g)
    h = f + g
    h[A0] = h[A0] + t0 * eps[A0]
    return h, tuple(sorted(A0)), t0

def split_signs(g):
    """ The real positive and negative parts g = g1 - g2. """
    g = np.real(np.asarray(g))
    return np.where(g > 0, g, 0.), np.where(g < 0, -g, 0.)

def _closure_pairs(count, spec):
    if count <= ALL_PAIRS_LIMIT:
        return [(i, j) for i in range(count) for j in range(count) if i != j]
    rng = _rng(spec, 5)
    draws = rng.integers(0, count, size = (spec.pair_cap, 2))
    return [(int(i), int(j)) for i, j in draws if i != j]

def _projection_parts(c, A):
    mask = np.zeros(len(c))
    mask[list(A)] = 1
    return c * mask, c * (1 - mask)

def _tie(f, witness):
    _, A, eps, B, eta = witness
    h = f.copy()
    h[list(A)] = eps
    h[list(B)] = eta
    return h

def slc_padding(basis, c):
    """Tie vectors turning the SLC witnesses of c into greedy residuals.

    With f = c scaled to largest magnitude 1 and the equal-size witness
    (A, eps, B, eta), h = f + 1_{eps,A} + 1_{eta,B} has B as a greedy set
    and f + 1_{eta,B} within one term of h. When the best pair of f has
    |A| < |B|, the best such pair leaving room for D, |A + D| = |B|, gives
    the two vectors f + 1_{eps,A} + s 1_D + 1_{eta,B} for s = 1, -1; the
    larger of their residuals bounds ||f + 1_{eps,A}|| for p = 1.

    Returns:
        list of coefficient rows.
    """
    f = slc_scale(c).astype(basis.space.dtype)
    w = slc_witnesses(basis, f)
    rows = []
    if w['equal'] is not None:
        rows.append(_tie(f, w['equal']))
    if w['all'] is not None and len(w['all'][1]) < len(w['all'][3]) and w['padded'] is not None:
        rows.extend(padded_ties(f, w['padded']))
    return rows

def padded_ties(f, witness):
    """The pair f + 1_{eps,A} + s 1_D + 1_{eta,B}, s = 1, -1, for |A| < |B|.

    D is the first |B| - |A| free indices of f outside A and B.
    """
    _, A, _, B, _ = witness
    D = [i for i in range(len(f))
         if abs(f[i]) <= ZERO_TOL and i not in A and i not in B][:len(B) - len(A)]
    if len(D) < len(B) - len(A):
        raise CatalogError(f'No room to pad A={A} against B={B}.')
    rows = []
    for s in (1, -1):
        h = _tie(f, witness)
        h[D] = s
        rows.append(h)
    return rows

def _democracy_padding(basis):
    """ Vectors witnessing ||1_A|| <= Cpgu^2 ||1_B|| for the closable democracy witness. """
    n = basis.dim
    w = estimate_democracy(basis, closable = True).witness
    A, B = w['A'], w['B']
    B0 = B[:len(A)] if len(A) < len(B) else B
    rows = []
    row = np.zeros(n)
    row[list(set(A) | set(B0))] = 1
    rows.append(row)
    if len(A) < len(B):
        n0 = fresh_index(B, n = n)
        row = np.zeros(n)
        row[list(B0)] = 1
        row[[i for i in B if i not in B0]] = 1 + DEMOCRACY_PADDING
        row[n0] = DEMOCRACY_PADDING
        rows.append(row)
    return rows

def _closure_rows(basis, c, spec, depth):
    """ (construction, row) for one coefficient vector of the worklist. """
    n = basis.dim
    real = not basis.space.is_complex
    if spec.lemma41:
        for h in slc_padding(basis, c):
            yield 'slc', h
    if not np.any(np.abs(c) > ZERO_TOL) or not (spec.lemma41 or spec.lemma42 or spec.lemma32real):
        return
    _, A = unconditionality_witness(basis, reconstruct(basis, c))
    F, G = _projection_parts(c, A)
    n0 = fresh_index(_support(c), n = n)
    pad = depth <= PADDING_DEPTH and n0 is not None
    if spec.lemma41 and pad:
        t0 = 1 + float(np.max(np.abs(G))) + float(np.max(np.abs(F)))
        A0 = list(_support(G)) + [n0]
        h = c.copy()
        h[A0] = h[A0] + t0 * unimodular_sign(G)[A0]
        yield 'lemma41', h
    if not real:
        return
    g1, g2 = split_signs(G)
    if spec.lemma42 and pad:
        t = 1 + float(np.max(np.abs(F))) + float(np.max(g1))
        h1 = F + g1
        h1[list(_support(g1)) + [n0]] += t
        t2 = t + float(np.max(g2))
        h2 = -F - g1 + g2
        h2[list(_support(g2)) + [n0]] += t2
        yield 'lemma42', h1
        yield 'lemma42', h2
    if spec.lemma32real:
        parts = (g1, g2, F + g1) if depth == 0 else (F + g1,)
        for v in parts:
            if np.any(np.abs(v) > ZERO_TOL):
                yield 'lemma32real', v

def close_corpus(basis, corpus, spec = None, stats = None):
    """Append the witness vectors of the padding constructions.

    Seeds, from the corpus vectors:

    * pairs (f, g) with disjoint supports: h = f + g + t0 1_{eps,A0}
      (:func:`pad_pair`);
    * the democracy padding vectors and the anchor x_0 + 2 x_1;
    * per vector: f - alpha 1_{sgn(f),B} with B beyond the greedy set.

    Then every vector, the added ones included, and f = 0 go through a
    worklist:

    * the SLC tie vectors of :func:`slc_padding`;
    * with its unconditionality witness A splitting c = F + G: the
      padded h and the unsigned two-step padding (real) for corpus vectors
      (``PADDING_DEPTH`` 0), and F + g1 of the positive cone decomposition
      (real; also g1 and g2 for corpus vectors).

    Rows more than ``2 n`` steps from the corpus are kept but not expanded.

    Returns:
        array: the corpus followed by the new vectors, deduplicated.
    """
    spec = spec or CorpusSpec()
    space = basis.space
    n = basis.dim
    corpus = np.asarray(corpus, dtype = space.dtype).reshape(-1, n)
    stats = {} if stats is None else stats
    if len(corpus) == 0:
        return corpus
    C = coefficients(basis, corpus)
    out = _Collector(n, space.dtype, spec.max_size, rows = C)
    base = len(out.rows)
    seeds = []

    if spec.lemma41:
        supports = [_support(c) for c in C]
        added = skipped = 0
        for i, j in _closure_pairs(len(C), spec):
            f, g = C[i], C[j]
            if not supports[j] or set(supports[i]) & set(supports[j]):
                continue
            n0 = fresh_index(supports[i], supports[j], n = n)
            if n0 is None:
                skipped += 1
                continue
            if out.add(pad_pair(f, g, n0)[0]):
                added += 1
                seeds.append(out.rows[-1])
        if skipped:
            log.warning(f'Closure skipped {skipped} pairs without a fresh index.')
        stats['pairs'] = added

    def seed(key, rows):
        stats[key] = 0
        for r in rows:
            if out.add(r):
                stats[key] += 1
                seeds.append(out.rows[-1])

    if spec.lemma42:
        seed('democracy', _democracy_padding(basis))
    if n >= 2:
        anchor = np.zeros(n)
        anchor[:2] = (1, 2)
        seed('anchor', [anchor])
    if spec.thag_proof and n >= 2:
        rows = []
        for i, c in enumerate(C):
            if not np.any(np.abs(c) > ZERO_TOL):
                continue
            m = i % (n - 1) + 1
            prefix = ordering_of(c)[:m]
            B = [j for j in range(n) if j not in prefix][:m]
            alpha = threshold_of(c, m)
            g = c.copy()
            g[B] = g[B] - alpha * unimodular_sign(c)[B]
            if np.any(np.abs(g) > ZERO_TOL):
                rows.append(g)
        seed('thag', rows)

    for key in ('lemma41', 'lemma42', 'lemma32real', 'slc'):
        stats[key] = 0
    work = deque([(np.zeros(n, dtype = space.dtype), 0)])
    work.extend((c, 0) for c in out.rows[:base])
    work.extend((h, 1) for h in seeds)
    unexpanded = 0
    while work:
        c, depth = work.popleft()
        if depth > 2 * n:
            unexpanded += 1
            continue
        for key, h in _closure_rows(basis, c, spec, depth):
            if out.add(h):
                stats[key] += 1
                work.append((out.rows[-1], depth + 1))
    if unexpanded:
        log.debug(f'Closure left {unexpanded} vectors unexpanded.')

    log.info(f'Closure added {len(out.rows) - base} vectors: {stats}.')
    added = reconstruct(basis, out.array()[base:])
    return np.vstack([corpus, added.astype(space.dtype)])
