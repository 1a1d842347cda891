#
#  greedyapprox/constants.py
#  GreedyApproxProject
#
"""Empirical estimates of greedy-type basis constants and the bound ledger.

Every searched constant is a lower bound of the true supremum: the maximum
of the defining ratio over a finite corpus and an exhaustive enumeration of
index sets and sign patterns. Each estimate keeps the witness that attains
it; :func:`reproduce` recomputes the ratio from the witness.

Ties in a max-reduction keep the first witness in enumeration order.
"""
import logging
log = logging.getLogger(__name__)

import math
import hashlib
import itertools
import functools
import numpy as np
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor

from .spaces import (ZERO_TOL, SLACK_TOL, SearchBudgetError, Field,
                     as_budget, eval_norm, geometry_constants, net_spacing,
                     unimodular_net, complex_field)
from .basis import coefficients, reconstruct, unimodular_sign, indicator_coefficients
from .tga import greedy_sets_of, threshold_of, project
from .errors import (MAX_SEARCH_DIM, error_profile, sigma_m, rho_m, varrho_m,
                     best_projection_error)
from .optimize import golden_section, INV_PHI

CONSTANT_NAMES = ('K', 'D', 'Ds', 'Delta', 'Cq', 'Cg', 'Cag', 'Cpg', 'Cpgu',
                  'GammaT', 'Cdis', 'Cend', 'Cend2', 'Cplus')

HOLDS = 'Holds'
VIOLATED = 'Violated'
NOT_APPLICABLE = 'NotApplicable'
CLOSURE_TOL = 1e-6
CLOSURE_FLAGS = frozenset(('lemma41', 'lemma42', 'lemma32real'))

class ConstantsError(Exception):
    pass

ConstantEstimate = namedtuple('ConstantEstimate',
        'name value witness corpus_id is_lower_bound scope infeasible')
LedgerEntry = namedtuple('LedgerEntry',
        'id lhs_name lhs_value rhs_formula_id rhs_value status asserted tolerance')
ItemProfile = namedtuple('ItemProfile',
        'item vector coeffs norm families residuals errors')

class BoundLedger:
    """ The list of evaluated inequalities. """
    def __init__(self, entries):
        self.entries = entries

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, key):
        for e in self.entries:
            if e.id == key:
                return e
        raise KeyError(key)

    def failures(self):
        """ Asserted entries that are violated. """
        return [e for e in self.entries if e.asserted and e.status == VIOLATED]

def corpus_digest(corpus):
    h = hashlib.sha256()
    for v in corpus:
        h.update(np.ascontiguousarray(v).tobytes())
    return h.hexdigest()[:16]

class _Max:
    """ First-wins max-reduction with lazily built witnesses. """
    def __init__(self):
        self.value = None
        self.witness = None

    def offer(self, value, witness):
        if self.value is None or value > self.value:
            self.value = float(value)
            self.witness = witness() if callable(witness) else witness
            return True
        return False

def _estimate(name, best, corpus_id, scope, infeasible = 0):
    if best.value is None:
        raise ConstantsError(f'No admissible ratio for {name} ({scope}).')
    return ConstantEstimate(name, best.value, best.witness, corpus_id, True, scope, infeasible)

@functools.lru_cache(maxsize = None)
def _subsets(n):
    """ All subsets of range(n) by size, then lexicographic, with 0/1 masks. """
    sets = [A for k in range(n + 1) for A in itertools.combinations(range(n), k)]
    masks = np.zeros((len(sets), n))
    for i, A in enumerate(sets):
        masks[i, list(A)] = 1
    return sets, masks

def _check_dim(basis):
    if basis.dim > MAX_SEARCH_DIM:
        raise SearchBudgetError(f'Exhaustive search is limited to dimension {MAX_SEARCH_DIM}.')

def _check_corpus(corpus):
    if len(corpus) == 0:
        raise ConstantsError('The corpus is empty.')

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~ #
# Per-item profiles           #
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~ #

def profile_item(basis, item, f, budget, errors = True):
    """Greedy families, greedy residuals and (optionally) errors of one vector."""
    _check_dim(basis)
    f = np.asarray(f)
    c = coefficients(basis, f)
    nf = eval_norm(basis.space, f, budget)
    n = basis.dim
    families = [greedy_sets_of(c, m) for m in range(n + 1)]
    sets = sorted({A for fam in families for A in fam}, key = lambda A: (len(A), A))
    masks = np.zeros((len(sets), n))
    for i, A in enumerate(sets):
        masks[i, list(A)] = 1
    values = eval_norm(basis.space, f[np.newaxis, :] - reconstruct(basis, c * masks), budget)
    residuals = {A: float(v) for A, v in zip(sets, values)}
    ep = error_profile(basis, f, budget) if errors and nf > ZERO_TOL else None
    return ItemProfile(item, f, c, nf, families, residuals, ep)

def profile_corpus(basis, corpus, budget = None, threads = 1, errors = True):
    """Profiles of every corpus vector, in corpus order.

    With threads > 1 the items are profiled concurrently; the result list
    keeps corpus order so all later reductions are deterministic.
    """
    budget = as_budget(budget)
    work = lambda pair: profile_item(basis, pair[0], pair[1], budget, errors = errors)
    if threads > 1:
        with ThreadPoolExecutor(max_workers = threads) as pool:
            profiles = list(pool.map(work, enumerate(corpus)))
    else:
        profiles = [work(pair) for pair in enumerate(corpus)]
    log.debug(f'Profiled {len(profiles)} corpus items ({budget}).')
    return profiles

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~ #
# Unconditionality and democracy   #
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~ #

def unconditionality_witness(basis, f, budget = None):
    """ (max_A ||P_A f||/||f||, argmax A), or (None, None) for f = 0. """
    _check_dim(basis)
    budget = as_budget(budget)
    f = np.asarray(f)
    nf = eval_norm(basis.space, f, budget)
    if nf <= ZERO_TOL:
        return None, None
    sets, masks = _subsets(basis.dim)
    values = eval_norm(basis.space, reconstruct(basis, coefficients(basis, f) * masks), budget) / nf
    k = int(np.argmax(values))
    return float(values[k]), sets[k]

def estimate_unconditionality(basis, corpus, budget = None, scope = 'corpus', corpus_id = None):
    """ K: max over corpus f and all subsets A of ||P_A f||/||f||. """
    _check_corpus(corpus)
    budget = as_budget(budget)
    best = _Max()
    for i, f in enumerate(corpus):
        ratio, A = unconditionality_witness(basis, f, budget)
        if ratio is not None:
            best.offer(ratio, lambda: {'item': i, 'f': np.asarray(f), 'A': A})
    return _estimate('K', best, corpus_id or corpus_digest(corpus), scope)

def estimate_democracy(basis, superdemocratic = False, closable = False, budget = None):
    """D (or Ds): max ||1_{eps,A}|| / ||1_{eta,B}|| over |A| <= |B|.

    Args:
        superdemocratic (bool): Range over all sign patterns, otherwise
            eps = eta = 1.
        closable (bool): Restrict to pairs with |A| = |B| or |B| < dim.
    """
    _check_dim(basis)
    budget = as_budget(budget)
    space = basis.space
    n = basis.dim
    signs = space.signs() if superdemocratic else np.ones(1)
    s = len(signs)
    budget.require(sum(math.comb(n, k) * s ** k for k in range(1, n + 1)), 'democracy search')

    largest, smallest = {}, {}
    for k in range(1, n + 1):
        sets = list(itertools.combinations(range(n), k))
        patterns = np.array(list(itertools.product(signs, repeat = k)))
        P = len(patterns)
        rows = np.zeros((len(sets) * P, n), dtype = space.dtype)
        for i, A in enumerate(sets):
            block = rows[i * P:(i + 1) * P]
            block[:, list(A)] = patterns
        values = eval_norm(space, reconstruct(basis, rows), budget)
        hi, lo = int(np.argmax(values)), int(np.argmin(values))
        largest[k] = (float(values[hi]), sets[hi // P], tuple(patterns[hi % P]))
        smallest[k] = (float(values[lo]), sets[lo // P], tuple(patterns[lo % P]))

    best = _Max()
    for a in range(1, n + 1):
        for b in range(a, n + 1):
            if closable and not (a == b or b < n):
                continue
            num, den = largest[a], smallest[b]
            best.offer(num[0] / den[0], lambda: {'A': num[1], 'eps': num[2],
                                                 'B': den[1], 'eta': den[2]})
    name = 'Ds' if superdemocratic else 'D'
    return _estimate(name, best, 'exhaustive', 'closable' if closable else 'all')

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~ #
# Symmetry for largest coefficients (SLC)     #
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~ #

def slc_scale(c):
    """ Coefficients scaled to largest magnitude 1 (zero stays zero). """
    c = np.asarray(c)
    top = float(np.max(np.abs(c))) if len(c) else 0.
    return c / top if top > ZERO_TOL else np.zeros_like(c)

def _slc_tables(basis, c, budget):
    """ Free indices and, per subset S of them, the extreme norms of f + 1_{pattern,S}. """
    space = basis.space
    c = np.asarray(c, dtype = space.dtype)
    free = [i for i in range(basis.dim) if abs(c[i]) <= ZERO_TOL]
    signs = space.signs()
    budget.require((1 + len(signs)) ** len(free), 'SLC search')
    largest, smallest = {}, {}
    for k in range(len(free) + 1):
        sets = list(itertools.combinations(free, k))
        patterns = np.array(list(itertools.product(signs, repeat = k)))
        P = len(patterns)
        rows = np.tile(c, (len(sets) * P, 1))
        for i, S in enumerate(sets):
            block = rows[i * P:(i + 1) * P]
            block[:, list(S)] = patterns
        values = eval_norm(space, reconstruct(basis, rows), budget)
        for i, S in enumerate(sets):
            block = values[i * P:(i + 1) * P]
            hi, lo = int(np.argmax(block)), int(np.argmin(block))
            largest[S] = (float(block[hi]), tuple(patterns[hi]))
            smallest[S] = (float(block[lo]), tuple(patterns[lo]))
    return free, largest, smallest

def _slc_pick(tables, mode):
    free, largest, smallest = tables
    best = None
    for A in largest:
        a = len(A)
        rest = [i for i in free if i not in A]
        if mode == 'equal':
            sizes = [a]
        elif mode == 'padded':
            # leave b - a free indices outside A and B
            sizes = [b for b in range(a + 1, len(rest) + 1) if len(rest) - b >= b - a]
        else:
            sizes = range(max(a, 1), len(rest) + 1)
        for b in sizes:
            if b == 0:
                continue
            for B in itertools.combinations(rest, b):
                ratio = largest[A][0] / smallest[B][0]
                if best is None or ratio > best[0]:
                    best = (ratio, A, largest[A][1], B, smallest[B][1])
    return best

def slc_witness(basis, c, equal_sizes = False, budget = None):
    """Largest SLC ratio for fixed coefficients c (already scaled).

    Returns:
        (ratio, A, eps, B, eta) or None when no admissible pair exists.
    """
    c = np.asarray(c)
    free = int(np.sum(np.abs(c) <= ZERO_TOL))
    if free < (2 if equal_sizes else 1):
        return None
    tables = _slc_tables(basis, c, as_budget(budget))
    return _slc_pick(tables, 'equal' if equal_sizes else 'all')

def slc_witnesses(basis, c, budget = None):
    """The SLC witnesses of c for every size constraint, from one search.

    Returns:
        dict: ``all`` (|A| <= |B|), ``equal`` (|A| = |B|) and ``padded``
        (|A| < |B| with |B| - |A| further free indices); None where no
        admissible pair exists.
    """
    c = np.asarray(c)
    if not np.any(np.abs(c) <= ZERO_TOL):
        return dict(all = None, equal = None, padded = None)
    tables = _slc_tables(basis, c, as_budget(budget))
    return {mode: _slc_pick(tables, mode) for mode in ('all', 'equal', 'padded')}

def estimate_slc(basis, corpus, equal_sizes = False, budget = None, scope = None, corpus_id = None):
    """Delta: max ||f + 1_{eps,A}|| / ||f + 1_{eta,B}||.

    Over f = 0 and every corpus f scaled to largest coefficient magnitude 1,
    disjoint A, B outside supp(f) with |A| <= |B| (or |A| = |B|), and all
    sign patterns.
    """
    budget = as_budget(budget)
    best = _Max()
    items = [(None, np.zeros(basis.dim, dtype = basis.space.dtype))]
    items += [(i, slc_scale(coefficients(basis, f))) for i, f in enumerate(corpus)]
    for i, c in items:
        if i is not None and not np.any(np.abs(c) > ZERO_TOL):
            continue
        w = slc_witness(basis, c, equal_sizes = equal_sizes, budget = budget)
        if w is None:
            continue
        ratio, A, eps, B, eta = w
        best.offer(ratio, lambda: {'item': i, 'f': reconstruct(basis, c),
                                   'A': A, 'eps': eps, 'B': B, 'eta': eta})
    scope = scope or ('equal' if equal_sizes else 'corpus')
    return _estimate('Delta', best, corpus_id or corpus_digest(corpus), scope)

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~ #
# Greedy-type constants (shared pass)  #
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~ #

def _profiles(basis, corpus, profiles, budget, threads = 1, errors = True):
    _check_corpus(corpus)
    if profiles is None:
        profiles = profile_corpus(basis, corpus, budget, threads = threads, errors = errors)
    return profiles

def estimate_quasi_greedy(basis, corpus, profiles = None, budget = None, corpus_id = None):
    """ Cq: max ||f - P_A f||/||f|| over corpus f, all m and greedy sets A. """
    profiles = _profiles(basis, corpus, profiles, as_budget(budget), errors = False)
    best = _Max()
    for p in profiles:
        if p.norm <= ZERO_TOL:
            continue
        for m, family in enumerate(p.families):
            for A in family:
                best.offer(p.residuals[A] / p.norm,
                           lambda: {'item': p.item, 'f': p.vector, 'm': m, 'A': A})
    return _estimate('Cq', best, corpus_id or corpus_digest(corpus), 'corpus')

def greedy_constants(basis, corpus, profiles = None, budget = None, threads = 1, corpus_id = None):
    """Cg, Cag, Cpg and Cpgu from one pass over the corpus.

    Ratios ||f - P_A f|| / error with error below 1e-12 are skipped when the
    residual is also below 1e-12 and counted as Infeasible otherwise.

    Returns:
        dict: name -> ConstantEstimate
    """
    profiles = _profiles(basis, corpus, profiles, as_budget(budget), threads = threads)
    names = ('Cg', 'Cag', 'Cpg', 'Cpgu')
    best = {name: _Max() for name in names}
    infeasible = {name: 0 for name in names}
    for p in profiles:
        if p.errors is None:
            continue
        for m, family in enumerate(p.families):
            dens = {'Cg': p.errors.sigma[m].value, 'Cag': p.errors.bpe[m].value}
            if m >= 1:
                dens['Cpg'] = p.errors.rho[m].value
                dens['Cpgu'] = p.errors.varrho[m].value
            for A in family:
                r = p.residuals[A]
                for name, den in dens.items():
                    if den < ZERO_TOL:
                        if r >= ZERO_TOL:
                            infeasible[name] += 1
                            log.warning(f'{name}: infeasible ratio at item {p.item}, m={m}, A={A}.')
                        continue
                    best[name].offer(r / den, lambda: {'item': p.item, 'f': p.vector,
                                                       'm': m, 'A': A})
    cid = corpus_id or corpus_digest(corpus)
    return {name: _estimate(name, best[name], cid, 'corpus', infeasible[name]) for name in names}

def estimate_greedy(basis, corpus, **kwargs):
    """ Cg: ||f - P_A f|| <= C sigma_m(f). """
    return greedy_constants(basis, corpus, **kwargs)['Cg']

def estimate_almost_greedy(basis, corpus, **kwargs):
    """ Cag: ||f - P_A f|| <= C inf{||f - P_B f|| : |B| <= |A|}. """
    return greedy_constants(basis, corpus, **kwargs)['Cag']

def estimate_rgpcc(basis, corpus, **kwargs):
    """ Cpg: ||f - P_A f|| <= C rho_m(f). """
    return greedy_constants(basis, corpus, **kwargs)['Cpg']

def estimate_urgpcc(basis, corpus, **kwargs):
    """ Cpgu: ||f - P_A f|| <= C varrho_m(f). """
    return greedy_constants(basis, corpus, **kwargs)['Cpgu']

def estimate_truncation(basis, corpus, profiles = None, budget = None, corpus_id = None):
    """GammaT: max alpha_m(f) ||1_{eps(f),A}|| / ||f|| over greedy sets A.

    eps(f) is the sign of the coefficients of f on A.
    """
    budget = as_budget(budget)
    profiles = _profiles(basis, corpus, profiles, budget, errors = False)
    best = _Max()
    for p in profiles:
        if p.norm <= ZERO_TOL:
            continue
        eps = unimodular_sign(p.coeffs)
        keys, rows = [], []
        for m in range(1, len(p.families)):
            alpha = threshold_of(p.coeffs, m)
            for A in p.families[m]:
                keys.append((m, A, alpha))
                rows.append(indicator_coefficients(basis, A, eps[list(A)]))
        if not rows:
            continue
        norms = eval_norm(basis.space, reconstruct(basis, np.array(rows)), budget)
        for (m, A, alpha), nrm in zip(keys, norms):
            best.offer(alpha * nrm / p.norm,
                       lambda: {'item': p.item, 'f': p.vector, 'm': m, 'A': A})
    return _estimate('GammaT', best, corpus_id or corpus_digest(corpus), 'corpus')

def _ordered(A, B):
    """ A < B or B < A (vacuous for empty sets). """
    if not A or not B:
        return True
    return max(A) < min(B) or max(B) < min(A)

def estimate_thag_variants(basis, corpus, profiles = None, budget = None, corpus_id = None):
    """Constants of the three restricted greedy conditions.

    Ratio ||f - P_A f|| / ||f - a 1_{eps,B}|| for greedy sets A and

    * Cdis: A, B disjoint, |B| <= |A|, all signs, a on a grid of multiples
      of the threshold with golden refinement around the maximizer;
    * Cend: additionally A < B or B < A and a = threshold;
    * Cend2: additionally |B| = |A| and eps = 1.

    B = {} (or a = 0) gives the quasi-greedy ratio.

    Returns:
        (Cdis, Cend, Cend2)
    """
    budget = as_budget(budget)
    profiles = _profiles(basis, corpus, profiles, budget, errors = False)
    space = basis.space
    n = basis.dim
    signs = space.signs()
    multiples = (0.5, 1., 2., 4.)
    best = {name: _Max() for name in ('Cdis', 'Cend', 'Cend2')}
    refine = None
    infeasible = 0

    for p in profiles:
        if p.norm <= ZERO_TOL:
            continue
        for m, family in enumerate(p.families):
            for A in family:
                r = p.residuals[A]
                base = r / p.norm
                trivial = lambda: {'item': p.item, 'f': p.vector, 'm': m, 'A': A,
                                   'B': (), 'eps': (), 'a': 0.}
                best['Cdis'].offer(base, trivial)
                best['Cend'].offer(base, trivial)
                if m == 0:
                    best['Cend2'].offer(base, trivial)
                    continue
                alpha = threshold_of(p.coeffs, m)
                if alpha <= ZERO_TOL:
                    continue
                rest = [i for i in range(n) if i not in A]
                meta, rows = [], []
                for k in range(1, min(m, len(rest)) + 1):
                    patterns = np.array(list(itertools.product(signs, repeat = k)))
                    for B in itertools.combinations(rest, k):
                        for ai, mult in enumerate(multiples):
                            block = np.tile(p.coeffs, (len(patterns), 1))
                            block[:, list(B)] -= mult * alpha * patterns
                            rows.append(block)
                            meta.extend((B, pj, tuple(patterns[pj]), ai) for pj in range(len(patterns)))
                if not rows:
                    continue
                budget.require(len(meta), 'restricted greedy search')
                dens = eval_norm(space, reconstruct(basis, np.vstack(rows)), budget)
                for (B, pj, eps, ai), den in zip(meta, dens):
                    if den < ZERO_TOL:
                        if r >= ZERO_TOL:
                            infeasible += 1
                        continue
                    ratio = r / den
                    a = multiples[ai] * alpha
                    witness = lambda: {'item': p.item, 'f': p.vector, 'm': m, 'A': A,
                                       'B': B, 'eps': eps, 'a': a}
                    if best['Cdis'].offer(ratio, witness):
                        refine = (p, A, B, eps, alpha, ai, r)
                    if ai == 1 and _ordered(A, B):
                        best['Cend'].offer(ratio, witness)
                        if len(B) == m and pj == 0:
                            best['Cend2'].offer(ratio, witness)

    if refine is not None:
        p, A, B, eps, alpha, ai, r = refine
        grid = [0.] + [mult * alpha for mult in multiples] + [8 * alpha]
        ind = reconstruct(basis, indicator_coefficients(basis, B, list(eps)))
        den = lambda a: eval_norm(space, p.vector - a * ind, budget)
        a, d = golden_section(den, grid[ai], grid[ai + 2])
        if d > ZERO_TOL and r / d > best['Cdis'].value:
            best['Cdis'].offer(r / d, {'item': p.item, 'f': p.vector, 'm': len(A), 'A': A,
                                       'B': B, 'eps': eps, 'a': a})
    cid = corpus_id or corpus_digest(corpus)
    return tuple(_estimate(name, best[name], cid, 'corpus', infeasible)
                 for name in ('Cdis', 'Cend', 'Cend2'))

def estimate_positive_cone(basis, corpus, budget = None, scope = 'corpus', corpus_id = None):
    """Cplus: max ||f|| / ||f + g|| over disjoint f, g with g >= 0.

    The pairs are the splits w = f + g of w = v and w = -v for corpus
    vectors v, where g collects nonnegative real coefficients of w.
    """
    _check_corpus(corpus)
    _check_dim(basis)
    budget = as_budget(budget)
    best = _Max()
    for i, v in enumerate(corpus):
        v = np.asarray(v)
        nv = eval_norm(basis.space, v, budget)
        if nv <= ZERO_TOL:
            continue
        cv = coefficients(basis, v)
        for sign in (1., -1.):
            c = sign * cv
            supp = np.abs(c) > ZERO_TOL
            positive = supp & (np.abs(np.imag(c)) <= ZERO_TOL) & (np.real(c) > 0)
            fixed = supp & ~positive
            free = [int(j) for j in np.flatnonzero(positive)]
            sets, masks = _subsets(len(free))
            full = np.tile(fixed.astype(float), (len(sets), 1))
            if free:
                full[:, free] = masks
            values = eval_norm(basis.space, reconstruct(basis, c * full), budget) / nv
            k = int(np.argmax(values))
            S = tuple(int(j) for j in np.flatnonzero(full[k]))
            best.offer(values[k], lambda: {'item': i, 'f': v, 'sign': sign, 'S': S})
    return _estimate('Cplus', best, corpus_id or corpus_digest(corpus), scope)

def estimate_constants(basis, corpus, budget = None, threads = 1, results = None, corpus_id = None):
    """All fourteen estimates on one corpus.

    Each estimator gets its own budget of ``budget`` norm evaluations; the
    greedy-type estimators share one profiling pass. Results are added to
    ``results`` as they are produced, so a caller keeps the partial table
    when a SearchBudgetError interrupts the run.
    """
    results = {} if results is None else results
    cid = corpus_id or corpus_digest(corpus)
    results['K'] = estimate_unconditionality(basis, corpus, budget, corpus_id = cid)
    results['D'] = estimate_democracy(basis, budget = budget)
    results['Ds'] = estimate_democracy(basis, superdemocratic = True, budget = budget)
    results['Delta'] = estimate_slc(basis, corpus, budget = budget, corpus_id = cid)
    profiles = profile_corpus(basis, corpus, budget, threads = threads)
    results['Cq'] = estimate_quasi_greedy(basis, corpus, profiles, corpus_id = cid)
    results.update(greedy_constants(basis, corpus, profiles, corpus_id = cid))
    results['GammaT'] = estimate_truncation(basis, corpus, profiles, budget, corpus_id = cid)
    cdis, cend, cend2 = estimate_thag_variants(basis, corpus, profiles, budget, corpus_id = cid)
    results.update({'Cdis': cdis, 'Cend': cend, 'Cend2': cend2})
    results['Cplus'] = estimate_positive_cone(basis, corpus, budget, corpus_id = cid)
    return results

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~ #
# Closed-form quantities         #
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~ #

def eta_p(p, u):
    """min over 0 < t < 1 of (1-t^p)^(-1/p) (1-(1+t/(A_p u))^(-p))^(-1/p).

    A 2001-point grid on (1e-6, 1-1e-6) locates the minimum; golden-section
    search refines it within the neighbouring grid cells.
    """
    if not 0 < p <= 1 or not u > 0:
        raise ValueError(f'eta_p needs 0 < p <= 1 and u > 0, got p={p}, u={u}.')
    a_p = geometry_constants(p).a_p

    def objective(t):
        t = np.asarray(t, dtype = float)
        first = (1 - t ** p) ** (-1 / p)
        second = (1 - (1 + t / (a_p * u)) ** (-p)) ** (-1 / p)
        return first * second

    grid = np.linspace(1e-6, 1 - 1e-6, 2001)
    values = objective(grid)
    k = int(np.argmin(values))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    _, refined = golden_section(lambda t: float(objective(t)), lo, hi, tol = 1e-10)
    return float(min(values[k], refined))

def net_order_for_spacing(delta):
    """ Smallest N with 2 sin(pi/(2N)) <= delta; 1 for delta >= 2. """
    if delta >= 2:
        return 1
    if not delta > 0:
        raise ValueError(f'Net spacing must be positive, got {delta}.')
    order = max(1, math.ceil(math.pi / (2 * math.asin(delta / 2))) - 1)
    while net_spacing(order) > delta + 1e-12:
        order += 1
    return order

def sign_net(p, k1):
    """The unimodular net of the complex positive-cone argument.

    Spacing target delta = (2^(1/p) k1 B_p)^(-1) with the complex B_p.

    Returns:
        (net, j1): the j1-th roots of unity and their number.
    """
    b_p = geometry_constants(p, 'complex').b_p
    delta = 1 / (2 ** (1 / p) * k1 * b_p)
    j1 = net_order_for_spacing(delta)
    return unimodular_net(Field('complex', j1)) if j1 > 1 else np.ones(1, dtype = complex), j1

def lemma32_constants(c, p):
    """ (K1, j1, K2) with K1 = (1+C^p)^(1/p) and K2 = (3 j1)^(1/p) K1. """
    k1 = (1 + c ** p) ** (1 / p)
    _, j1 = sign_net(p, k1)
    return k1, j1, (3 * j1) ** (1 / p) * k1

# ~~~~~~~~~~~~~~~~~ #
# The bound ledger  #
# ~~~~~~~~~~~~~~~~~ #

def _value(estimates, key):
    est = estimates.get(key)
    if est is None:
        return None
    return est.value if isinstance(est, ConstantEstimate) else float(est)

def bound_ledger(estimates, p, field, exact = False, closure = None):
    """Evaluate every bound at the empirical estimates.

    Args:
        estimates (dict): keys are constant names, optionally with a scope
            suffix (``D@closable``).
        p (float): geometry exponent.
        field (str or Field): scalar field.
        exact (bool): all constants equal 1 analytically; every entry is
            asserted.
        closure (iterable, optional): the closure constructions applied to
            the corpus (lemma41, lemma42, lemma32real); all of them if omitted.

    Entries that hold for lower-bound estimates by construction (denominator
    nesting and corpus closure) are always asserted; the others only when
    ``exact`` is set.
    """
    name = field.name if isinstance(field, Field) else field
    real = name == 'real'
    gc = geometry_constants(p, name)
    A, B = gc.a_p, gc.b_p
    get = lambda key: _value(estimates, key)
    entries = []

    def add(eid, lhs_key, rhs_id, rhs, structural = False, tol = SLACK_TOL, applicable = True):
        lhs = get(lhs_key)
        asserted = structural or exact
        if not applicable or lhs is None or rhs is None:
            entries.append(LedgerEntry(eid, lhs_key, lhs, rhs_id, rhs, NOT_APPLICABLE, asserted, tol))
            return
        status = HOLDS if lhs <= rhs + tol else VIOLATED
        entries.append(LedgerEntry(eid, lhs_key, lhs, rhs_id, float(rhs), status, asserted, tol))

    def formula(f, *keys):
        values = [get(k) for k in keys]
        if any(v is None for v in values):
            return None
        return f(*values)

    # Denominator nesting: pointwise dominance on a shared corpus.
    add('chain-pgu-pg', 'Cpgu', 'Cpg', get('Cpg'), structural = True)
    add('chain-pg-g', 'Cpg', 'Cg', get('Cg'), structural = True)
    add('chain-q-ag', 'Cq', 'Cag', get('Cag'), structural = True)
    add('chain-ag-g', 'Cag', 'Cg', get('Cg'), structural = True)
    add('chain-end2-end', 'Cend2', 'Cend', get('Cend'), structural = True)
    add('chain-end-dis', 'Cend', 'Cdis', get('Cdis'), structural = True)
    add('chain-q-dis', 'Cq', 'Cdis', get('Cdis'), structural = True)

    # Corpus closure: the padded witnesses are part of the corpus.
    closure = CLOSURE_FLAGS if closure is None else set(closure)
    sq = lambda x: x * x
    add('closure-K-pg', 'K', 'Cpg', get('Cpg'), structural = True,
        tol = CLOSURE_TOL, applicable = 'lemma41' in closure)
    add('closure-Delta-pg', 'Delta', 'Cpg', get('Cpg'), structural = True,
        tol = CLOSURE_TOL, applicable = 'lemma41' in closure)
    add('closure-K-plus', 'K', 'Cplus^2', formula(sq, 'Cplus'), structural = True,
        tol = CLOSURE_TOL, applicable = real and 'lemma32real' in closure)
    add('closure-K-pgu', 'K', 'Cpgu^2', formula(sq, 'Cpgu'), structural = True,
        tol = CLOSURE_TOL, applicable = real and 'lemma42' in closure)
    add('closure-D-pgu', 'D@closable', 'Cpgu^2', formula(sq, 'Cpgu'), structural = True,
        tol = CLOSURE_TOL, applicable = 'lemma42' in closure)

    # Bounds between true constants.
    k2 = lambda c: lemma32_constants(c, p)[2]
    add('lemma41-K', 'K', 'Cpg', get('Cpg'))
    add('lemma41-Delta', 'Delta', 'Cpg', get('Cpg'))
    if real:
        add('lemma42-K', 'K', 'Cpgu^2', formula(sq, 'Cpgu'))
        add('lemma32-K', 'K', 'Cplus^2', formula(sq, 'Cplus'))
    else:
        add('lemma42-K', 'K', 'K2(Cpgu,p)', formula(k2, 'Cpgu'))
        add('lemma32-K', 'K', 'K2(Cplus,p)', formula(k2, 'Cplus'))
    add('lemma42-D', 'D', 'Cpgu^2', formula(sq, 'Cpgu'))

    if real:
        # leading factor Cpgu^2, not Cpgu^p: K <= Cpgu^2 and D <= Cpgu^2 substituted into rem3-dem
        def th1(cpg, cpgu):
            k = cpgu ** 2
            dem = k * (1 + A ** p * cpgu ** (2 * p) * min(B ** p, A ** p * k ** p)) ** (1 / p)
            return min(A ** 2 * cpg ** 2, dem)
        add('th1-1', 'Cg', 'th1-1', formula(th1, 'Cpg', 'Cpgu'))
    else:
        def th1(cpg, cpgu):
            k = k2(cpgu)
            dem = k * (1 + A ** p * cpgu ** (2 * p) * min(B ** p, A ** p * k ** p)) ** (1 / p)
            return min(A ** 2 * cpg ** 2, dem)
        add('th1-2', 'Cg', 'th1-2', formula(th1, 'Cpg', 'Cpgu'))

    add('rem3-slc', 'Cg', 'A_p^2*Delta*K', formula(lambda d, k: A ** 2 * d * k, 'Delta', 'K'))
    add('rem3-dem', 'Cg', 'K(1+A_p^p D^p min(B_p^p, A_p^p K^p))^(1/p)',
        formula(lambda k, d: k * (1 + A ** p * d ** p * min(B ** p, A ** p * k ** p)) ** (1 / p),
                'K', 'D'))
    add('rem3-lower-K', 'K', 'Cg', get('Cg'))
    add('rem3-lower-Delta', 'Delta', 'Cg', get('Cg'))
    add('th51', 'GammaT', 'Cq^2*eta_p(Cq)', formula(lambda q: q * q * eta_p(p, q), 'Cq'))
    add('th2-dis', 'Cdis', 'Cq(1+2^p Ds^p GammaT^p)^(1/p)',
        formula(lambda q, ds, gt: q * (1 + 2 ** p * ds ** p * gt ** p) ** (1 / p),
                'Cq', 'Ds', 'GammaT'))
    return BoundLedger(entries)

# ~~~~~~~~~~~~~~~~~~~~~~~ #
# Witness reproduction    #
# ~~~~~~~~~~~~~~~~~~~~~~~ #

def reproduce(basis, estimate, budget = None):
    """ Recompute the ratio described by an estimate's witness. """
    w = estimate.witness
    space = basis.space
    norm = lambda v: eval_norm(space, v)
    ind = lambda S, signs = None: reconstruct(basis, indicator_coefficients(
            basis, S, None if signs is None else list(signs)))
    name = estimate.name
    if name in ('D', 'Ds'):
        return norm(ind(w['A'], w['eps'])) / norm(ind(w['B'], w['eta']))
    f = np.asarray(w['f'])
    if name == 'K':
        return norm(project(basis, f, w['A'])) / norm(f)
    if name == 'Delta':
        return norm(f + ind(w['A'], w['eps'])) / norm(f + ind(w['B'], w['eta']))
    if name == 'Cplus':
        g = w['sign'] * f
        return norm(project(basis, g, w['S'])) / norm(g)
    m, A = w['m'], w['A']
    r = norm(f - project(basis, f, A))
    if name == 'Cq':
        return r / norm(f)
    if name == 'GammaT':
        c = coefficients(basis, f)
        eps = unimodular_sign(c)[list(A)]
        return threshold_of(c, m) * norm(ind(A, eps)) / norm(f)
    if name in ('Cdis', 'Cend', 'Cend2'):
        return r / norm(f - w['a'] * ind(w['B'], w['eps']))
    den = {'Cg': sigma_m, 'Cag': best_projection_error,
           'Cpg': rho_m, 'Cpgu': varrho_m}[name](basis, f, m, budget)
    return r / den.value
