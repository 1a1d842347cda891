#
#  greedyapprox/verify.py
#  GreedyApproxProject
#
"""Full verification runs and report comparison.

A run is a fixed sequence of stages: corpus generation, closure, error
profiles with pointwise chain checks, geometry checks, constant estimation,
scoped estimation and the bound ledger. A stage that runs out of search
budget is recorded as such and later stages work with what is available.
"""
import logging
log = logging.getLogger(__name__)

import time
from collections import namedtuple
from dataclasses import dataclass, field
from natsort import natsorted

from .spaces import (SLACK_TOL, ZERO_TOL, SearchBudget, SearchBudgetError,
                     check_p_triangle, verify_convexity_lemma)
from .basis import coefficients
from .tga import ordering_of
from .errors import chain_violations
from .constants import (CLOSURE_FLAGS, corpus_digest, profile_corpus,
                        estimate_unconditionality,
                        estimate_democracy, estimate_slc, estimate_quasi_greedy,
                        greedy_constants, estimate_truncation, estimate_thag_variants,
                        estimate_positive_cone, bound_ledger, VIOLATED)
from .catalog import CorpusSpec, generate_corpus, close_corpus, is_exact
from .ioutils import jsonable

SCHEMA_VERSION = 1
DIFF_TOL = 1e-9
FLAG_TOL = 1e-6

OK = 'ok'
BUDGET_EXCEEDED = 'budget-exceeded'
SKIPPED = 'skipped'

TABLE_HEADER = ('item', 'm', 'residual', 'sigma', 'rho', 'varrho', 'bpe',
                'ratio_g', 'ratio_ag', 'ratio_pg', 'ratio_pgu', 'ratio_q')

class ReportSchemaError(Exception):
    pass

DiffEntry = namedtuple('DiffEntry', 'path a b')

@dataclass
class VerifyOptions:
    budget: int = None
    threads: int = 1
    geometry_pairs: int = 64
    lemma_items: int = 8
    tables: bool = False

@dataclass
class RunReport:
    """The result of :func:`run_verification`.

    ``timing`` holds the number of norm evaluations per stage.
    """
    config: dict
    seed: int
    basis: dict
    corpus: dict = field(default_factory = dict)
    estimates: dict = field(default_factory = dict)
    ledger: list = field(default_factory = list)
    violations: list = field(default_factory = list)
    flags: list = field(default_factory = list)
    readings: dict = field(default_factory = dict)
    stages: dict = field(default_factory = dict)
    timing: dict = field(default_factory = dict)
    tables: list = None

    @property
    def passed(self):
        failed = [e for e in self.ledger if e['asserted'] and e['status'] == VIOLATED]
        return not self.violations and not failed

    def to_dict(self):
        out = {'schemaVersion': SCHEMA_VERSION,
               'config': self.config,
               'seed': self.seed,
               'basis': self.basis,
               'corpus': self.corpus,
               'estimates': self.estimates,
               'ledger': self.ledger,
               'violations': self.violations,
               'flags': self.flags,
               'readings': self.readings,
               'stages': self.stages,
               'timing': self.timing,
               'passed': self.passed}
        if self.tables is not None:
            out['tables'] = {'header': list(TABLE_HEADER), 'rows': self.tables}
        return out

def _estimate_dict(est):
    return {'name': est.name, 'value': est.value, 'witness': est.witness,
            'corpusId': est.corpus_id, 'isLowerBound': est.is_lower_bound,
            'scope': est.scope, 'infeasible': est.infeasible}

def _ledger_dict(entry):
    return {'id': entry.id, 'lhsName': entry.lhs_name, 'lhsValue': entry.lhs_value,
            'rhsFormulaId': entry.rhs_formula_id, 'rhsValue': entry.rhs_value,
            'status': entry.status, 'asserted': entry.asserted, 'tolerance': entry.tolerance}

def _ratio(num, den):
    if den < ZERO_TOL:
        return None
    return num / den

def _table_rows(profiles):
    rows = []
    for p in profiles:
        if p.errors is None:
            continue
        order = ordering_of(p.coeffs)
        for m in range(len(p.families)):
            r = p.residuals[tuple(sorted(order[:m]))]
            e = p.errors
            sigma, bpe = e.sigma[m].value, e.bpe[m].value
            rho = e.rho[m].value if m else None
            varrho = e.varrho[m].value if m else None
            rows.append([p.item, m, r, sigma, rho, varrho, bpe,
                         _ratio(r, sigma), _ratio(r, bpe),
                         None if rho is None else _ratio(r, rho),
                         None if varrho is None else _ratio(r, varrho),
                         _ratio(r, p.norm)])
    return rows

def _readings(field):
    readings = {
        'truncation': 'threshold times the signed indicator norm of the greedy set',
        'slc': 'f scaled to largest coefficient magnitude 1; f = 0 included',
        'thagGrid': 'a in {1/2, 1, 2, 4} times the threshold, signs absorb -a; golden refinement',
        'th2': 'Cq (1 + 2^p Ds^p GammaT^p)^(1/p)'}
    if field == 'real':
        readings['th1'] = 'Cpgu^2 in place of K and D'
    else:
        readings['th1'] = 'K2(Cpgu, p) from the sign net in place of K'
        readings['lemma42'] = 'K <= K2(Cpgu, p)'
    return readings

def run_verification(basis, spec = None, options = None, config = None):
    """Run every stage on one basis.

    Args:
        basis (Basis): The basis under test.
        spec (CorpusSpec, optional): Corpus generation and closure parameters.
        options (VerifyOptions, optional): Budget, threads and table output.
        config (dict, optional): Echoed into the report.

    Returns:
        RunReport: never raises for budget exhaustion.
    """
    spec = spec or CorpusSpec()
    options = options or VerifyOptions()
    space = basis.space
    report = RunReport(config = config or {}, seed = spec.seed, basis = basis.descriptor())
    report.readings = _readings(space.field.name)

    def stage(name, work):
        budget = SearchBudget(options.budget)
        start = time.perf_counter()
        log.info(f'Stage {name} on {basis.name}.')
        try:
            result = work(budget)
            report.stages[name] = OK
        except SearchBudgetError as err:
            log.warning(f'Stage {name}: {err}')
            result = None
            report.stages[name] = BUDGET_EXCEEDED
        report.timing[name] = budget.used
        log.info(f'Stage {name} finished after {time.perf_counter() - start:.2f}s ({budget}).')
        return result

    gen_stats, closure_stats = {}, {}
    base = stage('corpus', lambda b: generate_corpus(basis, spec, stats = gen_stats))
    closure = set()
    corpus = stage('closure', lambda b: close_corpus(basis, base, spec, stats = closure_stats))
    if corpus is None:
        corpus = base
    else:
        closure = {f for f in CLOSURE_FLAGS if getattr(spec, f)}
    cid = corpus_digest(corpus)
    report.corpus = {'base': len(base), 'closed': len(corpus), 'digest': cid,
                     'sources': gen_stats, 'closure': closure_stats}
    if len(corpus) == 0:
        for name in ('profiles', 'geometry', 'estimates', 'scoped'):
            report.stages[name] = SKIPPED
        report.ledger = [_ledger_dict(e) for e in bound_ledger({}, space.p, space.field)]
        return report

    # Pointwise chain checks.
    def profiles_stage(budget):
        profiles = profile_corpus(basis, corpus, budget, threads = options.threads)
        for p in profiles:
            if p.errors is None:
                continue
            for msg in chain_violations(p.errors, tol = SLACK_TOL):
                report.violations.append({'stage': 'profiles', 'item': p.item, 'message': msg})
        return profiles
    profiles = stage('profiles', profiles_stage)

    def geometry_stage(budget):
        n = len(corpus)
        pairs = [(i, (i + 1) % n) for i in range(min(options.geometry_pairs, n))]
        for i, j in pairs:
            slack = check_p_triangle(space, corpus[i], corpus[j])
            budget.charge(3)
            if slack < -SLACK_TOL:
                report.violations.append({'stage': 'geometry', 'item': i,
                                          'message': f'p-triangle slack {slack!r} with item {j}'})
        for i in range(min(options.lemma_items, n)):
            c = coefficients(basis, corpus[i])
            lhs, rhs_b, rhs_a = verify_convexity_lemma(space, basis.X.T, c, budget)
            if lhs > rhs_b + SLACK_TOL:
                report.violations.append({'stage': 'geometry', 'item': i,
                                          'message': f'convexity lemma (subsets) {lhs!r} > {rhs_b!r}'})
            if not space.is_complex and lhs > rhs_a + SLACK_TOL:
                report.violations.append({'stage': 'geometry', 'item': i,
                                          'message': f'convexity lemma (signs) {lhs!r} > {rhs_a!r}'})
        return True
    stage('geometry', geometry_stage)

    # Estimates on the closed corpus.
    estimates = {}

    def estimates_stage(budget):
        estimates['K'] = estimate_unconditionality(basis, corpus, budget, corpus_id = cid)
        estimates['D'] = estimate_democracy(basis, budget = budget)
        estimates['Ds'] = estimate_democracy(basis, superdemocratic = True, budget = budget)
        estimates['Delta'] = estimate_slc(basis, corpus, budget = budget, corpus_id = cid)
        estimates['Cplus'] = estimate_positive_cone(basis, corpus, budget, corpus_id = cid)
        if profiles is None:
            raise SearchBudgetError('Greedy-type estimates need the error profiles.')
        estimates['Cq'] = estimate_quasi_greedy(basis, corpus, profiles, corpus_id = cid)
        estimates.update(greedy_constants(basis, corpus, profiles, corpus_id = cid))
        estimates['GammaT'] = estimate_truncation(basis, corpus, profiles, budget, corpus_id = cid)
        cdis, cend, cend2 = estimate_thag_variants(basis, corpus, profiles, budget, corpus_id = cid)
        estimates.update({'Cdis': cdis, 'Cend': cend, 'Cend2': cend2})
        return True
    stage('estimates', estimates_stage)

    # Democracy over the pairs the padding can close.
    def scoped_stage(budget):
        if basis.dim >= 2:
            estimates['D@closable'] = estimate_democracy(basis, closable = True, budget = budget)
        return True
    if closure:
        stage('scoped', scoped_stage)
    else:
        report.stages['scoped'] = SKIPPED

    report.estimates = {k: _estimate_dict(v) for k, v in estimates.items()}
    exact = is_exact(basis)
    ledger = bound_ledger(estimates, space.p, space.field, exact = exact, closure = closure)
    report.ledger = [_ledger_dict(e) for e in ledger]
    for e in ledger.failures():
        log.warning(f'Asserted ledger entry {e.id} violated: {e.lhs_value!r} > {e.rhs_value!r}.')

    value = lambda k: estimates[k].value if k in estimates else None
    flags = []
    if value('K') is not None and value('K') > 1 + FLAG_TOL:
        flags.append('conditional')
    if value('Cq') is not None and value('Cq') > 1 + FLAG_TOL:
        flags.append('quasi-greedy-above-one')
    if value('D') is not None and value('D') > 1 + FLAG_TOL:
        flags.append('not-democratic')
    if not exact:
        flags.append('greedy-bounds-informational')
    if any(e.infeasible for e in estimates.values()):
        flags.append('infeasible')
    if space.is_complex:
        flags.append('net-resolution')
    report.flags = flags

    if options.tables and profiles is not None:
        report.tables = _table_rows(profiles)
    return report

# ~~~~~~~~~~~~~~~~~~~~ #
# Report comparison    #
# ~~~~~~~~~~~~~~~~~~~~ #

def _flatten(obj, prefix = ''):
    out = {}
    if isinstance(obj, dict):
        for k, v in obj.items():
            out.update(_flatten(v, f'{prefix}.{k}' if prefix else str(k)))
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            out.update(_flatten(v, f'{prefix}.{i}' if prefix else str(i)))
        if not obj:
            out[prefix] = []
    else:
        out[prefix] = obj
    return out

def _is_number(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool)

def compare_reports(a, b):
    """Fields that differ between two reports.

    Reports are compared as JSON-like dicts (RunReport objects are
    converted). Numbers count as equal within 1e-9.

    Returns:
        list of DiffEntry in natural path order; empty for equal reports.

    Raises:
        ReportSchemaError: different or missing schema versions.
    """
    a = jsonable(a.to_dict() if isinstance(a, RunReport) else a)
    b = jsonable(b.to_dict() if isinstance(b, RunReport) else b)
    va, vb = a.get('schemaVersion'), b.get('schemaVersion')
    if va is None or va != vb:
        raise ReportSchemaError(f'Cannot compare schema versions {va} and {vb}.')
    fa, fb = _flatten(a), _flatten(b)
    diff = []
    for path in natsorted(set(fa) | set(fb)):
        x, y = fa.get(path), fb.get(path)
        if path not in fa or path not in fb:
            diff.append(DiffEntry(path, x, y))
        elif _is_number(x) and _is_number(y):
            if x != y and not abs(x - y) <= DIFF_TOL:
                diff.append(DiffEntry(path, x, y))
        elif x != y:
            diff.append(DiffEntry(path, x, y))
    return diff
