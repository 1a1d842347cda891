#!/usr/bin/env python
#
#  greedyapprox/framework.py
#  GreedyApproxProject
#
import logging
log = logging.getLogger(__name__)

import os
import sys
import argparse
import numpy as np
from dataclasses import dataclass, field as dc_field

from . import __version__
from .spaces import SpaceError, SearchBudgetError, eval_norm
from .basis import BasisError, reconstruct
from .tga import TGAError, greedy_ordering, greedy_sets, greedy_sum
from .errors import sigma_m, rho_m, varrho_m
from .constants import CONSTANT_NAMES, ConstantsError, estimate_constants
from .catalog import (DEFAULT_CATALOG, CatalogError, CorpusSpec, make_basis,
                      generate_corpus, close_corpus)
from .parser import BasisIdParseError, parse_coefficients
from .verify import (SCHEMA_VERSION, BUDGET_EXCEEDED, TABLE_HEADER, ReportSchemaError,
                     VerifyOptions, run_verification, compare_reports)
from .ioutils import (ConfigError, atomic_write, read_json, write_json, write_csv,
                      load_basis_file)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_BUDGET = 2
EXIT_VERIFY = 3

INPUT_ERRORS = (SpaceError, BasisError, TGAError, CatalogError, BasisIdParseError,
                ConfigError, ReportSchemaError, ConstantsError, OSError)

class colors:
    RED = '\033[91m'
    YELLOW = '\033[93m'
    BLUE = '\033[94m'
    PINK = '\033[95m'
    CYAN = '\033[96m'
    ENDC = '\033[0m'

class ColorFormatter(logging.Formatter):
    def __init__(self, msg, use_color = True):
        logging.Formatter.__init__(self, msg)
        self.use_color = use_color
        self.COLORS = {
            'DEBUG': colors.CYAN,
            'INFO': colors.BLUE,
            'WARNING': colors.YELLOW,
            'ERROR': colors.RED,
            'CRITICAL': colors.PINK,
        }
        self.RESET = colors.ENDC

    def format(self, record):
        levelname = record.levelname
        if self.use_color:
            record.levelname = self.COLORS.get(levelname, '') + levelname + self.RESET
        try:
            return super(ColorFormatter, self).format(record)
        finally:
            record.levelname = levelname

def header(msg):
    return ' {} '.format(msg).center(80, '*')

def set_handle_verbosity(h, v):
    if v == 0:
        h.setLevel(logging.WARNING)
    elif v == 1:
        h.setLevel(logging.INFO)
    elif v == 2:
        h.setLevel(logging.DEBUG)
    elif v >= 3:
        h.setLevel(logging.NOTSET)

# ~~~~~~~~~~~~~~~~~~ #
# Run configuration  #
# ~~~~~~~~~~~~~~~~~~ #

_CONFIG_KEYS = {'basis': 'basis', 'basisFile': 'basis_file', 'field': 'field',
                'netOrder': 'net_order', 'normalize': 'normalize', 'corpus': 'corpus',
                'budget': 'budget', 'threads': 'threads', 'out': 'out',
                'format': 'format', 'options': 'options'}

@dataclass
class RunConfig:
    """Everything a subcommand needs; serializable to the --config file format.

    ``options`` holds subcommand options (``f`` and ``m`` for tga).
    """
    basis: str = None
    basis_file: str = None
    field: str = 'real'
    net_order: int = 8
    normalize: bool = False
    corpus: CorpusSpec = dc_field(default_factory = CorpusSpec)
    budget: int = None
    threads: int = 1
    out: str = None
    format: str = None
    options: dict = dc_field(default_factory = dict)

    def to_dict(self):
        out = {key: getattr(self, attr) for key, attr in _CONFIG_KEYS.items()}
        out['corpus'] = self.corpus.to_dict()
        out['options'] = dict(self.options)
        return out

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigError('A run configuration must be a JSON object.')
        unknown = set(data) - set(_CONFIG_KEYS)
        if unknown:
            raise ConfigError(f'Unknown run configuration fields: {sorted(unknown)}.')
        kwargs = {_CONFIG_KEYS[k]: v for k, v in data.items()}
        if 'corpus' in kwargs:
            kwargs['corpus'] = CorpusSpec.from_dict(kwargs['corpus'] or {})
        if 'options' in kwargs:
            kwargs['options'] = dict(kwargs['options'] or {})
        return cls(**kwargs)

def build_config(args):
    """ The --config file (if any) overridden by explicit command-line flags. """
    config = RunConfig.from_dict(read_json(args.config, is_file = True)) if args.config else RunConfig()
    for attr in ('basis', 'basis_file', 'field', 'net_order', 'budget', 'threads', 'out', 'format'):
        value = getattr(args, attr, None)
        if value is not None:
            setattr(config, attr, value)
    if args.normalize:
        config.normalize = True
    if args.seed is not None:
        config.corpus.seed = args.seed
    for attr in ('f', 'm'):
        value = getattr(args, attr, None)
        if value is not None:
            config.options[attr] = value
    return config

def load_basis(config):
    if config.basis_file:
        return load_basis_file(config.basis_file, normalize = config.normalize)
    if config.basis:
        return make_basis(config.basis, config.field, normalize = config.normalize,
                          net_order = config.net_order)
    raise ConfigError('No basis given, use --basis or --basis-file.')

def _emit(text, out):
    if out:
        atomic_write(out, text)
        log.info(f'Wrote {out}.')
    else:
        sys.stdout.write(text)

def _sidecar(out, ext):
    return None if out is None else os.path.splitext(out)[0] + ext

# ~~~~~~~~~~~~~~~ #
# Subcommands     #
# ~~~~~~~~~~~~~~~ #

def cmd_constants(config, list_only = False):
    """ Estimate every constant on the closed corpus of one basis. """
    if list_only:
        sys.stdout.write('\n'.join(DEFAULT_CATALOG) + '\n')
        return EXIT_OK
    basis = load_basis(config)
    log.info(header(f'Constants of {basis.name}'))
    corpus = close_corpus(basis, generate_corpus(basis, config.corpus), config.corpus)
    results, code = {}, EXIT_OK
    try:
        estimate_constants(basis, corpus, config.budget, config.threads, results)
    except SearchBudgetError as err:
        log.error(f'Estimation aborted: {err}')
        code = EXIT_BUDGET

    if config.format == 'csv':
        rows = [[name, results[name].value, results[name].scope, results[name].infeasible]
                for name in CONSTANT_NAMES if name in results]
        _emit(write_csv(('name', 'value', 'scope', 'infeasible'), rows), config.out)
    else:
        doc = {'schemaVersion': SCHEMA_VERSION, 'basis': basis.descriptor(),
               'corpus': {'size': len(corpus)},
               'complete': code == EXIT_OK,
               'estimates': {name: est._asdict() for name, est in results.items()}}
        _emit(write_json(doc), config.out)
    return code

def cmd_tga(config):
    """Greedy ordering, greedy sets, residuals and errors of one vector.

    One row per m = 0..dim (or only the requested m).
    """
    basis = load_basis(config)
    if 'f' not in config.options:
        raise ConfigError('tga needs a coefficient list, use --f.')
    coeffs = parse_coefficients(str(config.options['f']))
    if len(coeffs) != basis.dim:
        raise SpaceError(f'Coefficient list has {len(coeffs)} entries, basis dimension is {basis.dim}.')
    space = basis.space
    c = np.array([complex(x) for x in coeffs])
    if not space.is_complex:
        if np.any(c.imag != 0):
            raise SpaceError('Complex coefficients need --field complex.')
        c = c.real
    f = reconstruct(basis, c)
    m_values = range(basis.dim + 1)
    if config.options.get('m') is not None:
        m_values = [int(config.options['m'])]
    order = greedy_ordering(basis, f)
    rows = []
    for m in m_values:
        family = greedy_sets(basis, f, m)
        residual = eval_norm(space, f - greedy_sum(basis, f, m))
        sigma = sigma_m(basis, f, m, config.budget).value
        rho = rho_m(basis, f, m, config.budget).value if m else None
        varrho = varrho_m(basis, f, m, config.budget).value if m else None
        sets = ';'.join(' '.join(str(i) for i in A) for A in family.sets)
        rows.append([m, sets, residual, sigma, rho, varrho])

    if config.format == 'json':
        keys = ('m', 'greedySets', 'residual', 'sigma', 'rho', 'varrho')
        doc = {'ordering': order, 'rows': [dict(zip(keys, r)) for r in rows]}
        _emit(write_json(doc), config.out)
    else:
        text = '# ordering: ' + ' '.join(str(i) for i in order) + '\n'
        text += write_csv(('m', 'greedy_sets', 'residual', 'sigma', 'rho', 'varrho'), rows)
        _emit(text, config.out)
    return EXIT_OK

def cmd_verify(config):
    """ Run the verification pipeline on one basis or on the default catalog. """
    if config.basis or config.basis_file:
        bases = [load_basis(config)]
    else:
        bases = [make_basis(i, config.field, normalize = config.normalize,
                            net_order = config.net_order) for i in DEFAULT_CATALOG]
    options = VerifyOptions(budget = config.budget, threads = config.threads,
                            tables = config.format == 'csv')
    reports = []
    for basis in bases:
        log.info(header(f'Verifying {basis.name}'))
        reports.append(run_verification(basis, config.corpus, options, config.to_dict()))

    if len(reports) == 1:
        doc = reports[0].to_dict()
    else:
        doc = {'schemaVersion': SCHEMA_VERSION, 'runs': [r.to_dict() for r in reports]}
    _emit(write_json(doc), config.out)
    if options.tables:
        rows = [[b.name] + row for b, r in zip(bases, reports) for row in (r.tables or [])]
        _emit(write_csv(('basis',) + TABLE_HEADER, rows), _sidecar(config.out, '.csv'))

    for b, r in zip(bases, reports):
        for v in r.violations:
            log.error(f"{b.name}: {v['stage']} item {v['item']}: {v['message']}")
    if not all(r.passed for r in reports):
        return EXIT_VERIFY
    if any(BUDGET_EXCEEDED in r.stages.values() for r in reports):
        return EXIT_BUDGET
    return EXIT_OK

def cmd_report_diff(a, b):
    """ Print the fields that differ between two report files. """
    diff = compare_reports(read_json(a, is_file = True), read_json(b, is_file = True))
    for d in diff:
        sys.stdout.write(f'{d.path}: {d.a!r} -> {d.b!r}\n')
    return EXIT_OK if not diff else EXIT_INPUT

# ~~~~~~~~~~~~~~~~~~~~~~ #
# Argument parsing       #
# ~~~~~~~~~~~~~~~~~~~~~~ #

def get_common_args(parser):
    """ Arguments shared by the constants, tga and verify subcommands. """
    inp = parser.add_argument_group('Input Arguments')
    search = parser.add_argument_group('Search Arguments')
    output = parser.add_argument_group('Output Arguments')

    parser.add_argument("-v", "--verbose", action = 'count', default = 0,
            help = "Print logging output. (-vv increases verbosity.)")
    parser.add_argument('--logfile', default = '', action = 'store', metavar = '<str>',
            help = """Redirect logging information to a file.""")
    parser.add_argument('--config', action = 'store', metavar = '</path/to/file>',
            help = """Read a JSON run configuration. Command-line flags
            override its values.""")

    inp.add_argument('--basis', action = 'store', metavar = '<id>',
            help = """A catalog basis: canonical:q:n, weighted:q:w1,w2,...,
            summing:n[:q] or perturbed:n:offdiag[:q].""")
    inp.add_argument('--basis-file', action = 'store', metavar = '</path/to/file>',
            help = "Read the basis from a JSON file.")
    inp.add_argument('--field', choices = ('real', 'complex'), default = None,
            help = "Scalar field of catalog bases (default: real).")
    inp.add_argument('--net-order', type = int, default = None, metavar = '<int>',
            help = "Number of roots of unity in the complex sign net (default: 8).")
    inp.add_argument('--normalize', action = 'store_true',
            help = "Scale the basis vectors to unit norm.")

    search.add_argument('--seed', type = int, default = None, metavar = '<int>',
            help = "Seed of the corpus generator (default: 0).")
    search.add_argument('--budget', type = int, default = None, metavar = '<int>',
            help = """Norm evaluations per search before it aborts (default:
            $GREEDY_APPROX_BUDGET or 10^7).""")
    search.add_argument('--threads', type = int, default = None, metavar = '<int>',
            help = "Worker threads for corpus passes (default: 1).")

    output.add_argument('--format', choices = ('json', 'csv'), default = None,
            help = "Output format.")
    output.add_argument('--out', action = 'store', metavar = '</path/to/file>',
            help = "Write the output to a file instead of stdout.")
    return parser

def get_greedyapprox_args(parser):
    parser.add_argument('--version', action = 'version', version = '%(prog)s ' + __version__)
    common = get_common_args(argparse.ArgumentParser(add_help = False))
    sub = parser.add_subparsers(dest = 'command', metavar = '<command>')
    sub.required = True
    fmt = argparse.ArgumentDefaultsHelpFormatter

    constants = sub.add_parser('constants', parents = [common], formatter_class = fmt,
            help = "Estimate all greedy-type constants of a basis.")
    constants.add_argument('--list', action = 'store_true',
            help = "Print the ids of the default catalog and exit.")

    tga = sub.add_parser('tga', parents = [common], formatter_class = fmt,
            help = "Run the thresholding greedy algorithm on one vector.")
    tga.add_argument('--f', action = 'store', metavar = '<list>',
            help = "Coefficients of the vector, e.g. 4,3,2,1 or 1+2j,0,-1j.")
    tga.add_argument('--m', type = int, default = None, metavar = '<int>',
            help = "Only report this m.")

    sub.add_parser('verify', parents = [common], formatter_class = fmt,
            help = "Run the full verification pipeline and write a report.")

    diff = sub.add_parser('report-diff', formatter_class = fmt,
            help = "Compare two verification reports.")
    diff.add_argument('a', metavar = '<report-a>')
    diff.add_argument('b', metavar = '<report-b>')
    diff.add_argument("-v", "--verbose", action = 'count', default = 0,
            help = "Print logging output.")
    diff.add_argument('--logfile', default = '', action = 'store', metavar = '<str>',
            help = """Redirect logging information to a file.""")
    return parser

def setup_logging(args):
    if args.verbose >= 3: # Get root logger.
        verbose = args.verbose - 2
        logger = logging.getLogger()
        lformat = '[%(asctime)s] %(levelname)s [%(name)s.%(funcName)s:%(lineno)d] %(message)s'
    else:
        verbose = args.verbose
        logger = logging.getLogger('greedyapprox')
        lformat = '%(levelname)s %(message)s'
    logger.setLevel(logging.DEBUG)

    if args.logfile:
        handler = logging.FileHandler(args.logfile)
        handler.setFormatter(logging.Formatter(lformat))
    else:
        handler = logging.StreamHandler()
        handler.setFormatter(ColorFormatter(lformat, use_color = True))
    set_handle_verbosity(handler, verbose)
    logger.addHandler(handler)
    return logger, handler

def main(argv = None):
    """The greedyapprox command line interface.

    Subcommands:
        constants    estimate K, D, Ds, Delta, Cq, Cg, Cag, Cpg, Cpgu, GammaT,
                     Cdis, Cend, Cend2 and Cplus on a closed corpus.
        tga          greedy ordering, greedy sets and approximation errors of
                     one coefficient vector.
        verify       corpus generation, closure, chain checks, estimates and
                     the bound ledger; writes a JSON report.
        report-diff  compare two reports.

    Exit codes: 0 success, 1 input error (or a nonempty report diff), 2 search
    budget exceeded, 3 verification failure.
    """
    parser = argparse.ArgumentParser(
        formatter_class = argparse.ArgumentDefaultsHelpFormatter,
        description = """greedyapprox: Greedy-type constants of finite-dimensional bases.""")
    parser = get_greedyapprox_args(parser)
    args = parser.parse_args(argv)

    # ~~~~~~~~~~~~~ #
    # Logging Setup #
    # ~~~~~~~~~~~~~ #
    logger, handler = setup_logging(args)
    logger.info(header(f"greedyapprox {__version__}"))
    try:
        if args.command == 'report-diff':
            return cmd_report_diff(args.a, args.b)
        if args.command == 'constants' and args.list:
            return cmd_constants(None, list_only = True)
        config = build_config(args)
        if args.command == 'constants':
            return cmd_constants(config)
        if args.command == 'tga':
            return cmd_tga(config)
        return cmd_verify(config)
    except SearchBudgetError as err:
        log.error(f'Search budget exceeded: {err}')
        return EXIT_BUDGET
    except INPUT_ERRORS as err:
        log.error(f'{type(err).__name__}: {err}')
        return EXIT_INPUT
    except ValueError as err:
        log.error(f'Invalid input: {err}')
        return EXIT_INPUT
    finally:
        logger.removeHandler(handler)
        handler.close()

if __name__ == '__main__':
    sys.exit(main())
