#
#  greedyapprox/ioutils.py
#  GreedyApproxProject
#
import logging
log = logging.getLogger(__name__)

import os
import io
import csv
import json
import tempfile
import numpy as np

from .spaces import SpaceError, Space, weighted_lq, matrix_induced, make_field
from .basis import build_basis

class ConfigError(Exception):
    pass

def atomic_write(path, text):
    """ Write text to path through a temporary file in the same directory. """
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir = directory, prefix = '.tmp-', suffix = os.path.basename(path))
    try:
        with os.fdopen(fd, 'w') as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise

def jsonable(obj):
    """ Convert numpy values, complex numbers ([re, im]) and tuples for json. """
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if hasattr(obj, '_asdict'):
        return jsonable(obj._asdict())
    if isinstance(obj, np.ndarray):
        return [jsonable(x) for x in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj

def write_json(obj, fh = None):
    """ Dump obj as indented, key-sorted JSON; returns the string if fh is None. """
    text = json.dumps(jsonable(obj), indent = 2, sort_keys = True) + '\n'
    if fh is None:
        return text
    fh.write(text)

def read_json(data, is_file = False):
    try:
        if is_file:
            with open(data) as fh:
                return json.load(fh)
        return json.loads(data)
    except ValueError as err:
        raise ConfigError(f'Malformed JSON: {err}')

def write_csv(header, rows, fh = None):
    """Write a table with 17 significant digits for every float.

    Returns:
        The CSV text if fh is None.
    """
    def cell(x):
        if isinstance(x, (float, np.floating)):
            return '%.17g' % x
        if x is None:
            return ''
        return str(x)
    out = io.StringIO() if fh is None else fh
    writer = csv.writer(out, lineterminator = '\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([cell(x) for x in row])
    if fh is None:
        return out.getvalue()

def _matrix(data, field, what):
    rows = []
    for row in data:
        if not isinstance(row, list):
            raise ConfigError(f'{what} must be a list of rows.')
        values = []
        for x in row:
            if isinstance(x, list):
                if len(x) != 2 or field.name != 'complex':
                    raise ConfigError(f'{what}: complex entries are [re, im] pairs in a complex space.')
                values.append(complex(x[0], x[1]))
            elif isinstance(x, (int, float)) and not isinstance(x, bool):
                values.append(x)
            else:
                raise ConfigError(f'{what}: entry {x!r} is not a number.')
        rows.append(values)
    return np.array(rows, dtype = complex if field.name == 'complex' else float)

def basis_from_dict(data, normalize = False):
    """Build a basis from its file representation.

    Format:
      {"field": "real" | "complex", "netOrder": 8, "p": 1,
       "norm": {"kind": "weightedLq", "q": 1, "weights": [...]}
             | {"kind": "matrixInduced", "q": 2, "matrix": [[...]]},
       "matrix": [[...]], "dual": [[...]], "name": "..."}

    Column j of "matrix" is the basis vector x_j; "dual" is optional and
    validated against the inverse. Complex entries are [re, im] pairs.
    """
    try:
        field = make_field(data.get('field', 'real'), data.get('netOrder', 8))
        X = _matrix(data['matrix'], field, 'matrix')
        norm = data['norm']
        if norm.get('kind', 'weightedLq') == 'weightedLq':
            spec = weighted_lq(norm['q'], norm.get('weights', np.ones(len(X))))
        elif norm['kind'] == 'matrixInduced':
            spec = matrix_induced(_matrix(norm['matrix'], field, 'norm matrix'), norm['q'])
        else:
            raise ConfigError(f"Unknown norm kind {norm['kind']!r}.")
        space = Space(len(X), spec, field, p = data.get('p'))
    except KeyError as err:
        raise ConfigError(f'Basis description lacks {err}.')
    except SpaceError as err:
        raise ConfigError(f'Invalid basis description: {err}')
    dual = _matrix(data['dual'], field, 'dual') if 'dual' in data else None
    return build_basis(space, X, dual = dual, normalize = normalize, name = data.get('name'))

def load_basis_file(filename, normalize = False):
    """ Read a basis from a JSON file (see :func:`basis_from_dict`). """
    data = read_json(filename, is_file = True)
    if not isinstance(data, dict):
        raise ConfigError(f'{filename}: expected a JSON object.')
    return basis_from_dict(data, normalize = normalize)

def basis_to_dict(basis, dual = False):
    desc = basis.space.descriptor()
    data = {'field': desc['field'], 'p': desc['p'], 'norm': desc['norm'],
            'matrix': basis.X}
    if 'netOrder' in desc:
        data['netOrder'] = desc['netOrder']
    if basis.name:
        data['name'] = basis.name
    if dual:
        data['dual'] = basis.Xdual
    return jsonable(data)

def write_basis_file(basis, filename, dual = False):
    atomic_write(filename, write_json(basis_to_dict(basis, dual = dual)))
