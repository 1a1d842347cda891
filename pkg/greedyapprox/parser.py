#
#  greedyapprox/parser.py
#  GreedyApproxProject
#
from fractions import Fraction
from collections import namedtuple
from pyparsing import (Word, Literal, Group, Suppress, Combine, Optional, ParseException,
                       nums, delimitedList, StringStart, StringEnd)

BasisId = namedtuple('BasisId', 'family q n weights offdiag name')

class BasisIdParseError(Exception):
    pass

def _number(text):
    if text.endswith('j'):
        return complex(text)
    if '/' in text:
        num, den = text.split('/')
        if int(den) == 0:
            raise ValueError(f'Zero denominator in {text}.')
        return float(Fraction(num) / int(den))
    return float(text)

def number_setup():
    """Numbers as they appear in ids and coefficient lists.

    Format:
      # reals, fractions and complex numbers in Python notation
      2   -0.5   1e-3   1/8   -1/4   1+2j   -1j   0.5-0.25j
    """
    W = Word
    O = Optional
    C = Combine
    L = Literal

    sign = L('-') | L('+')
    digits = W(nums)
    unsigned = C(digits + O(L('.') + O(digits)) | L('.') + digits)
    exponent = C((L('e') | L('E')) + O(sign) + digits)
    real = C(O(sign) + unsigned + O(exponent))

    fraction = C(O(sign) + digits + L('/') + digits)
    imag = C(real + L('j'))
    cplx = C(real + sign + C(unsigned + O(exponent)) + L('j'))

    number = cplx | imag | fraction | real
    return number.setParseAction(lambda s, l, t: _number(t[0]))

def basis_id_setup():
    """Parse a catalog basis identifier.

    Format:
      canonical:q:n                 identity in unit-weight lq
      weighted:q:w1,w2,...          identity in weighted lq (dimension = #weights)
      summing:n[:q]                 summing basis (default q = 1)
      perturbed:n:offdiag[:q]       identity + offdiag on the superdiagonal
    """
    G = Group
    S = Suppress
    O = Optional
    L = Literal

    number = number_setup()
    integer = Word(nums).setParseAction(lambda s, l, t: int(t[0]))
    colon = S(':')

    canonical = L('canonical') + colon + number + colon + integer
    weighted = L('weighted') + colon + number + colon + G(delimitedList(number, ','))
    summing = L('summing') + colon + integer + O(colon + number)
    perturbed = L('perturbed') + colon + integer + colon + number + O(colon + number)

    return StringStart() + (canonical | weighted | summing | perturbed) + StringEnd()

def coefficient_list_setup():
    return StringStart() + delimitedList(number_setup(), ',') + StringEnd()

def parse_basis_id(data):
    """Parses a basis identifier.

    Returns:
        BasisId: family, q, n, weights (list or None), offdiag (or None) and
        the identifier string itself.

    Raises:
        BasisIdParseError: malformed id.
    """
    text = data.strip()
    try:
        tokens = basis_id_setup().parseString(text).asList()
    except (ParseException, ValueError) as err:
        raise BasisIdParseError(f'Cannot parse basis id {data!r}: {err}')

    family = tokens[0]
    if any(isinstance(t, complex) for t in tokens[1:] if not isinstance(t, list)):
        raise BasisIdParseError(f'Complex parameter in basis id {data!r}.')
    if family == 'canonical':
        _, q, n = tokens
        return BasisId(family, q, n, None, None, text)
    if family == 'weighted':
        _, q, weights = tokens
        if any(isinstance(w, complex) for w in weights):
            raise BasisIdParseError(f'Complex weight in basis id {data!r}.')
        return BasisId(family, q, len(weights), weights, None, text)
    if family == 'summing':
        n = tokens[1]
        q = tokens[2] if len(tokens) > 2 else 1.
        return BasisId(family, q, n, None, None, text)
    n, offdiag = tokens[1], tokens[2]
    q = tokens[3] if len(tokens) > 3 else 1.
    return BasisId(family, q, n, None, offdiag, text)

def parse_coefficients(data):
    """Parses a comma-separated coefficient list like ``4,3,2,1`` or ``1+2j,0,-1j``.

    Returns:
        list: floats and complex numbers.
    """
    try:
        return coefficient_list_setup().parseString(data.strip()).asList()
    except (ParseException, ValueError) as err:
        raise BasisIdParseError(f'Cannot parse coefficient list {data!r}: {err}')
