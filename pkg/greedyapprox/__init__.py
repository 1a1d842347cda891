#
#  greedyapprox/__init__.py
#  GreedyApproxProject
#
__version__ = "0.1"

import logging
logging.getLogger(__name__).addHandler(logging.NullHandler())
