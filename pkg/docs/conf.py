# -*- coding: utf-8 -*-
#
# greedyapprox documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import sys
import os

sys.path.insert(0, os.path.abspath('..'))

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.coverage',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinx.ext.napoleon', # Google-style doc strings
]

napoleon_include_special_with_doc = True

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'greedyapprox'
copyright = u'2026, the greedyapprox developers'

# The short X.Y version.
version = '0.1'
# The full version, including alpha/beta/rc tags.
release = '0.1'

exclude_patterns = ['_build']
pygments_style = 'sphinx'

# -- Options for HTML output ----------------------------------------------

html_theme = 'default'
html_static_path = ['_static']
htmlhelp_basename = 'greedyapproxdoc'

# -- Options for LaTeX output ---------------------------------------------

latex_elements = {
}

latex_documents = [
  ('index', 'greedyapprox.tex', u'greedyapprox Documentation',
   u'the greedyapprox developers', 'manual'),
]

# -- Options for manual page output ---------------------------------------

man_pages = [
    ('index', 'greedyapprox', u'greedyapprox Documentation',
     [u'the greedyapprox developers'], 1)
]

intersphinx_mapping = {'python': ('https://docs.python.org/3', None)}
