# -*- coding: utf-8 -*-
#
# ramsey-lab documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import sys
import os

# If extensions (or modules to document with autodoc) are in another directory,
# add these directories to sys.path here.
sys.path.insert(0, os.path.abspath(os.path.join(os.path.pardir, os.path.pardir)))

from ramsey_lab import __version__  # noqa: E402

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.coverage',
    'sphinx.ext.viewcode',
    'sphinx.ext.autodoc',
]

templates_path = ['_templates']

source_suffix = '.rst'

master_doc = 'index'

project = u'ramsey-lab'
copyright = u'2026, ramsey-lab contributors'

version = '.'.join(__version__.split('.')[:2])
release = __version__

exclude_patterns = []

pygments_style = 'sphinx'

# -- Options for HTML output ----------------------------------------------

html_theme = 'default'

html_static_path = ['_static']

htmlhelp_basename = 'ramsey-labdoc'

# -- Options for LaTeX output ---------------------------------------------

latex_elements = {
}

latex_documents = [
  ('index', 'ramsey-lab.tex', u'ramsey-lab Documentation',
   u'ramsey-lab contributors', 'manual'),
]

# -- Options for manual page output ---------------------------------------

man_pages = [
    ('index', 'ramsey-lab', u'ramsey-lab Documentation',
     [u'ramsey-lab contributors'], 1)
]

# -- Options for Texinfo output -------------------------------------------

texinfo_documents = [
  ('index', 'ramsey-lab', u'ramsey-lab Documentation',
   u'ramsey-lab contributors', 'ramsey-lab', 'Two-round triangle game laboratory.',
   'science'),
]

autodoc_member_order = 'bysource'
