# -*- coding: utf-8 -*-
#
# Configuration file for the Sphinx documentation builder.

# -- Path setup --------------------------------------------------------------

import os
import sys
sys.path.insert(0, os.path.abspath('..'))


# -- Project information -----------------------------------------------------

project = 'HeraldedFock'
copyright = '2026, HeraldedFock Authors'
author = 'HeraldedFock Authors'

about = {}
with open(os.path.join(os.path.abspath('..'), 'HeraldedFock', '__version__.py')) as f:
    exec(f.read(), about)
# The short X.Y version
version = about['__version__']
# The full version, including alpha/beta/rc tags
release = about['__version__']


# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'
language = None
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'

autodoc_mock_imports = ['tqdm']


# -- Options for HTML output -------------------------------------------------

html_theme = 'alabaster'
html_static_path = ['_static']
htmlhelp_basename = 'HeraldedFockdoc'


# -- Options for LaTeX output ------------------------------------------------

latex_elements = {}
latex_documents = [
    (master_doc, 'HeraldedFock.tex', 'HeraldedFock Documentation',
     'HeraldedFock Authors', 'manual'),
]


# -- Options for manual page output ------------------------------------------

man_pages = [
    (master_doc, 'heraldedfock', 'HeraldedFock Documentation',
     [author], 1)
]


# -- Options for Texinfo output ----------------------------------------------

texinfo_documents = [
    (master_doc, 'HeraldedFock', 'HeraldedFock Documentation',
     author, 'HeraldedFock', 'Heralded Fock states from a continuous wave OPO.',
     'Miscellaneous'),
]
