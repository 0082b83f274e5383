# -*- coding: utf-8 -*-
#
# roundlab documentation build configuration file.
#
# This file is execfile()d with the current directory set to its containing dir.

import sys
import os
from datetime import datetime

sys.path.insert(0, os.path.abspath('..'))
import roundlab

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
    'sphinx.ext.doctest',
    'sphinx.ext.intersphinx',
    'sphinx.ext.todo',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinxarg.ext',
]

# Napoleon settings
napoleon_google_docstring = False
napoleon_numpy_docstring = True
napoleon_include_private_with_doc = False
napoleon_include_special_with_doc = True
napoleon_use_admonition_for_examples = False
napoleon_use_admonition_for_notes = True
napoleon_use_admonition_for_references = False
napoleon_use_ivar = False
napoleon_use_param = True
napoleon_use_rtype = True

templates_path = ['.templates']
source_suffix = '.rst'
master_doc = 'index'

project = "roundlab User's Guide"
copyright = '2024-%s, roundlab developers' % datetime.now().year
author = 'roundlab developers'

version = roundlab.__version__
release = version

language = None
exclude_patterns = ['_build']
pygments_style = 'sphinx'
todo_include_todos = True

# -- Options for HTML output ----------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_short_title = "roundlab %s documentation" % version
html_last_updated_fmt = '%b %d, %Y'
html_show_sourcelink = True
html_show_sphinx = False
html_show_copyright = True
html_search_language = 'en'
htmlhelp_basename = 'roundlabdoc'

# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'roundlab', 'roundlab %s Documentation' % version,
     [author], 1)
]

intersphinx_mapping = {'python': ('https://docs.python.org/3', None),
                       'numpy': ('https://numpy.org/doc/stable/', None),
                       'networkx': ('https://networkx.org/documentation/stable/', None)}
