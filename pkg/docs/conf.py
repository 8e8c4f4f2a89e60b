# Sphinx configuration for the mcloop documentation.
import os
import sys

sys.path.insert(0, os.path.abspath('..'))

import mcloop  # noqa: E402

extensions = ['sphinx.ext.autodoc',
              'sphinx.ext.intersphinx',
              'sphinx.ext.autosectionlabel',
              'sphinx.ext.mathjax',
              'sphinx.ext.viewcode',
              'sphinx_copybutton']

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "pandas": ("https://pandas.pydata.org/docs/", None),
    "click": ("https://click.palletsprojects.com/en/stable/", None),
}

autosectionlabel_prefix_document = True
autoclass_content = 'both'
autodoc_member_order = 'bysource'

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']

project = 'mcloop'
author = 'mcloop developers'
copyright = '2025, mcloop developers'

# Full release from setuptools_scm; the short version drops the dev/local suffix.
release = mcloop.__version__
version = '.'.join(release.split('.')[:2])

language = 'en'
pygments_style = 'sphinx'

html_theme = 'sphinx_rtd_theme'
htmlhelp_basename = 'mcloopdoc'

latex_documents = [
    (master_doc, 'mcloop.tex', 'mcloop Documentation', author, 'manual'),
]

man_pages = [
    (master_doc, 'mcloop', 'mcloop Documentation', [author], 1),
]


def skip_member(app, what, name, obj, skip, options):
    if getattr(obj, '__private_api__', False):
        return True
    return skip


def setup(app):
    app.connect("autodoc-skip-member", skip_member)
