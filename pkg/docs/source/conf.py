# Sphinx configuration for the pypqc documentation.
#
# The API reference is regenerated by sphinx-apidoc on every build and the
# README is linked in as the landing page.

import datetime
import os
import sys
import tempfile
from inspect import getsourcefile

DOCS_SOURCE_DIR = os.path.dirname(os.path.abspath(getsourcefile(lambda: 0)))
DOCS_DIR = os.path.dirname(DOCS_SOURCE_DIR)
REPO_DIR = os.path.dirname(DOCS_DIR)

sys.path.insert(0, REPO_DIR)

from pypqc import __meta__ as meta  # noqa: E402 isort:skip

project = meta.name
project_path = meta.path
author = meta.author
copyright = f"{datetime.datetime.now().year}, {author}"
release = meta.version
version = ".".join(release.split(".")[0:2])


def run_apidoc(_):
    """Regenerate docs/source/packages, skipping the test modules."""
    from sphinx.ext import apidoc

    apidoc.main(
        [
            "--force",
            "--separate",
            "--module-first",
            "-o",
            os.path.join(DOCS_SOURCE_DIR, "packages"),
            os.path.join(REPO_DIR, project_path),
            os.path.join(REPO_DIR, project_path, "tests"),
        ]
    )


def retitle_modules(_):
    pth = os.path.join(DOCS_SOURCE_DIR, "packages", "modules.rst")
    with open(pth) as f:
        lines = f.read().splitlines()
    lines[0] = "API Reference"
    lines[1] = "============="
    with open(pth, "w") as f:
        f.write("\n".join(lines))


def link_readme(_):
    """Symlink README.rst to docs/source/readme.rst."""
    source = os.path.join(REPO_DIR, "README.rst")
    target = os.path.join(DOCS_SOURCE_DIR, "readme.rst")
    tmp_path = tempfile.mktemp(dir=DOCS_SOURCE_DIR)
    try:
        os.symlink(source, tmp_path)
        os.replace(tmp_path, target)
    finally:
        if os.path.islink(tmp_path):
            os.remove(tmp_path)


def setup(app):
    app.connect("builder-inited", link_readme)
    app.connect("builder-inited", run_apidoc)
    app.connect("builder-inited", retitle_modules)


extensions = [
    "myst_parser",
    "sphinx.ext.autodoc",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
    "sphinx.ext.napoleon",
    "sphinx_search.extension",
]

napoleon_google_docstring = True
napoleon_numpy_docstring = True
napoleon_include_init_with_doc = True
napoleon_use_rtype = True
napoleon_use_param = True

templates_path = ["_templates"]
source_suffix = [".rst", ".md"]
master_doc = "index"
exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]

html_theme = "sphinx_book_theme"
html_static_path = ["_static"]
htmlhelp_basename = project + "doc"

man_pages = [(master_doc, project, project + " Documentation", [author], 1)]

intersphinx_mapping = {
    "python": (f"https://docs.python.org/{sys.version_info.major}", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
}
