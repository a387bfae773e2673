"""Build script. Compiles the optional fast series core; falls back cleanly.

The package works without the extension (a numpy implementation of the same
routines is selected at import time), so any build failure here downgrades to
a warning instead of aborting the install.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/stokes2d/_seriescore.pyx"],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
    include_dirs = [numpy.get_include()]
    for ext in ext_modules:
        ext.include_dirs = include_dirs
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"warning: compiled core skipped ({exc}); pure-python backend will be used",
          file=sys.stderr)
    ext_modules = []

setup(ext_modules=ext_modules)
