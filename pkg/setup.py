"""Builds the optional compiled ring kernels; the package works without them."""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("DUNITARY_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/dunitary/_kernels.pyx"],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
