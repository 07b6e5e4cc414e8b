"""Build the optional compiled kernels; the package works without them."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("TWISTKIT_NO_EXT", "") not in ("1", "true", "yes"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            ["src/twistkit/_kernels.pyx"],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
