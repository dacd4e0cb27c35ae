"""Builds the optional compiled kernel extension.

The package is pure Python; the extension only accelerates inner loops.
A failed or skipped extension build leaves a fully working install that
falls back to the pure-Python kernels at import time.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "splitg2._kernels_c",
                ["src/splitg2/_kernels_c.pyx"],
                optional=True,
            )
        ],
        language_level="3",
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
