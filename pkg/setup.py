"""Build script for the optional compiled kernels.

The package works without the extension (pure-Python fallbacks are selected
at import time); the extension only accelerates the hot decoding kernels.
"""
from setuptools import setup
from Cython.Build import cythonize

setup(
    ext_modules=cythonize(
        ["src/ttimatch/_kernels/_core.pyx"],
        language_level=3,
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    ),
)
