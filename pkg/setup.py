"""Optional compiled kernel for the sparse Laurent arithmetic.

The package is pure Python; if Cython and a C toolchain are available the
hot-loop module mpqg._laurent_c is compiled and picked up at import time,
otherwise the pure fallback mpqg._laurent_py is used with identical
semantics.  Failure to compile is never an installation error.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/mpqg/_laurent_c.pyx"],
        language_level=3,
        quiet=True,
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
