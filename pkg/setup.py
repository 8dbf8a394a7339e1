"""Build script: compiles the optional Cython mining kernel.

The package works without the extension (a pure-Python twin is selected at
import time), so any failure here is demoted to a warning and the build
continues extension-free.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/esdp/kernels/_fast.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # no Cython / no compiler: pure-Python fallback
    print(f"esdp: skipping compiled kernel ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
