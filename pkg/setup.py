"""Builds the compiled kernel extension.

The package works without it (matchdex._kernels falls back to the numpy
implementations), so the extension is best-effort: a toolchain failure
degrades to the pure path instead of breaking the install.
"""

import numpy
from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/matchdex/_native.pyx",
        compiler_directives={"language_level": "3"},
    )
    for ext in ext_modules:
        ext.include_dirs.append(numpy.get_include())
        ext.define_macros.append(("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION"))
        ext.extra_compile_args.append("-O3")
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
