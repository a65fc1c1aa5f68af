"""Builds the compiled kernels when Cython and a C compiler are available.

Without them the package still installs; ``noncross.kernels`` then falls back
to the pure-Python implementation at import time.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:  # no build toolchain: pure-Python install
    ext_modules = []
else:
    ext_modules = cythonize([Extension(
        "noncross.kernels._core",
        ["src/noncross/kernels/_core.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
        optional=True,  # a failed compile is not a failed install
    )], language_level=3)

setup(ext_modules=ext_modules)
