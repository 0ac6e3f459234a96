"""Optional build of the compiled kernel core.

The package is fully functional without the extension: homsim._kernels
falls back to the NumPy implementation at import time.  Building the
extension (requires Cython and a C compiler) speeds up the hot density
kernels:

    python setup.py build_ext --inplace

Set HOMSIM_NO_EXT=1 to force a pure-Python build.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("HOMSIM_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "homsim._kernels._ckernels",
                    ["src/homsim/_kernels/_ckernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
