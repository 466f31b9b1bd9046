"""Build the optional Cython kernels.

The package works without them: ``lambdadicke.kernels`` falls back to the
numpy implementation in ``_kernels_py`` when the extension is missing.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("LAMBDADICKE_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "lambdadicke._kernels",
                    ["src/lambdadicke/_kernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
