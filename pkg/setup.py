"""Build the optional compiled stepping kernel.

The package works without the extension (a pure-Python kernel is selected at
import time); building it just makes long runs fast. No -ffast-math: the
compiled and pure kernels must produce bit-identical IEEE results.
"""
import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = [
    Extension(
        "forgetsim._kernel",
        sources=["src/forgetsim/_kernel.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"})
    if cythonize is not None
    else [],
)
