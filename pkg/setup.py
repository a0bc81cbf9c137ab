import os

import numpy
from setuptools import Extension, setup

# Set MASKQUANT_NO_EXT=1 to skip the compiled kernels; the package then runs
# on the pure-Python fallback.
ext_modules = []
if not os.environ.get("MASKQUANT_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "maskquant._kernels._ckernels",
                    ["src/maskquant/_kernels/_ckernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": 3},
        )

setup(ext_modules=ext_modules)
