"""Build script for the optional compiled kernel extension.

``pip install -e . --no-build-isolation`` compiles ``netsurv._kernels._fast``
when Cython and a C toolchain are available.  Without the extension the
package falls back to the pure-NumPy kernels at import time, so the build is
best-effort: set ``NETSURV_NO_EXT=1`` to skip it entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("NETSURV_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "netsurv._kernels._fast",
                    ["src/netsurv/_kernels/_fast.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
