"""Build script for the optional compiled kernels.

The extension is marked optional: if Cython or a C compiler is missing the
package still installs and ``perronlab.kernels`` falls back to the pure
Python implementation.
"""
import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "perronlab._kernels_ext",
                ["src/perronlab/_kernels_ext.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        language_level="3",
    )

setup(ext_modules=ext_modules)
