"""Build hook for the optional compiled kernel extension.

The package is fully functional without the extension (a numpy fallback is
selected at import time); building it just makes the sieves faster.  Any
failure here therefore degrades to a pure-Python install instead of aborting.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "tauchar._kernels._ext",
                ["src/tauchar/_kernels/_ext.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
