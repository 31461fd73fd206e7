import numpy as np
from setuptools import Extension, setup

# The compiled kernels are optional: the package falls back to the numpy
# implementations in ucp_ensemble._kernels._pykernels when the extension
# is missing.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "ucp_ensemble._kernels._ckernels",
                ["src/ucp_ensemble/_kernels/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
