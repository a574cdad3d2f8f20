from setuptools import setup, Extension

try:
    from Cython.Build import cythonize
    import numpy as np

    ext_modules = cythonize(
        [
            Extension(
                "folim._ckernel",
                ["src/folim/_ckernel.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    # pure-Python fallback is selected at import time
    ext_modules = []

setup(ext_modules=ext_modules)
