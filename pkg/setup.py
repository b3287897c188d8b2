"""Build script.  The compiled kernel extension is optional: when Cython or a
C toolchain is unavailable the package installs anyway and falls back to the
pure-Python kernels at import time."""

from setuptools import Extension, setup

extensions = []
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "periodlab._kernels",
                ["src/periodlab/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=extensions)
