"""Build the optional Cython kernels.

If Cython or a C compiler is unavailable the package still installs and the
pure-Python kernels in ``umccev.kernels._fallback`` are used instead.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "umccev.kernels._core",
                ["src/umccev/kernels/_core.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
