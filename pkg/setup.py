"""Build script for the optional compiled retrieval kernel.

The extension is a pure speedup: if Cython (or a C compiler) is missing the
install still succeeds and the package falls back to the Python scan at
import time.

Floating-point note: the kernel must produce bit-identical doubles to the
Python implementation, so fast-math and FMA contraction stay disabled.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "clarify._kernel",
                sources=["src/clarify/_kernel.pyx"],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
