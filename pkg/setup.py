"""Build script: compiles the closed-loop integration kernel when Cython is
available.  Without Cython (or a C compiler) the package still installs and
falls back to the pure-Python kernel at import time."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "helippc._loop_cy",
                ["src/helippc/_loop_cy.pyx"],
                # -ffp-contract=off keeps the compiled kernel numerically in
                # lockstep with the pure-Python kernel (no FMA contraction).
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
