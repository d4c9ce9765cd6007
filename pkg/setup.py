"""Builds the optional compiled kernel extension.

The package works without it; ``mojikit.kernels`` falls back to the pure-Python
implementation when the extension is missing. Set MOJIKIT_PURE=1 to skip the
build entirely. -ffp-contract=off keeps the compiled arithmetic bit-identical
to the interpreter (no fused multiply-add), which the parity tests rely on.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("MOJIKIT_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "mojikit._speedups",
                    ["src/mojikit/_speedups.pyx"],
                    extra_compile_args=["-O2", "-ffp-contract=off"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
