"""Build script: compiles the optional Cython kernel extension.

The extension is best-effort. If no compiler (or Cython) is available the
install still succeeds and graphforge.kernels falls back to the pure
numpy implementation at import time.
"""
import sys

from setuptools import setup

try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    extensions = cythonize(
        [
            Extension(
                "graphforge.kernels._fast",
                ["src/graphforge/kernels/_fast.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - toolchain-dependent
    print(f"graphforge: building without compiled kernels ({exc})", file=sys.stderr)
    extensions = []

setup(ext_modules=extensions)
