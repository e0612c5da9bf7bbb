"""Build script: compiles the optional likelihood kernels.

The package is fully functional without the extension (a numpy fallback is
selected at import time); set BLOCKMAX_PURE_PYTHON=1 to skip the build.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("BLOCKMAX_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("blockmax._core._kernels", ["src/blockmax/_core/_kernels.pyx"])],
            language_level="3",
        )
    except Exception as exc:  # pragma: no cover - build environment dependent
        print(f"warning: skipping compiled kernels ({exc}); numpy fallback will be used")

setup(ext_modules=ext_modules)
