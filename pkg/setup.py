"""Build script: compiles the optional Cython series core.

The package works without the extension (a numpy fallback is selected at
import time), so a failed compilation is downgraded to a warning.
"""

import warnings

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "mharmonic._series_cy",
                ["src/mharmonic/_series_cy.pyx"],
                include_dirs=[np.get_include()],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-env dependent
    warnings.warn(f"Cython core not built ({exc}); pure-Python backend will be used")

setup(ext_modules=ext_modules)
