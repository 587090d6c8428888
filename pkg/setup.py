"""Build script: compiles the optional hit-and-run kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so a failed compile downgrades to a warning instead of
aborting the install.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext


def _extensions():
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError as exc:
        warnings.warn(f"compiled kernel skipped ({exc}); using the pure-Python fallback")
        return []
    ext = Extension(
        "bidsearch._hitrun",
        ["src/bidsearch/_hitrun.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        # keep float arithmetic bit-compatible with the numpy fallback
        extra_compile_args=["-O2", "-ffp-contract=off"],
    )
    return cythonize([ext], language_level=3)


class OptionalBuildExt(build_ext):
    """Best-effort extension build; install proceeds on failure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - depends on toolchain
            warnings.warn(f"compiled kernel build failed ({exc}); using the pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - depends on toolchain
            warnings.warn(f"compiled kernel build failed ({exc}); using the pure-Python fallback")


setup(ext_modules=_extensions(), cmdclass={"build_ext": OptionalBuildExt})
