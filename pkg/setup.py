"""Build script for the optional compiled sampling/KDE core.

The extension accelerates the rejection sampler and kernel density
evaluation. If it cannot be built (no compiler, no Cython), the install
proceeds and the package falls back to the pure NumPy implementation in
``wkreg._fastpath_py``.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the accelerator if possible, otherwise continue without it."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"wkreg: skipping compiled core ({exc}); pure-Python fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"wkreg: failed to build {ext.name} ({exc}); pure-Python fallback will be used")


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    rand_lib = os.path.join(os.path.dirname(numpy.random.__file__), "lib")
    ext = Extension(
        "wkreg._fastpath",
        ["src/wkreg/_fastpath.pyx"],
        include_dirs=[numpy.get_include()],
        library_dirs=[rand_lib],
        libraries=["npyrandom"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
