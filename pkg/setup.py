"""Build the optional compiled kernels; the package works without them."""

from __future__ import annotations

import os

from setuptools import setup


def extensions():
    if os.environ.get("DIVZERO_PURE_PYTHON"):
        return []
    try:
        import gmpy2
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    inc = os.path.dirname(gmpy2.__file__)
    ext = Extension(
        "divzero._kernels",
        ["src/divzero/_kernels.pyx"],
        include_dirs=[inc],
        extra_compile_args=["-O2"],
    )
    return cythonize([ext], language_level=3, include_path=[os.path.dirname(inc)])


setup(ext_modules=extensions())
