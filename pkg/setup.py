"""Build hook for the optional compiled tableau kernels.

The package is pure Python plus one Cython extension (miptkit._core). The
extension is marked optional: if Cython or a C compiler is unavailable the
install still succeeds and miptkit falls back to the numpy kernels in
miptkit._kernels_py (see miptkit.backend).
"""

from setuptools import Extension, setup

extensions = []
try:
    from Cython.Build import cythonize

    ext = Extension(
        "miptkit._core",
        ["src/miptkit/_core.pyx"],
        extra_compile_args=["-O3"],
    )
    ext.optional = True
    extensions = cythonize([ext], language_level="3")
except ImportError:
    pass

setup(ext_modules=extensions)
