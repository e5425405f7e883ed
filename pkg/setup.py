"""Build script for the optional compiled kernels.

The extension is optional: when Cython or a C compiler is missing the
package still installs and falls back to ``ladderfilt._pykernels``.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("LADDERFILT_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("ladderfilt._ckernels", ["src/ladderfilt/_ckernels.pyx"],
                       extra_compile_args=["-O3"])],
            language_level="3",
        )

setup(ext_modules=ext_modules)
