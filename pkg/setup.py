"""Build the optional compiled kernels.

The package works without them (``clonekit._pykernels`` is used instead), so
a missing Cython or compiler only skips the extension.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "clonekit._ckernels",
                ["src/clonekit/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
