"""Build script for the optional compiled Bessel kernel.

The package works without the extension; ``obliquebie.specfun`` falls back to
the numpy implementation when ``_core_ext`` cannot be imported.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "obliquebie._core_ext",
                ["src/obliquebie/_core_ext.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
