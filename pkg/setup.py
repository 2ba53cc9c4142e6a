"""Build script: compiles the optional search-core extension when Cython
and a C toolchain are available, otherwise installs pure-Python only."""

from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    extensions = cythonize(
        [
            Extension(
                "rainbow_lab._searchcore",
                ["src/rainbow_lab/_searchcore.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
