"""Build hook for the optional Cython kernels.

Metadata lives in pyproject.toml. When Cython (or a C compiler) is missing the
package still installs and runs on the pure-Python kernels.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "qstairs.kernels._ckernels",
                ["src/qstairs/kernels/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
