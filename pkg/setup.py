"""Build script for the optional compiled integrator kernel.

The package works without the extension (a pure-Python kernel with identical
arithmetic is selected at import time), so any build failure here degrades to
the fallback instead of breaking the install.
"""

from setuptools import Extension, setup

KERNEL_FLAGS = ["-O2", "-ffp-contract=off"]


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [
            Extension(
                "cmcforms._kernels",
                ["src/cmcforms/_kernels.pyx"],
                extra_compile_args=KERNEL_FLAGS,
            )
        ],
        compiler_directives={"language_level": "3"},
    )


setup(ext_modules=extensions())
