"""Build hook for the optional compiled Bessel kernel.

The package works without it; ``fibercap.mathkit.bessel`` falls back to the
numpy implementation when the extension cannot be imported.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "fibercap.mathkit._bessel_ext",
                ["src/fibercap/mathkit/_bessel_ext.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
