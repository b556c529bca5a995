"""Build script: compiles the optional accelerator extension.

The extension is best-effort. When Cython or a C compiler is missing the
package installs anyway and falls back to the pure NumPy kernels at import
time (see divcast.backends).
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
                "divcast.backends._kernels_cy",
                ["src/divcast/backends/_kernels_cy.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
