from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "flexdup.engine._kernel_cy",
                ["src/flexdup/engine/_kernel_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )
except ImportError:
    # No Cython at build time: the package still works through the pure-Python
    # kernel selected at import in flexdup.engine.kernel.
    ext_modules = []

setup(ext_modules=ext_modules)
