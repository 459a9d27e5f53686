from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "avgdiff._kernels_cy",
                ["src/avgdiff/_kernels_cy.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    # no Cython available: install the pure-NumPy backend only
    extensions = []

setup(ext_modules=extensions)
