from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "faseg._kernels._fast",
                ["src/faseg/_kernels/_fast.pyx"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # No Cython: the package falls back to the pure-numpy kernels at import.
    extensions = []

setup(ext_modules=extensions)
