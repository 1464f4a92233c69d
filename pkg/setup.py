from setuptools import Extension, setup

# The compiled membership kernel is optional: when Cython is unavailable the
# package falls back to the numpy implementation selected in qnslab.backend.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("qnslab._kernels", ["src/qnslab/_kernels.pyx"])],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
