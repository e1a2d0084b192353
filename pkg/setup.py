from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    # optional=True: if the compiler is unavailable the install still succeeds
    # and the package falls back to the numpy selection backend.
    extensions = cythonize(
        [Extension("onecenter._kernels", ["src/onecenter/_kernels.pyx"], optional=True)],
        language_level=3,
    )
else:
    extensions = []

setup(ext_modules=extensions)
