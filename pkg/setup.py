"""Build hook: compile the optional Cython kernels when Cython is available."""
from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(["src/neighborly/_ckernels.pyx"], language_level=3, quiet=True)

setup(ext_modules=ext_modules)
