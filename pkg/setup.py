"""Build script: compiles the sweep kernel when Cython and a C compiler exist.

The package is fully functional without the extension; ``ucactus.plf`` falls
back to the pure-Python kernel at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/ucactus/_segsweep.pyx"],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
