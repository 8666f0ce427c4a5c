import numpy as np
from setuptools import setup
from Cython.Build import cythonize

setup(
    ext_modules=cythonize("src/credittrees/_kernels/_native.pyx", language_level=3),
    include_dirs=[np.get_include()],
)
