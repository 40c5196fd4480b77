import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("SRGRAPH_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:  # pure-Python install; the kernels fall back at import
        pass
    else:
        ext_modules = cythonize(
            [Extension("srgraph.kernels._ckernels", ["src/srgraph/kernels/_ckernels.pyx"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
