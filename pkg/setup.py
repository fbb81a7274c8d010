import os

import numpy as np
from setuptools import Extension, setup

ext_modules = []
if os.environ.get("DIFFAM_NO_EXT") != "1":
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "diffam._ckernels",
                ["src/diffam/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                language="c++",
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
