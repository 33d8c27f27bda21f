from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python kernels are used instead
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "wsnbundle.optimizer._kernels",
                ["src/wsnbundle/optimizer/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
