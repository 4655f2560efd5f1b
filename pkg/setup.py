import numpy as np
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext
from setuptools.errors import CCompilerError, ExecError, PlatformError

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None


class optional_build_ext(build_ext):
    """Build the fast kernels if possible; the package falls back to the
    pure-numpy twin at import time when the extension is missing."""

    def run(self):
        try:
            build_ext.run(self)
        except (CCompilerError, ExecError, PlatformError) as exc:
            print(f"WARNING: kernel extension build failed ({exc}); "
                  "bodymetry will use the pure-numpy kernels")

    def build_extension(self, ext):
        try:
            build_ext.build_extension(self, ext)
        except (CCompilerError, ExecError, PlatformError) as exc:
            print(f"WARNING: building {ext.name} failed ({exc}); "
                  "bodymetry will use the pure-numpy kernels")


ext_modules = []
if cythonize is not None:
    ext = Extension(
        "bodymetry.kernels._core",
        ["src/bodymetry/kernels/_core.pyx"],
        include_dirs=[np.get_include()],
        # -ffp-contract=off keeps the compiled kernels bit-identical to the
        # numpy fallback (no FMA contraction of the shared expressions).
        extra_compile_args=["-O2", "-ffp-contract=off"],
    )
    ext_modules = cythonize([ext], language_level="3")

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
