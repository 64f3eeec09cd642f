"""Build script: compiles the optional distance kernel extension.

The extension is best-effort. If Cython or a C compiler is missing the
install falls back to the pure-Python kernels in servicenav._pykernels;
servicenav.kernels picks whichever is importable at runtime.
"""

from setuptools import setup
from setuptools.command.build_ext import build_ext


ext_modules = []
cmdclass = {}

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("servicenav._ckernels", ["src/servicenav/_ckernels.pyx"])],
        language_level=3,
    )

    class OptionalBuildExt(build_ext):
        """Swallow compiler errors so a pure-Python install still succeeds."""

        def run(self):
            try:
                super().run()
            except Exception as exc:  # noqa: BLE001
                print(f"warning: skipping compiled kernels ({exc})")

        def build_extension(self, ext):
            try:
                super().build_extension(ext)
            except Exception as exc:  # noqa: BLE001
                print(f"warning: {ext.name} failed to compile ({exc})")

    cmdclass["build_ext"] = OptionalBuildExt
except ImportError:
    print("warning: Cython not available, building without compiled kernels")

setup(ext_modules=ext_modules, cmdclass=cmdclass)
