"""Build script.

The tracking kernel is compiled from Cython when a compiler is available.
If compilation fails the package still installs and falls back to the pure
Python kernel (rittdyn._tracking_py) at import time.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("rittdyn._tracking", ["src/rittdyn/_tracking.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"rittdyn: skipping compiled kernel ({exc}); pure Python fallback will be used")

setup(ext_modules=ext_modules)
