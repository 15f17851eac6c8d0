"""CMake-driven build of the abaselite._core extension.

Install in a pre-provisioned environment with::

    pip install -e . --no-build-isolation
"""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str, sourcedir: str = "") -> None:
        super().__init__(name, sources=[])
        self.sourcedir = str(Path(sourcedir).resolve())


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        out_path = Path(self.get_ext_fullpath(ext.name)).resolve()
        build_dir = Path(self.build_temp).resolve() / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        subprocess.run(
            [
                "cmake",
                ext.sourcedir,
                "-DCMAKE_BUILD_TYPE=Release",
                f"-DPython_EXECUTABLE={sys.executable}",
            ],
            cwd=build_dir,
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_core", "--parallel"],
            cwd=build_dir,
            check=True,
        )

        built = sorted((build_dir / "python" / "abaselite").glob("_core*.so"))
        if not built:
            raise RuntimeError("cmake did not produce the _core extension module")
        out_path.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built[-1], out_path)


setup(
    ext_modules=[CMakeExtension("abaselite._core")],
    cmdclass={"build_ext": CMakeBuild},
)
