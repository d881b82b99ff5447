import glob

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

sources = sorted(glob.glob("src/*.cpp"))
sources.remove("src/main.cpp")
sources.append("python/bindings.cpp")

ext = Pybind11Extension(
    "nsacpy",
    sources,
    include_dirs=["include"],
    libraries=["fftw3"],
    cxx_std=20,
    extra_compile_args=["-O2"],
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
