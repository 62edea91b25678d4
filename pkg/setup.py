from Cython.Build import cythonize
from setuptools import Extension, setup

setup(
    ext_modules=cythonize(
        [
            Extension(
                "beta_ensembles._phase_cy",
                ["src/beta_ensembles/_phase_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
)
