"""Setuptools configuration for pip install.

Used for `pip install -e .`; the `eebc` console script is declared in pyproject.toml.
"""

from setuptools import find_packages, setup

setup(
    name="eebc",
    version="0.1.0",
    package_dir={"": "src"},
    packages=find_packages(where="src"),
)
