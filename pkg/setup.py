# Package configuration lives in pyproject.toml.
# Kept so that `pip install -e .` works with older pip versions.

from setuptools import setup

setup()
