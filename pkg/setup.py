#!/usr/bin/env python
from setuptools import setup

with open("README.md", "r") as fh:
    LONG_DESCRIPTION = fh.read()

setup(
    name = 'greedyapprox',
    version = '0.1',
    description = 'Greedy-type constants of bases in finite-dimensional p-Banach spaces',
    long_description = LONG_DESCRIPTION,
    long_description_content_type = 'text/markdown',
    license = 'MIT',
    classifiers = [
        'Development Status :: 3 - Alpha',
        'Programming Language :: Python :: 3.8',
        'Intended Audience :: Science/Research',
        ],
    python_requires = '>=3.8',
    install_requires = [
        'numpy',
        'scipy',
        'natsort',
        'pyparsing'],
    packages = ['greedyapprox'],
    test_suite = 'tests',
    entry_points = {
        'console_scripts': [
            'greedyapprox=greedyapprox.framework:main',
            ],
        }
)
