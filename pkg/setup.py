#!/usr/bin/env python
# -*- coding: utf-8 -*-

import os

from setuptools import setup

setup_path = os.path.abspath(os.path.dirname(__file__))


def read_description(filename):
    with open(os.path.join(setup_path, filename), 'r') as description_file:
        return description_file.read()


setup(
    name="gnssqlink",
    version='0.1.0',
    description="Two-way single-photon link with GNSS retroreflector arrays",
    long_description=read_description("README.md"),
    long_description_content_type='text/markdown',
    license="GNU General Public License v3 or later (GPLv3+)",
    packages=['gnssqlink'],
    python_requires='>=3.8',
    install_requires=['numpy>=1.20', 'scipy>=1.6', 'pandas>=1.5'],
    extras_require={'test': ['pytest']},
    entry_points={'console_scripts': ['gnssqlink=gnssqlink.cli:main']},
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: GNU General Public License v3 or later '
        '(GPLv3+)',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Physics'
        ]
    )
