#!/usr/bin/env python
# encoding: UTF-8
# Copyright (c) 2026 The fracfield developers
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Lesser General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Lesser General Public License for more details.
#
# You should have received a copy of the GNU Lesser General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.
import os
try:
    from setuptools import setup
except ImportError:
    from distutils.core import setup


base_dir = os.path.dirname(__file__)
readme = open(os.path.join(base_dir, 'README.rst'), 'rt').read()
history = open(os.path.join(base_dir, 'HISTORY.rst'), 'rt').read()


setup(
    name="fracfield",
    version="0.3",
    packages=['pyfracfield'],
    py_modules=['fracfield'],
    author="The fracfield developers",
    license="LGPLv3",
    description=("Spectral toolkit for fractional critical equations on"
                 " periodic grids"),
    long_description=readme + '\n\n' + history,
    install_requires=[
        'numpy >= 1.17',
        'scipy >= 1.4',
    ],
    python_requires='>=3.6',
    entry_points={
        'console_scripts': [
            'fracfield = pyfracfield.cli:main',
        ],
    },
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        ('License :: OSI Approved :: '
         'GNU Lesser General Public License v3 (LGPLv3)'),
        'Natural Language :: English',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: Implementation :: CPython',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    zip_safe=True
)
