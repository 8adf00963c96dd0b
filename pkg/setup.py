#!/usr/bin/env python3
# -*- coding: utf-8 -*-

# Copyright 2026 The ddm authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
# implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import os
from setuptools import setup

here = os.path.abspath(os.path.dirname(__file__))
_name = "ddm"
README = open(os.path.join(here, 'README.rst')).read()

setup(
    python_requires='>=3.8',
    name=_name,
    description='Dynamically defined measures on shift spaces of Markov systems',
    long_description=README,
    version_command=('git describe --tags --long --dirty --match v*', 'pep440-git-full'),
    license='Apache 2.0',
    setup_requires=['setuptools-version-command'],

    packages=[_name],
    include_package_data=True,
    package_data={_name: ['report_schema.json']},
    entry_points={
        'console_scripts': ['ddm=ddm.cli:main'],
    },

    install_requires=[
        'numpy',
        'scipy',
        'sympy',
        'networkx',
        'PyYAML',
        'jsonschema',
        'tomli; python_version < "3.11"',
    ],
)
