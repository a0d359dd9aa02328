#!/usr/bin/env python
# -*- coding: utf-8 -*-
import os
from setuptools import find_packages, setup


def calculate_version():
    initpy = open('survlearn/_version.py').read().split('\n')
    version = list(filter(lambda x: '__version__' in x,
                          initpy))[0].split('\'')[1]
    return version


package_version = calculate_version()
module_dir = os.path.dirname(os.path.abspath(__file__))

name = 'survlearn'
version = package_version
author = 'Qi Wang'
author_email = 'qwang.mse@gmail.com'
packages = find_packages(exclude=['examples', 'examples.*'])
package_data = {'survlearn.utils': ['*.yaml']}
license = 'modified BSD'
description = 'Cox, Poisson-survival and logistic event-risk models for ' \
              'right-censored cohorts.'
long_description = open(os.path.join(module_dir, 'README.md')).read()
zip_safe = False
install_requires = ['numpy>=1.17.0',
                    'scipy>=1.0.0',
                    'scikit-learn>=0.22.0',
                    'pandas>=1.5.0',
                    'six>=1.10.0',
                    'joblib>=0.14.0',
                    'pyyaml>=5.1',
                    'lockfile>=0.12.2']
entry_points = {'console_scripts': ['survlearn=survlearn.cli:main']}
classifiers = [
    'Intended Audience :: Science/Research',
    'Intended Audience :: Developers',
    'Programming Language :: Python',
    'Programming Language :: Python :: 3',
    'Programming Language :: Python :: 3.8',
    'Programming Language :: Python :: 3.9',
    'Programming Language :: Python :: 3.10',
    'Topic :: Scientific/Engineering :: Medical Science Apps.'
]
keywords = ['survival analysis', 'proportional hazards', 'Cox model',
            'Poisson process', 'censoring', 'fall risk', 'simulation']

setup(
    name=name,
    version=version,
    author=author,
    author_email=author_email,
    packages=packages,
    package_data=package_data,
    license=license,
    description=description,
    long_description=long_description,
    long_description_content_type='text/markdown',
    zip_safe=zip_safe,
    install_requires=install_requires,
    entry_points=entry_points,
    classifiers=classifiers,
    keywords=keywords
)
