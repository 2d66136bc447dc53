#!/usr/bin/env python
# -*- coding: utf-8 -*-

import os
from setuptools import setup, find_packages

def read(fname):
    return open(os.path.join(os.path.dirname(__file__), fname)).read()

about = {}
exec(read(os.path.join('HeraldedFock', '__version__.py')), about)

packages = find_packages(exclude=("HeraldedFock.testing",))
setup(name = 'HeraldedFock',
      version = about['__version__'],
      author = read('AUTHORS.txt'),
      description = ("Heralded Fock states from a continuous wave optical parametric oscillator"),
      license = "BSD 3-clause",
      keywords = "quantum-optics fock-states parametric-oscillator gaussian-states wigner-function",
      packages = packages,
      package_dir = {'HeraldedFock': 'HeraldedFock'},
      include_package_data = True,
      long_description = read('README.md'),
      long_description_content_type = 'text/markdown',
      python_requires = '>=3.7',
      install_requires = ['numpy>=1.17', 'scipy>=1.4', 'pandas>=1.5', 'tqdm>=4.0'],
      extras_require = {'tests': ['pytest', 'mock'], 'docs': ['Sphinx']},
      classifiers=['License :: OSI Approved :: BSD License',
                   'Natural Language :: English',
                   'Operating System :: MacOS :: MacOS X',
                   'Operating System :: Microsoft :: Windows',
                   'Operating System :: POSIX :: Linux',
                   'Programming Language :: Python :: 3',
                   'Topic :: Scientific/Engineering :: Physics'],
      scripts=['heraldedfock.py'],
     )
