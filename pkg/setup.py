#!/usr/bin/env python3
from setuptools import setup

setup(
    name='pedigree-reconstruction',
    version='1.0',
    description='Constructs, compares, reconstructs and counts pedigrees from their sub-pedigree decks',
    classifiers=[
        'Development Status :: 4 - Beta',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
        ],
    keywords='pedigree, reconstruction, graph isomorphism, combinatorics',
    python_requires='>=3.8, <4',
    py_modules=[
        'counterexample',
        'enumeration',
        'errors',
        'isomorphism',
        'output',
        'pedigree',
        'pedigree_io',
        'pedigrees',
        'reconstruction',
        ],
    install_requires=[
        'networkx>=3.1',
        'sympy>=1.12',
        'tqdm>=4.66',
        'yachalk>=0.1.5',
        ],
    extras_require={
        'test': ['pytest>=7.4', 'hypothesis>=6.88'],
        },
    entry_points={
        'console_scripts' : ['pedigrees=pedigrees:main']
        },
)
