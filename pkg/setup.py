"""Setup file for using the OSS development simulator as a python package."""
from os import path

import setuptools

# Obtain long_description from README.md
here = path.abspath(path.dirname(__file__))
with open(path.join(here, 'README.md'), encoding='utf-8') as f:
    long_description = f.read()

setuptools.setup(
    name='ossd-simulator',
    version='0.1.0',
    long_description=long_description,
    description='Hybrid system-dynamics and agent-based simulator for '
    'scheduling open source enhancement work and assigning developer teams.',
    license='CC0-1.0',
    packages=setuptools.find_packages(exclude=['test']),
    python_requires='>=3.8',
    install_requires=[
        'mock',
        'numpy',
        'packaging',
        'pyyaml',
        'rtyaml',
        'scipy',
    ],
    entry_points={
        'console_scripts': [
            'ossd-run=ossdsim.run:main'
        ],
    },
    scripts=[
        'scripts/default_experiment.sh',
        'scripts/sweep_developers.sh',
        'scripts/sweep_arrivals.sh',
    ],
)
