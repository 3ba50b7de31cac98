from setuptools import setup, find_packages

reqs=[
    'hydra-core',
    'omegaconf',
    'numpy',
    'scipy',
    'pandas',
    'matplotlib',
    'tqdm',
    'wandb',
    ]

setup(
    name='HybridFlow',
    version='0.1.0',
    url=None,
    author='anonymous',
    author_email='',
    description='Multiscale lattice Boltzmann, finite volume and Monte Carlo solvers for cavity flow and heat transfer',
    packages=find_packages(exclude=["wandb", "archives", "configs", "outputs"]),
    install_requires=reqs,
    extras_require={'test': ['pytest', 'hypothesis']},
    entry_points={'console_scripts': ['hybridflow = hybridflow.cli:entry',
                                      'hybridflow-hydra = hybridflow.main:main']},
)
