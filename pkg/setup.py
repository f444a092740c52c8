import os

from setuptools import setup, find_packages

description = (
    'EnSync estimates time-varying phase and period correction gains '
    'in rhythmic ensemble performances with a Kalman filter and smoother '
    'over the linear sensorimotor-synchronization model. It includes a '
    'generative simulator with known ground truth, a brute-force '
    'Gaussian oracle for verification, and a command line for CSV data.')


def read(fname):
    return open(os.path.join(os.path.dirname(__file__), fname)).read()


long_description = read('README.rst')


def get_version(filename):
    import ast
    version = None
    with open(filename) as f:
        for line in f:
            if line.startswith('__version__'):
                version = ast.parse(line).body[0].value.value
                break
        else:
            raise ValueError('No version found in %r.' % filename)
    if version is None:
        raise ValueError(filename)
    return version


version = get_version(filename='src/ensync/__init__.py')

setup(name='EnSync',
      description=description,
      long_description=long_description,
      keywords="kalman filter, smoother, sensorimotor synchronization, ensemble timing",
      license="LGPL",

      version=version,

      package_dir={'': 'src'},
      packages=find_packages('src'),
      install_requires=['pyparsing>=3.1.0', 'decorator', 'numpy>=1.20.0',
                        'scipy>=1.7.0', 'pandas>=1.5.0'],
      tests_require=['pytest>=7.0.0', 'pytest-cov>=6.0.0'],
      python_requires='>=3.8',
      classifiers=[
          'Development Status :: 4 - Beta',
          'Intended Audience :: Science/Research',
          'License :: OSI Approved :: GNU Library or Lesser General Public License (LGPL)',
          'Topic :: Scientific/Engineering :: Mathematics',
          'Programming Language :: Python :: 3',
          'Programming Language :: Python :: 3.8',
          'Programming Language :: Python :: 3.9',
          'Programming Language :: Python :: 3.10',
          'Programming Language :: Python :: 3.11',
          'Programming Language :: Python :: 3.12',
      ],
      entry_points={
          'console_scripts': ['ensync = ensync.cli:main'],
      },
      )
