"""Setup script for roundlab."""

from setuptools import setup, find_packages
import codecs
import os
import roundlab

HERE = os.path.abspath(os.path.dirname(__file__))


def read(*parts):
    """Return multiple read calls to different readable objects as a single
    string."""
    # intentionally *not* adding an encoding option to open
    return codecs.open(os.path.join(HERE, *parts), 'r').read()


LONG_DESCRIPTION = read('README.rst')

setup(
    name='roundlab',
    version=roundlab.__version__,
    author='roundlab developers',
    description="""A command line tool to compute the generalized roundness of finite metric spaces""",
    long_description=LONG_DESCRIPTION,
    license='GPLv3',
    keywords='generalized roundness, negative type, metric spaces, median graphs, cube complexes',
    packages=find_packages(exclude=['contrib', 'doc', 'tests*', 'examples*']),
    py_modules=['roundlab_cli'],
    package_data={'roundlab': ['tests/data/*']},
    tests_require=['pytest', 'hypothesis'],
    install_requires=['numpy', 'scipy', 'networkx>=2.7', 'argcomplete', 'vtk'],
    entry_points={
        'console_scripts': [
            'roundlab=roundlab_cli:main',
        ],
    },
    classifiers=[
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Development Status :: 4 - Beta',
        'Natural Language :: English',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Topic :: Software Development :: Libraries :: Python Modules',
        'License :: OSI Approved :: GNU General Public License v3 (GPLv3)',
        'Operating System :: OS Independent',
    ],
)
