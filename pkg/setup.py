from os import path
from setuptools import setup, find_packages

this_directory = path.abspath(path.dirname(__file__))

with open(path.join(this_directory, 'README.rst'), encoding='utf-8') as f:
    long_description = f.read()

setup(
    name='ramsey-lab',
    version='0.1.0',
    description='A laboratory for the two-round triangle-avoidance game on random graphs.',
    long_description=long_description,
    long_description_content_type='text/x-rst',
    license='BSD',
    packages=find_packages(exclude=['tests']),
    python_requires='>=3.8',
    install_requires=['Django>=3.2', 'numpy>=1.20', 'pandas>=1.5', 'scipy>=1.7', 'networkx>=2.6',
                      'scikit-learn>=1.0'],
    extras_require={'test': ['pytest>=6.0', 'hypothesis>=6.0']},
    entry_points={'console_scripts': ['lab = ramsey_lab.cli:main']},
    zip_safe=False,
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: BSD License',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
    ]
)
