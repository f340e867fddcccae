from setuptools import find_packages, setup


setup(
    name='fbtree',
    version='0.1.0',
    description='tree-based solver for forward-backward SDEs',
    license='MIT',
    python_requires='>=3.7',
    install_requires=[
        'numpy>=1.17.0',
        'scipy>=1.3.0',
        'joblib>=0.14.0',
        'pandas>=1.5.0',
    ],
    package_dir={'': 'src'},
    packages=find_packages('src'),
    entry_points={
        'console_scripts': ['fbtree=fbtree.cli:entry_point'],
    },
)
