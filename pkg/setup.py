import setuptools

# metadata, package data and the console script live in setup.cfg
setuptools.setup(setup_requires=['pbr>=2.0'], pbr=True)
