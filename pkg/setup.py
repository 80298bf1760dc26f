"""XLaguerre: Exceptional Laguerre polynomials, the deformed radial oscillators built from them and their Dirac and Fokker-Planck applications."""

from setuptools import setup
import os
import sys

setup(name = 'XLaguerre',
    version = '1.0.0',
    description = "XLaguerre: Exceptional Laguerre polynomials, deformed radial oscillators, Dirac systems and Fokker-Planck evolution.",
    install_requires = ['numpy>=1.18', 'scipy>=1.4', 'pytest', 'sympy'],
    python_requires ='>=3.7.0',
    license = 'MIT',
    packages = ['xlaguerre'],
    zip_safe = False)
