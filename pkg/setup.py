"""
Setup script for zerolab, a laboratory for low-lying zeros and random matrix statistics.
"""

from setuptools import setup, find_packages

setup(
    name="zerolab",
    version="1.0.0",
    description="Low-lying zeros of L-functions, random matrix ensembles and explicit formulas",
    packages=find_packages(exclude=["examples", "examples.*"]),
    install_requires=[
        "numpy>=1.22.0",
        "scipy>=1.9.0",
        "sympy>=1.11",
        "pydantic>=2.0.0",
        "python-dotenv>=1.0.0",
        "rich>=13.0.0",
    ],
    extras_require={
        "dev": [
            "pytest>=7.0.0",
        ],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.9",
    entry_points={
        "console_scripts": [
            "zerolab=zerolab.cli:main",
        ],
    },
)
