"""
Setup script for the bellprocess package.
"""

from setuptools import setup, find_packages

setup(
    name="bellprocess",
    version="0.1.0",
    description="Simulation and verification lab for minimal-rate jump processes",
    packages=find_packages(include=["bellprocess", "bellprocess.*", "cli", "cli.*"]),
    install_requires=[
        "numpy>=1.24.0",
        "scipy>=1.11.0",
        "pandas>=2.0.0",
        "pydantic>=2.0.0",
        "python-dotenv>=1.0.0",
        "typer>=0.9.0",
        "rich>=13.0.0",
        "tqdm>=4.66.0",
    ],
    extras_require={
        "test": ["pytest>=7.4.0", "hypothesis>=6.90.0"],
    },
    python_requires=">=3.10",
    entry_points={
        "console_scripts": [
            "bellprocess=cli.main:app",
        ],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Topic :: Scientific/Engineering :: Physics",
    ],
)
