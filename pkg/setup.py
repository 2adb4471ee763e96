#!/usr/bin/env python3
from setuptools import setup, find_packages

setup(
    name="hdrgamut",
    version="0.1.0",
    description="hdrgamut - HDR tone mapping and hue-specific gamut management",
    long_description="""
    hdrgamut tone maps scene-referred HDR images and brings them into a
    display gamut. It builds the cusp table of the target gamut, compresses
    chroma per hue slice from a bilateral base layer, optionally runs a
    cusp-aligned lightness tone curve and clips the remaining pixels. A
    command line tool exports gamut boundaries, tone curves and IPT hue
    difference metrics.
    """,
    packages=find_packages(exclude=["examples", "examples.*"]),
    install_requires=[
        "typer>=0.7.0,<0.26",
        "click>=8.0.0",
        "rich>=12.0.0",
        "pyyaml>=6.0.0",
        "pydantic>=2.0.0",
        "numpy>=1.24.0",
        "scipy>=1.10.0",
        "Pillow>=9.5.0",
        "matplotlib>=3.7.0",
    ],
    extras_require={
        "dev": [
            "pytest>=7.3.0",
            "hypothesis>=6.75.0",
            "black>=23.3.0",
            "isort>=5.12.0",
            "mypy>=1.2.0",
            "pytest-cov>=4.1.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "hdr-gamut=hdrgamut.cli.main:app",
        ],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Topic :: Multimedia :: Graphics",
        "Topic :: Scientific/Engineering :: Image Processing",
    ],
    python_requires=">=3.9",
    keywords=["hdr", "tone mapping", "gamut mapping", "color", "image processing"],
    zip_safe=False,
)
