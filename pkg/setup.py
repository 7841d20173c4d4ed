from setuptools import setup, find_packages

setup(
    name="adlv-emptiness",
    version="1.0.0",
    description="Emptiness decider for affine Deligne-Lusztig varieties in the affine flag variety",
    author="Your Name",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=[
        "numpy>=1.26.0",
        "pandas>=2.1.0",
        "sympy>=1.12",
        "joblib>=1.3.0",
        "python-dotenv>=1.0.0",
        "pyyaml>=6.0",
    ],
    entry_points={"console_scripts": ["adlv=src.cli:main"]},
    python_requires=">=3.10",
)
