from setuptools import setup, find_packages

setup(
    name="gid_bribery",
    version="0.1",
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.10",
    install_requires=[
        "numpy",
        "pandas",
        "scipy",
        "networkx>=3.0",
        "great_tables",
    ],
    extras_require={"test": ["pytest"]},
    entry_points={
        "console_scripts": ["gid-bribery=gid_bribery.cli:main"],
    },
)
