from setuptools import find_packages, setup

PACKAGE_NAME = "criticalideals"

INSTALLATION_REQUIREMENTS = [
    "sympy>=1.9",
    "numpy>=1.21",
    "networkx>=2.6",
    "tqdm>=4.62",
]

setup(
    name=PACKAGE_NAME,
    version="0.1.0",
    packages=find_packages(include=[PACKAGE_NAME, PACKAGE_NAME + ".*"]),
    install_requires=INSTALLATION_REQUIREMENTS,
    entry_points={"console_scripts": [f"{PACKAGE_NAME}={PACKAGE_NAME}.cli:main"]},
)
