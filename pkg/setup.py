# standard libraries
import logging

# third party libraries
from setuptools import find_packages, setup

logger = logging.getLogger(__name__)

with open("README.md") as fp:
    readme_text = fp.read()

with open("requirements/requirements.txt") as fp:
    requirements = [
        line.strip() for line in fp.readlines() if line.strip() and not line.startswith("#") and "pytest" not in line
    ]

setup(
    name="harmonicbound",
    version="0.1.0.dev0",
    description="Numerical verification of the mean-Psi harmonic-measure inequality for continua dividing the disk",
    long_description=readme_text,
    long_description_content_type="text/markdown",
    python_requires=">=3.10",
    install_requires=requirements,
    extras_require={"test": ["pytest>=8.0"]},
    packages=find_packages(exclude=("tests", "tests.*", "scripts")),
    entry_points={"console_scripts": ["harmonicbound=harmonicbound.cli:cli"]},
)
