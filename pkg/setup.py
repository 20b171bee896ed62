from setuptools import setup, find_packages

setup(
    name="spinsim",
    version="1.0.0",
    description="Three-spin Ising chain simulator: adiabatic scans, witnesses and NMR step compilation",
    packages=find_packages(include=["src", "src.*"]),
    py_modules=["main"],
    python_requires=">=3.9",
    install_requires=[
        "numpy>=1.24.0",
        "scipy>=1.10.0",
        "pydantic>=2.0.0",
        "python-dotenv>=1.0.0",
    ],
    extras_require={"test": ["pytest>=7.0.0"]},
    entry_points={"console_scripts": ["spinsim=main:main"]},
)
