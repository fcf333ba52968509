from setuptools import setup, find_packages

setup(
    name="private-dsg",
    version="0.1.0",
    packages=find_packages(exclude=["test_files", "examples", "examples.*"]),
    py_modules=["app"],
    install_requires=[
        "numpy",
        "pandas",
        "scipy",
        "networkx",
        "joblib",
        "tqdm",
        "python-dotenv",
        "pytest",
        "pytest-cov",
        "black",
        "isort",
        "flake8",
        "mypy",
    ],
    entry_points={
        "console_scripts": [
            "dsg=app:main",
        ],
    },
    python_requires=">=3.8",
)
