#!/usr/bin/env python
# type: ignore
import glob
import os

from setuptools import find_packages, setup

HERE = os.path.dirname(os.path.abspath(__file__))


def read(fname):
    with open(os.path.join(HERE, fname)) as f:
        return f.read()


def requirements(fname):
    return [
        line
        for line in read(fname).splitlines()
        if line.strip() and not line.startswith("#")
    ]


# requirements-<extra>.txt becomes the <extra> extra; "all" is their union
extras_require = {
    os.path.splitext(os.path.basename(path))[0].replace("requirements-", "", 1): (
        requirements(os.path.basename(path))
    )
    for path in glob.glob(os.path.join(HERE, "requirements-*.txt"))
}
if extras_require:
    extras_require["all"] = sorted({x for v in extras_require.values() for x in v})

# exec rather than import: pypqc/__init__.py pulls in numpy, which may not be
# installed yet
meta = {}
exec(read("pypqc/__meta__.py"), meta)

setup(
    name=meta["name"],
    version=meta["version"],
    packages=find_packages(exclude=["tests", "*.tests", "*.tests.*", "tests.*"]),
    package_dir={meta["name"]: os.path.join(".", meta["path"])},
    python_requires=">=3.10",
    install_requires=requirements("requirements.txt"),
    extras_require=extras_require,
    author=meta["author"],
    author_email=meta["author_email"],
    description=meta["description"],
    long_description=read("README.rst"),
    long_description_content_type="text/x-rst",
    license=meta["license"],
    url=meta["url"],
    classifiers=[
        "Natural Language :: English",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Physics",
        "Topic :: Security :: Cryptography",
    ],
    entry_points={"console_scripts": ["pypqc = pypqc.cli:run"]},
)
