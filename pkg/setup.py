# -*- coding: UTF-8 -*-

import os
from setuptools import setup
from typing import List


def _get_relative_path(file_path: str) -> str:
    return os.path.join(os.path.dirname(__file__), file_path)


def load_requirements() -> List[str]:
    requirements = []  # type: List[str]
    with open(_get_relative_path("requirements.txt"), "r") as req_file:
        lines = [line.rstrip("\n") for line in req_file]
        lines = list(filter(lambda line: line != "" and line[0] != "#", lines))
        for line in lines:
            hash_pos = line.find("#")
            requirements.append(line[:hash_pos].strip() if hash_pos != -1 else line)
    return requirements


def main():
    version_ns = {}
    with open(_get_relative_path("trellisml/__version__.py")) as f:
        exec(f.read(), version_ns)

    setup(
        name='trellisml',
        version=version_ns["__version__"],
        packages=['trellisml', 'trellisml.decoders', 'trellisml.cli'],
        license='MIT License',
        description='Maximum-likelihood decoding of convolutional codes with local optimality tests',
        long_description=open('README.md', encoding='utf-8').read(),
        long_description_content_type='text/markdown',
        install_requires=load_requirements(),
        python_requires='>=3.9',
        classifiers=[
            'License :: OSI Approved :: MIT License',
            'Programming Language :: Python :: 3.9',
            'Programming Language :: Python :: 3.10',
            'Programming Language :: Python :: 3.11',
            'Programming Language :: Python :: 3.12',
        ],
        entry_points={
            "console_scripts": [
                "trellis-ml=trellisml.cli:main",
            ]
        }
    )


if __name__ == "__main__":
    main()
