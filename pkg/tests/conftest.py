"""Shared fixtures: the four sample problems shipped with the package."""

from pathlib import Path

import pytest

from avlprange import parse_problem

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
DOCS = Path(__file__).resolve().parent.parent / "docs"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def docs_dir() -> Path:
    return DOCS


@pytest.fixture(scope="session")
def example1():
    return parse_problem(FIXTURES / "example1.json")


@pytest.fixture(scope="session")
def example2():
    return parse_problem(FIXTURES / "example2.json")


@pytest.fixture(scope="session")
def example3():
    return parse_problem(FIXTURES / "example3.json")


@pytest.fixture(scope="session")
def example4():
    return parse_problem(FIXTURES / "example4.json")
