import pytest

from bitile import patterns


@pytest.fixture(scope="session")
def catalog():
    return patterns.catalog()
