import pytest

from helpers import build_corpus


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()
