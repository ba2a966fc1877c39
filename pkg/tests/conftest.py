import pytest

from grouplab.corpus import bundled_corpus


@pytest.fixture(scope="session")
def corpus():
    return bundled_corpus()
