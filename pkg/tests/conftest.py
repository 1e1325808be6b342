import pytest

from dircomplex import gen_corpus


@pytest.fixture(scope="session")
def corpus():
    return gen_corpus(seed=0, max_dim=4, max_elements=200)


@pytest.fixture(scope="session")
def corpus_members(corpus):
    return list(corpus.items())
