import pytest

from loggen.baseline import BaselineBackend, train
from loggen.synth import fixture_methods, toy_samples


@pytest.fixture(scope="session")
def fixture_corpus():
    return fixture_methods(200, seed=1234)


@pytest.fixture(scope="session")
def toy_corpus():
    return toy_samples(50)


@pytest.fixture(scope="session")
def toy_backend(toy_corpus):
    return BaselineBackend(train(toy_corpus))
