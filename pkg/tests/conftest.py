"""Shared fixtures: parsed copies of the bundled specifications."""

import pytest

from sosforge import load_corpus


@pytest.fixture(scope="session")
def bccsp():
    return load_corpus("bccsp")


@pytest.fixture(scope="session")
def par():
    return load_corpus("bccsp_par")


@pytest.fixture(scope="session")
def gspec():
    return load_corpus("g")


@pytest.fixture(scope="session")
def linda():
    return load_corpus("linda")


@pytest.fixture(scope="session")
def rec():
    return load_corpus("recursion")


@pytest.fixture(scope="session")
def full():
    return load_corpus("full")
