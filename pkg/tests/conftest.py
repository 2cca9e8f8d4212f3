import pytest

from orbitstrength import make_green, make_kronecker, make_proper, make_rieffel, make_splice, repetition_rule


@pytest.fixture(scope="session")
def green():
    return make_green()


@pytest.fixture(scope="session")
def proper():
    return make_proper()


@pytest.fixture(scope="session")
def alternating():
    return make_rieffel(repetition_rule("alt:1,2"), name="rieffel-alt")


@pytest.fixture(scope="session")
def splice():
    return make_splice()


@pytest.fixture(scope="session")
def kronecker():
    return make_kronecker()
