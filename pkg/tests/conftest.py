import pytest

from plbc import construct_pbch


@pytest.fixture(scope="session")
def code15():
    """The [15,7,4] code: d0 = d1 = 3, the main desk-scale test subject."""
    return construct_pbch(15, 7, 4)


@pytest.fixture(scope="session")
def code15_t2():
    """The [15,3,4] code: d0 = 3, d1 = 5, exercises two-error correction."""
    return construct_pbch(15, 3, 4)


@pytest.fixture(scope="session")
def code1023_l20():
    return construct_pbch(1023, 923, 20)
