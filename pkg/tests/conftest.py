import pytest

from gre.arith import build_factor_table


@pytest.fixture(scope="session")
def t():
    return build_factor_table(10**6)


@pytest.fixture(scope="session")
def small():
    return build_factor_table(10**4)
