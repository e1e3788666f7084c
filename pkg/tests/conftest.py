from __future__ import annotations

import pytest

from cayleybench import GroupModel, enumerate_ball, peripheral_structure


@pytest.fixture(scope="session")
def free2():
    return GroupModel("free(2)")


@pytest.fixture(scope="session")
def z2():
    return GroupModel("free-abelian(2)")


@pytest.fixture(scope="session")
def z1():
    return GroupModel("free-abelian(1)")


@pytest.fixture(scope="session")
def zz():
    return GroupModel("free-product(free-abelian(1),free-abelian(1))")


@pytest.fixture(scope="session")
def free2_ball5(free2):
    return enumerate_ball(free2, 5)


@pytest.fixture(scope="session")
def z2_ball6(z2):
    return enumerate_ball(z2, 6)


@pytest.fixture(scope="session")
def zz_ball5(zz):
    return enumerate_ball(zz, 5)


@pytest.fixture(scope="session")
def zz_factors(zz):
    return peripheral_structure(zz, "factors")
