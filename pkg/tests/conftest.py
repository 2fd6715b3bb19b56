import pytest

from penroselab import (
    CylinderProfile,
    EuclideanProfile,
    SchwarzschildLikeProfile,
    build_trumpet,
)


@pytest.fixture
def euclid():
    return EuclideanProfile()


@pytest.fixture
def schw():
    return SchwarzschildLikeProfile.from_mass(1.0)


@pytest.fixture
def schw_ab():
    return SchwarzschildLikeProfile(2.0, 1.0)


@pytest.fixture
def cylinder():
    return CylinderProfile()


@pytest.fixture(scope="session")
def trumpet():
    return build_trumpet()
