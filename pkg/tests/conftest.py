import pytest

from wavelab.kernels import make_kernel


@pytest.fixture(scope="session")
def riesz1():
    return make_kernel("riesz", beta=1.0)


@pytest.fixture(scope="session")
def riesz_half():
    return make_kernel("riesz", beta=0.5)


@pytest.fixture(scope="session")
def bessel2():
    return make_kernel("bessel", alpha=2.0)


@pytest.fixture(scope="session")
def bessel15():
    return make_kernel("bessel", alpha=1.5)


@pytest.fixture(scope="session")
def frac08():
    return make_kernel("fractional", h1=0.8, h2=0.8, h3=0.8)


@pytest.fixture(scope="session")
def smoothed1():
    return make_kernel("smoothed_riesz", beta=1.0)
