import pytest

from nfk.number_field import build_field


@pytest.fixture(scope="session")
def field_q():
    return build_field([0, 1], ell=2, label="Q")


@pytest.fixture(scope="session")
def field_qi():
    return build_field([1, 0, 1], ell=2, label="Q(i)")


@pytest.fixture(scope="session")
def field_qm5():
    return build_field([5, 0, 1], ell=2, label="Q(sqrt(-5))")


@pytest.fixture(scope="session")
def field_qs2():
    return build_field([-2, 0, 1], ell=2, label="Q(sqrt(2))")


@pytest.fixture(scope="session")
def field_cubic9():
    return build_field([-9, -1, 0, 1], ell=2, label="cubic-9")


@pytest.fixture(scope="session")
def field_zeta3():
    return build_field([1, 1, 1], ell=3, label="Q(zeta3)")
