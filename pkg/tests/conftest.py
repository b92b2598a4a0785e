import pytest

from baric.builtin import constant_product_algebra, non_nil_kernel_product, two_hom_algebra
from baric.fields import GF, QQ


@pytest.fixture
def two_hom():
    return two_hom_algebra(QQ)


@pytest.fixture
def non_nil():
    return non_nil_kernel_product(QQ)


@pytest.fixture
def const2():
    return constant_product_algebra(2, GF(2))


def vec(field, *xs):
    return tuple(field(x) for x in xs)
