"""Small reference algebras used by the self-test and the test-suite."""

from __future__ import annotations

from .algebra import Algebra, direct_product
from .fields import QQ, FieldSpec

# e_i * e_j -> e_k for a 3-dimensional non-commutative algebra with
# exactly two weight homomorphisms over Q: (1,1,1) and (-1,1,-1).
TWO_HOM_PRODUCTS = {
    (1, 1): 2,
    (2, 2): 2,
    (3, 3): 2,
    (1, 2): 1,
    (2, 1): 3,
    (1, 3): 2,
    (3, 1): 2,
    (2, 3): 3,
    (3, 2): 3,
}

# 2-dimensional algebra with no weight homomorphism:
# e1^2 = e1, e2^2 = e2, e1 e2 = e1 + e2, e2 e1 = 0.
NO_HOM_PRODUCTS = {
    (1, 1): {1: 1},
    (2, 2): {2: 1},
    (1, 2): {1: 1, 2: 1},
}


def two_hom_algebra(field: FieldSpec = QQ) -> Algebra:
    return Algebra.from_products(3, field, {ij: {k: 1} for ij, k in TWO_HOM_PRODUCTS.items()})


def no_hom_algebra(field: FieldSpec = QQ) -> Algebra:
    return Algebra.from_products(2, field, NO_HOM_PRODUCTS)


def idempotent_line(field: FieldSpec = QQ) -> Algebra:
    """The 1-dimensional algebra ``e^2 = e`` (a copy of the field)."""
    return Algebra(1, field, [[[1]]])


def non_nil_kernel_product(field: FieldSpec = QQ) -> Algebra:
    """``no_hom_algebra x field``: one weight homomorphism, whose kernel contains an idempotent."""
    return direct_product(no_hom_algebra(field), idempotent_line(field))


def constant_product_algebra(n: int = 2, field: FieldSpec = QQ) -> Algebra:
    """``e_i e_j = e_1`` for all ``i, j``."""
    return Algebra.from_products(n, field, {(i, j): {1: 1} for i in range(1, n + 1) for j in range(1, n + 1)})
