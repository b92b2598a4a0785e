"""Semi-natural bases, transition matrices and the finite-field census.

Orientation used throughout: a basis ``e`` is recorded by the transition
matrix ``M`` *from* ``e`` *to* the algebra's reference basis ``f``, i.e.
``f_i = sum_k M[i][k] e_k``.  Equivalently the rows of ``M^-1`` are the
``e``-vectors written in ``f``-coordinates, and the constants of the algebra
in the ``e`` frame are ``change_basis(algebra, M^-1)``.

With this convention ``e`` is semi-natural exactly when ``row_sums(M)`` is a
weight homomorphism of the algebra (in ``f``-coordinates), and that
homomorphism is the one taking the value 1 on every ``e_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import (
    Algebra,
    WeightHomomorphism,
    change_basis,
    is_semi_natural,
    is_weight_homomorphism,
)
from .fields import FieldError, FieldSpec, FieldValue
from .linalg import (
    DEFAULT_MAX_CELLS,
    Matrix,
    SingularMatrixError,
    determinant,
    diag,
    enumerate_gl,
    invert,
    is_row_stochastic,
    matrix_with_row_sums,
    row_sums,
)
from .solver import DEFAULT_MAX_SCAN, solve

__all__ = [
    "NotBaricError",
    "SemiNaturalBasis",
    "CosetPartition",
    "seminat_from_solution",
    "row_sum_solution_check",
    "enumerate_seminat",
    "certify_unique_via_transitions",
    "map_G",
    "coset_partition",
    "verify_pullback",
    "row_stochastic_group",
    "census",
]


class NotBaricError(ValueError):
    """The algebra has no weight homomorphism, so it has no semi-natural basis."""


@dataclass(frozen=True)
class SemiNaturalBasis:
    """A semi-natural basis ``e`` of ``algebra``, stored as the transition matrix ``e -> f``."""

    algebra: Algebra
    M: Matrix

    def __post_init__(self):
        if not self.M.is_square or self.M.shape[0] != self.algebra.n:
            raise ValueError("transition matrix has the wrong size")
        if not determinant(self.M):
            raise SingularMatrixError("transition matrix is singular")
        if not is_semi_natural(self.frame_algebra()):
            raise ValueError("basis is not semi-natural")

    @property
    def vectors(self) -> Matrix:
        """Rows are the basis vectors in reference coordinates."""
        return invert(self.M)

    def frame_algebra(self) -> Algebra:
        """Structure constants with respect to this basis."""
        return change_basis(self.algebra, invert(self.M))


@dataclass(frozen=True)
class CosetPartition:
    """Left cosets ``M * RS_n``; each class sorted, classes ordered by least member."""

    classes: tuple[tuple[Matrix, ...], ...]
    field: FieldSpec

    def __len__(self):
        return len(self.classes)

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.classes]


def seminat_from_solution(a: Algebra, alpha: Sequence[FieldValue]) -> SemiNaturalBasis:
    """A semi-natural basis whose weight homomorphism is ``alpha``.

    Uses ``diag(alpha)`` when no coordinate vanishes, otherwise
    :func:`~baric.linalg.matrix_with_row_sums`.
    """
    alpha = tuple(a.field(x) for x in alpha)
    if not any(alpha):
        raise ValueError("alpha must be nonzero")
    if not is_weight_homomorphism(a, alpha):
        raise ValueError("alpha does not satisfy the multiplicativity equations")
    if all(alpha):
        m = diag(alpha, a.field)
    else:
        m = matrix_with_row_sums(alpha)
    return SemiNaturalBasis(a, m)


def row_sum_solution_check(a: Algebra, m: Matrix) -> bool:
    """Whether "the basis given by ``m`` is semi-natural" and "``row_sums(m)`` is a
    weight homomorphism" agree.  Should be True for every nonsingular ``m``."""
    inv = invert(m)
    return is_semi_natural(change_basis(a, inv)) == is_weight_homomorphism(a, row_sums(m))


def _eth_keys(a: Algebra, max_scan: int) -> set[tuple]:
    sols, _ = solve(a, max_scan=max_scan)
    return {tuple(x.value for x in v) for v in sols}


def enumerate_seminat(
    a: Algebra,
    *,
    max_cells: int = DEFAULT_MAX_CELLS,
    max_scan: int = DEFAULT_MAX_SCAN,
    verify: bool = True,
) -> list[Matrix]:
    """Transition matrices (``e -> f``) of all semi-natural bases over GF(p).

    These are the ``M`` in GL_n whose row sums solve the multiplicativity
    system.  With ``verify`` each result is re-checked by transforming the
    constants into its frame.  Output is in GL scan order.
    """
    if not a.field.is_finite:
        raise FieldError("semi-natural bases can only be enumerated over a finite field")
    eth = _eth_keys(a, max_scan)
    out = []
    if not eth:
        return out
    for m in enumerate_gl(a.n, a.field, max_cells=max_cells):
        if tuple(x.value for x in row_sums(m)) in eth:
            out.append(m)
    if verify:
        for m in out:
            SemiNaturalBasis(a, m)
    return out


def certify_unique_via_transitions(
    a: Algebra,
    *,
    max_cells: int = DEFAULT_MAX_CELLS,
    max_scan: int = DEFAULT_MAX_SCAN,
    pairwise: bool = False,
    seminat: list[Matrix] | None = None,
) -> bool:
    """True iff every transition matrix between semi-natural bases is row stochastic.

    By default transitions are taken from every semi-natural basis to one fixed
    semi-natural basis (the first enumerated); since row-stochastic matrices
    form a group this settles all pairs.  ``pairwise=True`` checks every
    ordered pair directly.
    """
    mats = enumerate_seminat(a, max_cells=max_cells, max_scan=max_scan) if seminat is None else seminat
    if not mats:
        raise NotBaricError("algebra has no semi-natural basis")
    # transition from basis X to basis Y is M_Y^-1 M_X
    if not pairwise:
        ref_inv = invert(mats[0])
        return all(is_row_stochastic(ref_inv @ m) for m in mats)
    invs = [invert(m) for m in mats]
    return all(is_row_stochastic(iy @ mx) for iy in invs for mx in mats)


def map_G(b: SemiNaturalBasis) -> WeightHomomorphism:
    """The weight homomorphism equal to 1 on every vector of ``b``, in reference coordinates."""
    w = row_sums(b.M)
    if not is_weight_homomorphism(b.algebra, w):
        raise ValueError("row sums of a semi-natural basis must be a weight homomorphism")
    return WeightHomomorphism(w)


def coset_partition(mats: Iterable[Matrix]) -> CosetPartition:
    """Group matrices into left cosets of the row-stochastic group.

    ``M`` joins the class with representative ``R`` when ``R^-1 M`` is row
    stochastic.  Matrices are processed in lexicographic order, so each
    class's representative is its least member.
    """
    mats = sorted(mats, key=Matrix.sort_key)
    if not mats:
        raise ValueError("nothing to partition")
    field = mats[0].field
    reps: list[Matrix] = []
    rep_invs: list[Matrix] = []
    classes: list[list[Matrix]] = []
    for m in mats:
        if m.field != field:
            raise FieldError("mixed fields in coset partition")
        if not determinant(m):
            raise SingularMatrixError("coset partition needs nonsingular matrices")
        for idx, r_inv in enumerate(rep_invs):
            if is_row_stochastic(r_inv @ m):
                classes[idx].append(m)
                break
        else:
            reps.append(m)
            rep_invs.append(invert(m))
            classes.append([m])
    return CosetPartition(tuple(tuple(c) for c in classes), field)


def verify_pullback(
    a: Algebra,
    *,
    max_cells: int = DEFAULT_MAX_CELLS,
    max_scan: int = DEFAULT_MAX_SCAN,
) -> bool:
    """Check concretely that semi-natural bases are the preimage of the solution set
    under ``M -> row_sums(M)``.

    One side tests each ``M`` in GL_n by transforming the constants into its
    frame; the other filters GL_n by row sums.  Also checks that row sums of
    every semi-natural basis land among the solutions.
    """
    if not a.field.is_finite:
        raise FieldError("pullback check needs a finite field")
    eth = _eth_keys(a, max_scan)
    by_frame = set()
    by_rows = set()
    for m in enumerate_gl(a.n, a.field, max_cells=max_cells):
        key = tuple(x.value for x in row_sums(m))
        if key in eth:
            by_rows.add(m)
        if is_semi_natural(change_basis(a, invert(m))):
            by_frame.add(m)
            if key not in eth:
                return False
    return by_frame == by_rows == set(enumerate_seminat(a, max_cells=max_cells, max_scan=max_scan, verify=False))


def row_stochastic_group(n: int, field: FieldSpec, *, max_cells: int = DEFAULT_MAX_CELLS) -> list[Matrix]:
    """All of RS_n(GF(p)), by scanning GL_n."""
    return [m for m in enumerate_gl(n, field, max_cells=max_cells) if is_row_stochastic(m)]


def census(
    a: Algebra,
    *,
    max_cells: int = DEFAULT_MAX_CELLS,
    max_scan: int = DEFAULT_MAX_SCAN,
) -> dict:
    """Counts relating semi-natural bases, weight homomorphisms and RS_n cosets."""
    if not a.field.is_finite:
        raise FieldError("census requires a finite field")
    sols, _ = solve(a, max_scan=max_scan)
    mats = enumerate_seminat(a, max_cells=max_cells, max_scan=max_scan)
    rs = row_stochastic_group(a.n, a.field, max_cells=max_cells)
    parts = coset_partition(mats) if mats else CosetPartition((), a.field)
    return {
        "dim": a.n,
        "prime": a.field.prime,
        "num_weight_homs": len(sols),
        "num_seminat_bases": len(mats),
        "rs_group_order": len(rs),
        "num_classes": len(parts),
        "class_sizes": parts.sizes,
    }
