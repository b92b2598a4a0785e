"""Complete solution of the multiplicativity system ``x_i x_j = sum_k gamma_ijk x_k``.

Its nonzero solutions are exactly the weight homomorphisms of the algebra,
read off as ``(w(e_1), ..., w(e_n))``.  Two independent solvers are provided:

* :func:`solve_exhaustive` scans every vector of GF(p)^n;
* :func:`solve_eigen` works over any exact field.  Writing ``A_i`` for the
  slice ``A_i[j][k] = gamma_ijk``, the system says ``A_i v = v_i v`` for every
  ``i``, so for ``v != 0`` each ``v_i`` is an eigenvalue of ``A_i``.  The
  solver branches on those eigenvalues one coordinate at a time, accumulating
  the linear constraints ``(A_i - lam I) v = 0`` and ``v_i = lam``.

The solution set is always finite: if ``p + t d`` were a line of solutions,
the equation ``v_i^2 = (linear in v)`` would force ``d_i^2 = 0`` for every
``i``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterator

from .algebra import (
    Algebra,
    WeightHomomorphism,
    has_constant_j_columns,
    is_weight_homomorphism,
    kernel_square_zero,
)
from .fields import FieldError, FieldSpec, FieldValue
from .linalg import CapExceededError, Vector, _solve_raw, char_poly, roots_in_field

__all__ = [
    "SolutionSet",
    "Verdict",
    "FastPath",
    "UniquenessCertificate",
    "SolverError",
    "DEFAULT_MAX_SCAN",
    "EXHAUSTIVE_PREFERRED",
    "solve_exhaustive",
    "solve_eigen",
    "solve",
    "certify_unique",
    "weight_homomorphisms",
]

DEFAULT_MAX_SCAN = 10**7
# certify_unique prefers the brute-force scan up to this many vectors
EXHAUSTIVE_PREFERRED = 10**4


class SolverError(RuntimeError):
    """Internal inconsistency in the eigenvalue solver (indicates a bug)."""


def _vec_key(v: Vector):
    return tuple(x.sort_key() for x in v)


@dataclass(frozen=True)
class SolutionSet:
    """Nonzero solutions, sorted lexicographically by coordinates."""

    solutions: tuple[Vector, ...]
    field: FieldSpec
    complete: bool = True

    @classmethod
    def build(cls, sols, field: FieldSpec) -> "SolutionSet":
        uniq = {tuple(v) for v in sols}
        return cls(tuple(sorted(uniq, key=_vec_key)), field)

    def __len__(self):
        return len(self.solutions)

    def __iter__(self) -> Iterator[Vector]:
        return iter(self.solutions)

    def __contains__(self, v) -> bool:
        return tuple(v) in set(self.solutions)

    def as_set(self) -> set[Vector]:
        return set(self.solutions)

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in v] for v in self.solutions]


class Verdict(enum.Enum):
    NOT_BARIC = "NotBaric"
    UNIQUE = "Unique"
    MULTIPLE = "Multiple"

    @classmethod
    def from_count(cls, k: int) -> "Verdict":
        return cls.NOT_BARIC if k == 0 else cls.UNIQUE if k == 1 else cls.MULTIPLE


class FastPath(enum.Enum):
    CONSTANT_J_COLUMNS = "ConstantJColumns"
    ZERO_SQUARE_KERNEL = "ZeroSquareKernel"


@dataclass(frozen=True)
class UniquenessCertificate:
    verdict: Verdict
    solutions: SolutionSet
    fast_path: FastPath | None = None
    method: str = dc_field(default="eigen", compare=False)

    def __post_init__(self):
        if Verdict.from_count(len(self.solutions)) is not self.verdict:
            raise ValueError("verdict disagrees with the number of solutions")


def solve_exhaustive(a: Algebra, *, max_scan: int = DEFAULT_MAX_SCAN) -> SolutionSet:
    """Every nonzero ``v`` in GF(p)^n satisfying the system, by direct scan."""
    f = a.field
    if not f.is_finite:
        raise FieldError("exhaustive search needs a finite field")
    p, n = f.prime, a.n
    if p**n > max_scan:
        raise CapExceededError(f"scan of {p}^{n} = {p**n} vectors exceeds cap {max_scan}")
    g = [[[x.value for x in s] for s in plane] for plane in a.gamma]
    # diagonal equations first: they reject most vectors fastest
    pairs = [(i, i) for i in range(n)] + [(i, j) for i in range(n) for j in range(n) if i != j]
    found = []
    for v in itertools.product(range(p), repeat=n):
        if not any(v):
            continue
        for i, j in pairs:
            gij = g[i][j]
            if (v[i] * v[j] - sum(c * x for c, x in zip(gij, v))) % p:
                break
        else:
            found.append(tuple(FieldValue(f, x) for x in v))
    return SolutionSet.build(found, f)


def solve_eigen(a: Algebra) -> SolutionSet:
    """All nonzero solutions over ``a.field`` by branching on slice eigenvalues."""
    f, n = a.field, a.n
    p = f.prime
    zero_raw = f.zero.value
    one_raw = f.one.value
    slices = [[[x.value for x in row] for row in a.gamma[i]] for i in range(n)]
    roots: list[list[FieldValue] | None] = [None] * n

    def eigenvalues(i: int) -> list[FieldValue]:
        if roots[i] is None:
            roots[i] = sorted(roots_in_field(char_poly(a.slice_matrix(i))), key=lambda x: x.sort_key())
        return roots[i]

    found = []

    def descend(i: int, rows: list[list]) -> None:
        if i == n:
            sol, _ = _solve_raw(rows, n, f)
            if sol is None or sol.dimension:
                raise SolverError("leaf of the eigenvalue tree is not a single point")
            found.append(sol.particular)
            return
        for lam in eigenvalues(i):
            new = list(rows)
            for j in range(n):
                row = [c - lam.value if k == j else c for k, c in enumerate(slices[i][j])]
                if p is not None:
                    row = [c % p for c in row]
                new.append(row + [zero_raw])
            new.append([one_raw if k == i else zero_raw for k in range(n)] + [lam.value])
            sol, reduced = _solve_raw(new, n, f)
            if sol is None:
                continue
            descend(i + 1, reduced)

    descend(0, [])
    sols = [v for v in found if any(v)]
    for v in sols:
        if not is_weight_homomorphism(a, v):
            raise SolverError(f"solver produced a non-solution {[str(x) for x in v]}")
    return SolutionSet.build(sols, f)


def solve(a: Algebra, *, max_scan: int = DEFAULT_MAX_SCAN) -> tuple[SolutionSet, str]:
    """Solve with the preferred method; returns ``(solutions, method_name)``."""
    f = a.field
    if f.is_finite and f.prime**a.n <= min(EXHAUSTIVE_PREFERRED, max_scan):
        return solve_exhaustive(a, max_scan=max_scan), "exhaustive"
    return solve_eigen(a), "eigen"


def certify_unique(a: Algebra, *, max_scan: int = DEFAULT_MAX_SCAN) -> UniquenessCertificate:
    """Count weight homomorphisms exactly and report which sufficient condition, if any, applies.

    The verdict always comes from the complete solution set; ``fast_path`` is
    informational only.
    """
    sols, method = solve(a, max_scan=max_scan)
    fast = None
    if len(sols) and has_constant_j_columns(a):
        fast = FastPath.CONSTANT_J_COLUMNS
    elif any(kernel_square_zero(a, v) for v in sols):
        fast = FastPath.ZERO_SQUARE_KERNEL
    return UniquenessCertificate(Verdict.from_count(len(sols)), sols, fast, method)


def weight_homomorphisms(a: Algebra, *, max_scan: int = DEFAULT_MAX_SCAN) -> list[WeightHomomorphism]:
    sols, _ = solve(a, max_scan=max_scan)
    return [WeightHomomorphism(v) for v in sols]
