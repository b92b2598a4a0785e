"""Dense exact linear algebra over a :class:`~baric.fields.FieldSpec`.

Vectors are plain tuples of :class:`FieldValue`; matrices are immutable
:class:`Matrix` objects.  Elimination runs on the raw representatives
(``Fraction`` or ``int`` residues) and wraps results back into field values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Iterator, Sequence

from .fields import FieldError, FieldSpec, FieldValue

__all__ = [
    "LinAlgError",
    "SingularMatrixError",
    "RootFindingError",
    "CapExceededError",
    "Matrix",
    "Vector",
    "AffineSubspace",
    "Polynomial",
    "vector",
    "identity",
    "diag",
    "determinant",
    "invert",
    "solve_affine",
    "char_poly",
    "roots_in_field",
    "row_sums",
    "is_row_stochastic",
    "is_column_stochastic",
    "matrix_with_row_sums",
    "enumerate_gl",
    "gl_order",
    "DEFAULT_MAX_CELLS",
]

Vector = tuple  # tuple[FieldValue, ...]

DEFAULT_MAX_CELLS = 10**7
ROOT_TRIAL_BUDGET = 10**6


class LinAlgError(ValueError):
    pass


class SingularMatrixError(LinAlgError):
    pass


class RootFindingError(ArithmeticError):
    """Rational root search would exceed its trial-division budget."""


class CapExceededError(ValueError):
    """An enumeration would be larger than the configured cap."""


def vector(field: FieldSpec, values: Iterable) -> Vector:
    return tuple(field(v) for v in values)


class Matrix:
    """Immutable dense matrix with entries in a single field."""

    __slots__ = ("field", "rows")

    def __init__(self, field: FieldSpec, rows: Iterable[Iterable]):
        rows = tuple(tuple(field(x) for x in r) for r in rows)
        if not rows or not rows[0]:
            raise LinAlgError("matrix must have at least one row and column")
        if any(len(r) != len(rows[0]) for r in rows):
            raise LinAlgError("ragged matrix rows")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def _from_raw(cls, field: FieldSpec, raw) -> "Matrix":
        m = object.__new__(cls)
        object.__setattr__(m, "field", field)
        object.__setattr__(m, "rows", tuple(tuple(FieldValue(field, x) for x in r) for r in raw))
        return m

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    @property
    def is_square(self) -> bool:
        r, c = self.shape
        return r == c

    def raw(self) -> list[list]:
        return [[x.value for x in r] for r in self.rows]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> "Matrix":
        return Matrix._from_raw(self.field, zip(*self.raw()))

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if other.field != self.field:
                raise FieldError("mixed fields in matrix product")
            if self.shape[1] != other.shape[0]:
                raise LinAlgError(f"shape mismatch {self.shape} @ {other.shape}")
            a, b, p = self.raw(), other.raw(), self.field.prime
            bt = list(zip(*b))
            out = [[sum(x * y for x, y in zip(r, c)) for c in bt] for r in a]
            if p is not None:
                out = [[x % p for x in r] for r in out]
            return Matrix._from_raw(self.field, out)
        if isinstance(other, tuple):
            if len(other) != self.shape[1]:
                raise LinAlgError("shape mismatch in matrix-vector product")
            return tuple(_dot(r, other, self.field) for r in self.rows)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.rows == other.rows

    def __hash__(self):
        return hash((self.field, self.rows))

    def sort_key(self):
        return tuple(x.value for r in self.rows for x in r)

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.rows]

    def __str__(self):
        cells = self.to_strings()
        width = max(len(c) for r in cells for c in r)
        return "\n".join("[" + " ".join(c.rjust(width) for c in r) + "]" for r in cells)

    def __repr__(self):
        return f"Matrix({self.field}, {self.to_strings()})"


def _dot(a: Sequence[FieldValue], b: Sequence[FieldValue], field: FieldSpec) -> FieldValue:
    s = sum(x.value * y.value for x, y in zip(a, b))
    return field(s) if field.prime is not None else FieldValue(field, Fraction(s))


def identity(n: int, field: FieldSpec) -> Matrix:
    return Matrix(field, [[int(i == j) for j in range(n)] for i in range(n)])


def diag(values: Sequence, field: FieldSpec) -> Matrix:
    n = len(values)
    return Matrix(field, [[values[i] if i == j else 0 for j in range(n)] for i in range(n)])


# -- raw elimination ---------------------------------------------------------


def _div(a, b, p):
    return a / b if p is None else a * pow(b, -1, p) % p


def _rref(rows: list[list], p: int | None, ncols: int | None = None):
    """Reduced row echelon form in place on raw values.

    Only the first ``ncols`` columns are used as pivot candidates (lets the
    caller keep an augmented right-hand side).  Returns the pivot columns.
    """
    if not rows:
        return []
    ncols = len(rows[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c]
        rows[r] = [_div(x, inv, p) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
                if p is not None:
                    rows[i] = [x % p for x in rows[i]]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def _det_mod_p(a: list[list[int]], p: int) -> int:
    a = [r[:] for r in a]
    n = len(a)
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] % p), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det = det * a[c][c] % p
        inv = pow(a[c][c], -1, p)
        for i in range(c + 1, n):
            f = a[i][c] * inv % p
            if f:
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[c])]
    return det % p


def _det_bareiss(a: list[list[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    a = [r[:] for r in a]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def determinant(m: Matrix) -> FieldValue:
    """Exact determinant: Bareiss over Q (after clearing row denominators), elimination mod p."""
    if not m.is_square:
        raise LinAlgError(f"determinant of non-square {m.shape} matrix")
    p = m.field.prime
    if p is not None:
        return FieldValue(m.field, _det_mod_p(m.raw(), p))
    scaled, scale = [], Fraction(1)
    for row in m.raw():
        d = lcm(*(x.denominator for x in row))
        scaled.append([int(x * d) for x in row])
        scale *= d
    return FieldValue(m.field, Fraction(_det_bareiss(scaled)) / scale)


def invert(m: Matrix) -> Matrix:
    if not m.is_square:
        raise LinAlgError(f"cannot invert non-square {m.shape} matrix")
    n, p = m.shape[0], m.field.prime
    one = 1 if p is not None else Fraction(1)
    aug = [r + [one if i == j else 0 * one for j in range(n)] for i, r in enumerate(m.raw())]
    pivots = _rref(aug, p, n)
    if len(pivots) < n:
        raise SingularMatrixError("matrix is singular")
    return Matrix._from_raw(m.field, [r[n:] for r in aug])


@dataclass(frozen=True)
class AffineSubspace:
    """``{particular + sum t_i * basis[i]}``; ``basis`` spans the homogeneous kernel."""

    particular: Vector
    basis: tuple[Vector, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _solve_raw(rows: list[list], ncols: int, field: FieldSpec):
    """Solve an augmented raw system (last column = rhs). Returns (AffineSubspace | None, reduced rows)."""
    p = field.prime
    zero = 0 if p is not None else Fraction(0)
    rows = [r[:] for r in rows]
    pivots = _rref(rows, p, ncols)
    rows = [r for r in rows if any(x != 0 for x in r)]
    if any(all(x == 0 for x in r[:ncols]) for r in rows):
        return None, rows
    x = [zero] * ncols
    for r, c in zip(rows, pivots):
        x[c] = r[ncols]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = zero + 1
        for r, c in zip(rows, pivots):
            v[c] = -r[f] % p if p is not None else -r[f]
        basis.append(tuple(FieldValue(field, y) for y in v))
    point = tuple(FieldValue(field, y) for y in x)
    return AffineSubspace(point, tuple(basis)), rows


def solve_affine(a: Matrix, b: Vector) -> AffineSubspace | None:
    """All solutions of ``a x = b``, or ``None`` when the system is inconsistent."""
    if a.shape[0] != len(b):
        raise LinAlgError(f"{a.shape[0]} equations but rhs of length {len(b)}")
    if any(x.field != a.field for x in b):
        raise FieldError("rhs field differs from matrix field")
    rows = [r + [y.value] for r, y in zip(a.raw(), b)]
    sol, _ = _solve_raw(rows, a.shape[1], a.field)
    return sol


# -- polynomials -----------------------------------------------------------------


class Polynomial:
    """Univariate polynomial, coefficients lowest degree first, trailing zeros stripped."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: Iterable):
        cs = [field(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x) -> FieldValue:
        x = self.field(x)
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            cs = str(c)
            if mono and cs == "1":
                cs = ""
            elif mono and cs == "-1":
                cs = "-"
            terms.append(cs + ("*" if cs not in ("", "-") and mono else "") + mono)
        return " + ".join(terms).replace("+ -", "- ")

    def __repr__(self):
        return f"Polynomial({self.field}, [{', '.join(map(str, self.coeffs))}])"


def char_poly(m: Matrix) -> Polynomial:
    """det(x I - m) by Berkowitz's division-free algorithm.

    Uses only ring operations, so it is valid in every characteristic.
    """
    if not m.is_square:
        raise LinAlgError(f"characteristic polynomial of non-square {m.shape} matrix")
    a = m.raw()
    n = len(a)
    p = m.field.prime
    red = (lambda v: v % p) if p is not None else (lambda v: v)
    # coefficients highest degree first
    poly = [1]
    for k in range(n):
        # leading principal block of size k, then row R, column C, corner a_kk
        r = a[k][:k]
        c = [a[i][k] for i in range(k)]
        col = [1, red(-a[k][k])]
        v = c
        for _ in range(k):
            col.append(red(-sum(x * y for x, y in zip(r, v))))
            v = [red(sum(a[i][j] * v[j] for j in range(k))) for i in range(k)]
        # Toeplitz (k+2) x (k+1) lower-triangular with first column `col`
        poly = [
            red(sum(col[i - j] * poly[j] for j in range(min(i, k) + 1) if i - j < len(col)))
            for i in range(k + 2)
        ]
    return Polynomial(m.field, reversed(poly))


def _divisors(n: int, budget: list[int]) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        budget[0] -= 1
        if budget[0] < 0:
            raise RootFindingError(
                f"rational root search exceeded {ROOT_TRIAL_BUDGET} trial divisors"
            )
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def roots_in_field(f: Polynomial) -> set[FieldValue]:
    """Distinct roots of ``f`` lying in its field.

    Over GF(p) every residue is tried; over Q the rational root theorem is
    applied to the denominator-cleared integer polynomial.
    """
    if f.is_zero():
        raise LinAlgError("roots of the zero polynomial")
    field = f.field
    if field.is_finite:
        return {x for x in field.elements() if not f(x)}
    fr = [c.value for c in f.coeffs]
    d = lcm(*(c.denominator for c in fr))
    ints = [int(c * d) for c in fr]
    roots = set()
    if ints[0] == 0:
        roots.add(field.zero)
        while ints[0] == 0:
            ints.pop(0)
    if len(ints) == 1:
        return roots
    budget = [ROOT_TRIAL_BUDGET]
    nums = _divisors(ints[0], budget)
    dens = _divisors(ints[-1], budget)
    deg = len(ints) - 1
    for q in dens:
        for a in nums:
            for s in (a, -a):
                if gcd(s, q) != 1:
                    continue
                # q^deg * f(s/q) evaluated over the integers
                if sum(c * s**k * q ** (deg - k) for k, c in enumerate(ints)) == 0:
                    roots.add(field(Fraction(s, q)))
    return roots


# -- row sums and stochastic matrices --------------------------------------------


def row_sums(m: Matrix) -> Vector:
    """Row-sum vector; component i is sum_k m[i][k]."""
    return tuple(sum(r, m.field.zero) for r in m.rows)


def is_row_stochastic(m: Matrix) -> bool:
    one = m.field.one
    return all(s == one for s in row_sums(m))


def is_column_stochastic(m: Matrix) -> bool:
    return is_row_stochastic(m.transpose())


def matrix_with_row_sums(alpha: Sequence[FieldValue]) -> Matrix:
    """A nonsingular matrix whose row sums are ``alpha``.

    With k the first index where ``alpha[k] != 0``: row k is ``alpha[k] * e_k``
    and every other row i is ``e_i + (alpha[i] - 1) * e_k``.  The matrix is the
    identity with column k replaced, so its determinant is ``alpha[k]``.
    """
    if not alpha:
        raise LinAlgError("empty row-sum vector")
    field = alpha[0].field
    k = next((i for i, a in enumerate(alpha) if a), None)
    if k is None:
        raise LinAlgError("no nonsingular matrix has all row sums zero")
    n = len(alpha)
    rows = []
    for i in range(n):
        row = [field.zero] * n
        if i == k:
            row[k] = alpha[k]
        else:
            row[i] = field.one
            row[k] = alpha[i] - 1
        rows.append(row)
    m = Matrix(field, rows)
    assert determinant(m), "constructed matrix is singular"
    return m


# -- GL_n(GF(p)) -----------------------------------------------------------------


def gl_order(n: int, p: int) -> int:
    """|GL_n(F_p)| = prod_{i<n} (p^n - p^i)."""
    out = 1
    for i in range(n):
        out *= p**n - p**i
    return out


def enumerate_gl(
    n: int,
    field: FieldSpec,
    *,
    max_cells: int = DEFAULT_MAX_CELLS,
    start: int = 0,
    stop: int | None = None,
) -> Iterator[Matrix]:
    """Every nonsingular n x n matrix over GF(p), each exactly once.

    Matrices are visited in row-major base-p counting order and filtered by
    ``det != 0``.  ``start``/``stop`` restrict the scan to a range of counter
    indices in ``[0, p**(n*n))`` so callers can split the work into chunks.
    """
    if not field.is_finite:
        raise FieldError("GL_n enumeration needs a finite field")
    p = field.prime
    total = p ** (n * n)
    if total > max_cells:
        raise CapExceededError(
            f"scanning GL_{n}(F_{p}) visits {p}^{n * n} = {total} matrices, cap is {max_cells}"
        )
    stop = total if stop is None else min(stop, total)
    for idx in range(start, stop):
        digits = []
        x = idx
        for _ in range(n * n):
            x, d = divmod(x, p)
            digits.append(d)
        digits.reverse()
        raw = [digits[i * n : (i + 1) * n] for i in range(n)]
        if _det_mod_p(raw, p):
            yield Matrix._from_raw(field, raw)
