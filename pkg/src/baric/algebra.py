"""Finite-dimensional algebras given by structure constants.

``gamma[i][j][k]`` is the coefficient of ``e_k`` in ``e_i * e_j`` (0-based
storage; files and printed output use 1-based indices).

Basis changes are always described by a matrix ``P`` whose *rows are the new
basis vectors written in the current basis*.  If the current basis is ``e``
and the new one is ``f``, ``P`` is the transition matrix from ``e`` to ``f``:
``f_i = sum_k P[i][k] e_k``.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .fields import QQ, FieldError, FieldSpec, FieldValue, parse_value
from .linalg import (
    LinAlgError,
    Matrix,
    SingularMatrixError,
    Vector,
    determinant,
    invert,
    vector,
)

__all__ = [
    "Algebra",
    "AlgebraFormatError",
    "WeightHomomorphism",
    "BasisChange",
    "multiply",
    "is_commutative",
    "is_semi_natural",
    "constant_structure_sum",
    "has_constant_j_columns",
    "change_basis",
    "is_weight_homomorphism",
    "kernel_basis",
    "kernel_square_zero",
    "kernel_idempotent_witness",
    "direct_product",
    "random_algebra",
    "load_algebra",
    "dump_algebra",
]

KERNEL_SCAN_LIMIT = 10**5


class AlgebraFormatError(ValueError):
    """Problem in an algebra file; the message names the offending entry."""


class Algebra:
    """Dimension ``n`` plus the ``n x n x n`` structure-constant tensor over ``field``."""

    __slots__ = ("n", "field", "gamma")

    def __init__(self, n: int, field: FieldSpec, gamma):
        if n < 1:
            raise ValueError("dimension must be positive")
        if len(gamma) != n or any(len(gamma[i]) != n or any(len(s) != n for s in gamma[i]) for i in range(n)):
            raise ValueError(f"structure tensor is not {n}x{n}x{n}")
        g = tuple(tuple(tuple(field(x) for x in gamma[i][j]) for j in range(n)) for i in range(n))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "gamma", g)

    def __setattr__(self, name, value):
        raise AttributeError("Algebra is immutable")

    @classmethod
    def from_products(cls, n: int, field: FieldSpec, table: dict) -> "Algebra":
        """Build from ``{(i, j): {k: coeff}}`` with 1-based indices; missing products are 0."""
        g = [[[0] * n for _ in range(n)] for _ in range(n)]
        for (i, j), out in table.items():
            for k, c in out.items():
                g[i - 1][j - 1][k - 1] = c
        return cls(n, field, g)

    @classmethod
    def zero(cls, n: int, field: FieldSpec = QQ) -> "Algebra":
        return cls(n, field, [[[0] * n for _ in range(n)] for _ in range(n)])

    def slice_matrix(self, i: int) -> Matrix:
        """``A_i`` with ``A_i[j][k] = gamma[i][j][k]`` (0-based ``i``)."""
        return Matrix(self.field, self.gamma[i])

    def over(self, field: FieldSpec) -> "Algebra":
        """Reinterpret rational constants in another field (reduction mod p)."""
        if field == self.field:
            return self
        return Algebra(self.n, field, self.gamma)

    def __eq__(self, other):
        if not isinstance(other, Algebra):
            return NotImplemented
        return self.n == other.n and self.field == other.field and self.gamma == other.gamma

    def __hash__(self):
        return hash((self.n, self.field, self.gamma))

    def __repr__(self):
        return f"Algebra(n={self.n}, field={self.field}, nonzero={len(self.nonzero_entries())})"

    def nonzero_entries(self) -> list[tuple[int, int, int, FieldValue]]:
        """``(i, j, k, value)`` with 1-based indices, in lexicographic order."""
        n = self.n
        return [
            (i + 1, j + 1, k + 1, self.gamma[i][j][k])
            for i in range(n)
            for j in range(n)
            for k in range(n)
            if self.gamma[i][j][k]
        ]

    def products_table(self) -> list[str]:
        """Human-readable lines ``e_i*e_j = ...``."""
        out = []
        for i in range(self.n):
            for j in range(self.n):
                terms = [
                    (str(c) if c != 1 else "") + ("*" if c != 1 else "") + f"e{k + 1}"
                    for k, c in enumerate(self.gamma[i][j])
                    if c
                ]
                out.append(f"e{i + 1}*e{j + 1} = " + (" + ".join(terms) if terms else "0"))
        return out


@dataclass(frozen=True)
class WeightHomomorphism:
    """Values ``w(e_1), ..., w(e_n)`` of a nonzero multiplicative linear form."""

    coords: Vector

    def __call__(self, x: Vector) -> FieldValue:
        return sum((a * b for a, b in zip(self.coords, x)), self.coords[0].field.zero)


@dataclass(frozen=True)
class BasisChange:
    """Rows of ``new_in_old`` are the new basis vectors in current coordinates."""

    new_in_old: Matrix

    def __post_init__(self):
        if not self.new_in_old.is_square or not determinant(self.new_in_old):
            raise SingularMatrixError("basis change matrix must be square and nonsingular")


def _check_vec(a: Algebra, x: Sequence[FieldValue]) -> None:
    if len(x) != a.n:
        raise LinAlgError(f"vector of length {len(x)} in a {a.n}-dimensional algebra")
    if any(v.field != a.field for v in x):
        raise FieldError(f"vector is not over {a.field}")


def multiply(a: Algebra, x: Vector, y: Vector) -> Vector:
    """Coordinates of ``x * y``: ``z_k = sum_{i,j} x_i y_j gamma_ijk``."""
    _check_vec(a, x)
    _check_vec(a, y)
    z = [a.field.zero] * a.n
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if not yj:
                continue
            c = xi * yj
            for k, g in enumerate(a.gamma[i][j]):
                if g:
                    z[k] = z[k] + c * g
    return tuple(z)


def is_commutative(a: Algebra) -> bool:
    n = a.n
    return all(a.gamma[i][j] == a.gamma[j][i] for i in range(n) for j in range(i + 1, n))


def _slice_sums(a: Algebra) -> list[FieldValue]:
    return [sum(a.gamma[i][j], a.field.zero) for i in range(a.n) for j in range(a.n)]


def constant_structure_sum(a: Algebra) -> FieldValue | None:
    """The common value of ``sum_k gamma_ijk`` over all ``(i, j)``, or None if they differ.

    A nonzero common value ``c`` is exactly the statement that ``(c, ..., c)``
    solves the multiplicativity equations; ``c == 1`` means semi-natural.
    """
    sums = _slice_sums(a)
    return sums[0] if all(s == sums[0] for s in sums) else None


def is_semi_natural(a: Algebra) -> bool:
    return constant_structure_sum(a) == a.field.one


def has_constant_j_columns(a: Algebra) -> bool:
    """True when ``gamma[i][j][k]`` does not depend on ``j``."""
    return all(a.gamma[i][j] == a.gamma[i][0] for i in range(a.n) for j in range(a.n))


def change_basis(a: Algebra, change: BasisChange | Matrix) -> Algebra:
    """Structure constants of ``a`` in the basis whose vectors are the rows of ``P``.

    ``xi_ijq = sum_{k,l,m} P[i][k] P[j][l] gamma_klm Pinv[m][q]``.
    """
    p_mat = change.new_in_old if isinstance(change, BasisChange) else BasisChange(change).new_in_old
    if p_mat.shape[0] != a.n or p_mat.field != a.field:
        raise LinAlgError("basis change does not match the algebra")
    n, f = a.n, a.field
    prime = f.prime
    P = p_mat.raw()
    Q = invert(p_mat).raw()
    G = [[[x.value for x in s] for s in plane] for plane in a.gamma]
    # products of new basis vectors in old coordinates: T[i][j][m]
    new = []
    for i in range(n):
        plane = []
        for j in range(n):
            t = [0] * n
            for k in range(n):
                if P[i][k] == 0:
                    continue
                for l in range(n):
                    c = P[i][k] * P[j][l]
                    if c == 0:
                        continue
                    g = G[k][l]
                    for m in range(n):
                        if g[m] != 0:
                            t[m] += c * g[m]
            out = [sum(t[m] * Q[m][q] for m in range(n)) for q in range(n)]
            if prime is not None:
                out = [x % prime for x in out]
            else:
                out = [Fraction(x) for x in out]
            plane.append(out)
        new.append(plane)
    return Algebra(n, f, new)


def is_weight_homomorphism(a: Algebra, w: Sequence[FieldValue]) -> bool:
    """Nonzero ``w`` with ``sum_k gamma_ijk w_k == w_i w_j`` for all ``i, j``."""
    _check_vec(a, w)
    if not any(w):
        return False
    n = a.n
    for i in range(n):
        for j in range(n):
            lhs = sum((g * wk for g, wk in zip(a.gamma[i][j], w)), a.field.zero)
            if lhs != w[i] * w[j]:
                return False
    return True


def kernel_basis(w: WeightHomomorphism | Sequence[FieldValue]) -> list[Vector]:
    """``n - 1`` independent vectors spanning ``{x : sum w_i x_i = 0}``.

    With ``k`` the first index where ``w_k != 0``, the basis is
    ``e_i - (w_i / w_k) e_k`` for ``i != k``.
    """
    coords = w.coords if isinstance(w, WeightHomomorphism) else tuple(w)
    field = coords[0].field
    k = next((i for i, c in enumerate(coords) if c), None)
    if k is None:
        raise ValueError("zero functional has no codimension-one kernel")
    out = []
    for i in range(len(coords)):
        if i == k:
            continue
        v = [field.zero] * len(coords)
        v[i] = field.one
        v[k] = -coords[i] / coords[k]
        out.append(tuple(v))
    return out


def kernel_square_zero(a: Algebra, w) -> bool:
    """True iff ``u * v == 0`` for all kernel basis vectors ``u, v``.

    By bilinearity this is ``ker(w) * ker(w) = 0``, which makes every kernel
    element square to zero and so the kernel nil.
    """
    basis = kernel_basis(w)
    return all(not any(multiply(a, u, v)) for u in basis for v in basis)


def kernel_idempotent_witness(
    a: Algebra, w, *, scan_limit: int = KERNEL_SCAN_LIMIT
) -> Vector | None:
    """A kernel vector ``u != 0`` with ``u * u == u``, if one is found.

    Kernel basis vectors are tried first.  Over GF(p) with at most
    ``scan_limit`` kernel vectors the whole kernel is then scanned, so there a
    ``None`` result is conclusive; over Q it only means no basis vector works.
    """
    basis = kernel_basis(w)
    for u in basis:
        if multiply(a, u, u) == u:
            return u
    f = a.field
    if not f.is_finite or f.prime ** len(basis) > scan_limit:
        return None
    for coeffs in itertools.product(range(f.prime), repeat=len(basis)):
        if not any(coeffs):
            continue
        u = tuple(
            sum((f(c) * b[t] for c, b in zip(coeffs, basis)), f.zero) for t in range(a.n)
        )
        if multiply(a, u, u) == u:
            return u
    return None


def direct_product(a: Algebra, b: Algebra) -> Algebra:
    """``A x B`` in the basis ``(e_1,0), ..., (e_n,0), (0,f_1), ...``; cross products vanish."""
    if a.field != b.field:
        raise FieldError(f"cannot multiply algebras over {a.field} and {b.field}")
    n = a.n + b.n
    g = [[[0] * n for _ in range(n)] for _ in range(n)]
    for src, off in ((a, 0), (b, a.n)):
        for i in range(src.n):
            for j in range(src.n):
                for k in range(src.n):
                    g[i + off][j + off][k + off] = src.gamma[i][j][k]
    return Algebra(n, a.field, g)


def _random_scalar(rng: random.Random, field: FieldSpec, spread: int):
    if field.is_finite:
        return rng.randrange(field.prime)
    num = rng.randint(-spread, spread)
    return Fraction(num, rng.choice((1, 1, 1, 2, 3)))


def random_algebra(
    n: int,
    field: FieldSpec,
    seed: int,
    baric: bool = False,
    *,
    density: float = 1.0,
    spread: int = 3,
) -> Algebra:
    """Seeded random algebra.

    With ``baric=True`` each product ``e_i e_j`` gets ``n - 1`` random
    coefficients and the last one is set so they sum to 1, which makes the
    basis semi-natural.  ``density`` is the chance a free coefficient is
    drawn rather than left at zero.
    """
    if n < 1:
        raise ValueError("dimension must be positive")
    rng = random.Random(seed)
    g = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            free = n - 1 if baric else n
            vals = [
                _random_scalar(rng, field, spread) if rng.random() < density else 0
                for _ in range(free)
            ]
            if baric:
                vals.append(1 - sum(vals))
            g[i][j] = vals
    return Algebra(n, field, g)


# -- file format -----------------------------------------------------------------


def load_algebra(source, field: FieldSpec | None = None) -> Algebra:
    """Read the JSON algebra format from a path, file object, or already-decoded dict.

    ``field`` overrides the file's field (rational constants are reduced mod p).
    """
    if isinstance(source, dict):
        data = source
    else:
        try:
            if hasattr(source, "read"):
                data = json.load(source)
            else:
                with open(source, encoding="utf-8") as fh:
                    data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise AlgebraFormatError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise AlgebraFormatError("top level must be an object")
    missing = {"field", "dim", "gamma"} - set(data)
    if missing:
        raise AlgebraFormatError(f"missing field(s): {', '.join(sorted(missing))}")
    try:
        file_field = FieldSpec.from_json(data["field"])
    except FieldError as exc:
        raise AlgebraFormatError(f"field 'field': {exc}") from exc
    n = data["dim"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise AlgebraFormatError("field 'dim': must be a positive integer")
    if not isinstance(data["gamma"], list):
        raise AlgebraFormatError("field 'gamma': must be a list")
    g = [[[file_field.zero] * n for _ in range(n)] for _ in range(n)]
    seen = set()
    for pos, entry in enumerate(data["gamma"]):
        where = f"gamma[{pos}]"
        if not (isinstance(entry, list) and len(entry) == 4):
            raise AlgebraFormatError(f"{where}: expected [i, j, k, \"scalar\"]")
        *idx, lit = entry
        if not all(isinstance(t, int) and not isinstance(t, bool) and 1 <= t <= n for t in idx):
            raise AlgebraFormatError(f"{where}: indices must be integers in 1..{n}")
        if not isinstance(lit, str):
            raise AlgebraFormatError(f"{where}: scalar must be a string literal")
        key = tuple(idx)
        if key in seen:
            raise AlgebraFormatError(f"{where}: duplicate triple {list(key)}")
        seen.add(key)
        try:
            val = parse_value(lit, file_field)
        except FieldError as exc:
            raise AlgebraFormatError(f"{where}: {exc}") from exc
        i, j, k = key
        g[i - 1][j - 1][k - 1] = val
    alg = Algebra(n, file_field, g)
    if field is not None and field != file_field:
        try:
            alg = alg.over(field)
        except FieldError as exc:
            raise AlgebraFormatError(str(exc)) from exc
    return alg


def algebra_to_json(a: Algebra) -> dict:
    return {
        "field": a.field.to_json(),
        "dim": a.n,
        "gamma": [[i, j, k, str(v)] for i, j, k, v in a.nonzero_entries()],
    }


def dump_algebra(a: Algebra, fp=None) -> str:
    text = json.dumps(algebra_to_json(a), indent=None)
    if fp is not None:
        fp.write(text + "\n")
    return text
