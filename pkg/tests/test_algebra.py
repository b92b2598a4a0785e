import io
import itertools
import json
import random
from fractions import Fraction

import pytest

from baric.algebra import (
    Algebra,
    AlgebraFormatError,
    algebra_to_json,
    change_basis,
    constant_structure_sum,
    direct_product,
    has_constant_j_columns,
    is_commutative,
    is_semi_natural,
    is_weight_homomorphism,
    kernel_basis,
    kernel_idempotent_witness,
    kernel_square_zero,
    load_algebra,
    multiply,
    random_algebra,
)
from baric.builtin import TWO_HOM_PRODUCTS, idempotent_line, no_hom_algebra, two_hom_algebra
from baric.checks import random_nonsingular
from baric.fields import GF, QQ, FieldError
from baric.linalg import LinAlgError, Matrix, SingularMatrixError, diag, identity, invert
from baric.solver import solve_eigen, solve_exhaustive

from conftest import vec


def basis_vec(field, n, i):
    return tuple(field.one if k == i else field.zero for k in range(n))


def test_multiply_examples(two_hom):
    e = [basis_vec(QQ, 3, i) for i in range(3)]
    assert multiply(two_hom, e[0], e[1]) == e[0]
    assert multiply(two_hom, e[1], e[0]) == e[2]
    assert multiply(two_hom, vec(QQ, 0, 0, 0), e[2]) == vec(QQ, 0, 0, 0)
    with pytest.raises(LinAlgError):
        multiply(two_hom, e[0], vec(QQ, 1, 0))
    with pytest.raises(FieldError):
        multiply(two_hom, e[0], vec(GF(3), 1, 0, 0))


def test_commutativity():
    assert not is_commutative(two_hom_algebra())
    a = random_algebra(3, QQ, 5)
    sym = Algebra(3, QQ, [[[a.gamma[i][j][k] + a.gamma[j][i][k] for k in range(3)] for j in range(3)] for i in range(3)])
    assert is_commutative(sym)
    assert is_commutative(random_algebra(1, GF(7), 1))


def test_semi_natural_and_constant_sum(two_hom, non_nil):
    assert is_semi_natural(two_hom)
    assert constant_structure_sum(two_hom) == 1
    assert not is_semi_natural(Algebra.zero(3))
    assert constant_structure_sum(Algebra.zero(3)) == 0
    assert not is_semi_natural(non_nil)
    assert constant_structure_sum(non_nil) is None


def oracle_change_basis(a, p_mat):
    """New constants by solving  f_i f_j = sum_q xi_ijq f_q  for xi, one product at a time."""
    from baric.linalg import solve_affine

    n = a.n
    rows = p_mat.rows
    new_t = p_mat.transpose()
    xi = []
    for i in range(n):
        plane = []
        for j in range(n):
            prod = multiply(a, rows[i], rows[j])
            sol = solve_affine(new_t, prod)
            assert sol is not None and sol.dimension == 0
            plane.append(sol.particular)
        xi.append(plane)
    return Algebra(n, a.field, xi)


def test_change_basis_examples(two_hom):
    assert change_basis(two_hom, identity(3, QQ)) == two_hom
    new = change_basis(two_hom, diag([-1, 1, -1], QQ))
    assert new.gamma[0][1][0] == 1  # (-e1) e2 = -e1
    a = random_algebra(3, QQ, 11)
    swap = Matrix(QQ, [[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    pi = [1, 0, 2]
    b = change_basis(a, swap)
    for i, j, k in itertools.product(range(3), repeat=3):
        assert b.gamma[i][j][k] == a.gamma[pi[i]][pi[j]][pi[k]]
    with pytest.raises(SingularMatrixError):
        change_basis(a, Matrix(QQ, [[1, 1, 0], [1, 1, 0], [0, 0, 1]]))


@pytest.mark.parametrize("field", [QQ, GF(3), GF(7)])
def test_change_basis_oracle_and_inverse(field):
    rng = random.Random(8)
    for _ in range(40):
        n = rng.randint(1, 3)
        a = random_algebra(n, field, rng.randrange(10**6))
        p_mat = random_nonsingular(rng, n, field)
        b = change_basis(a, p_mat)
        assert b == oracle_change_basis(a, p_mat)
        assert change_basis(b, invert(p_mat)) == a


def test_weight_homomorphism_examples(two_hom):
    assert is_weight_homomorphism(two_hom, vec(QQ, 1, 1, 1))
    assert is_weight_homomorphism(two_hom, vec(QQ, -1, 1, -1))
    assert not is_weight_homomorphism(two_hom, vec(QQ, 0, 0, 0))
    assert not is_weight_homomorphism(two_hom, vec(QQ, 1, -1, 1))


def test_kernel_basis():
    assert kernel_basis(vec(QQ, 0, 0, 1)) == [vec(QQ, 1, 0, 0), vec(QQ, 0, 1, 0)]
    assert kernel_basis(vec(QQ, 1, 1)) == [vec(QQ, -1, 1)]
    ker = kernel_basis(vec(QQ, 1, 1, 1))
    assert ker == [vec(QQ, -1, 1, 0), vec(QQ, -1, 0, 1)]  # spans the same plane as (1,-1,0),(0,1,-1)
    w = vec(QQ, 2, Fraction(1, 3), -1)
    for u in kernel_basis(w):
        assert sum((a * b for a, b in zip(w, u)), QQ.zero) == 0


def test_kernel_square_zero(non_nil):
    half = Algebra(2, QQ, [[[Fraction(1, 2)] * 2] * 2] * 2)
    assert kernel_square_zero(half, vec(QQ, 1, 1))
    assert not kernel_square_zero(non_nil, vec(QQ, 0, 0, 1))
    assert kernel_square_zero(idempotent_line(), vec(QQ, 1))


def test_kernel_idempotent_witness(non_nil):
    assert kernel_idempotent_witness(non_nil, vec(QQ, 0, 0, 1)) == vec(QQ, 1, 0, 0)
    assert kernel_idempotent_witness(Algebra.zero(3), vec(QQ, 1, 0, 0)) is None

    # oracle: enumerate ker(1,1,1) over GF(2) with the product table directly
    table = {ij: k for ij, k in TWO_HOM_PRODUCTS.items()}
    idem = []
    for u in itertools.product((0, 1), repeat=3):
        if sum(u) % 2 or not any(u):
            continue
        sq = [0, 0, 0]
        for i, j in itertools.product(range(3), repeat=2):
            if u[i] and u[j]:
                sq[table[(i + 1, j + 1)] - 1] += 1
        if tuple(x % 2 for x in sq) == u:
            idem.append(u)
    assert idem == []
    f2 = GF(2)
    assert kernel_idempotent_witness(two_hom_algebra(f2), vec(f2, 1, 1, 1)) is None


def test_direct_product(two_hom):
    a2 = no_hom_algebra()
    p = direct_product(a2, idempotent_line())
    assert p.n == 3
    e = [basis_vec(QQ, 3, i) for i in range(3)]
    assert multiply(p, e[2], e[2]) == e[2]
    assert multiply(p, e[0], e[1]) == vec(QQ, 1, 1, 0)
    assert not any(multiply(p, e[0], e[2])) and not any(multiply(p, e[2], e[1]))
    assert direct_product(Algebra.zero(2), Algebra.zero(1)) == Algebra.zero(3)
    with pytest.raises(FieldError):
        direct_product(two_hom, idempotent_line(GF(3)))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_direct_product_homomorphisms(p):
    f = GF(p)
    rng = random.Random(p)
    for _ in range(20):
        a = random_algebra(rng.randint(1, 2), f, rng.randrange(10**6), rng.random() < 0.6)
        b = random_algebra(rng.randint(1, 2), f, rng.randrange(10**6), rng.random() < 0.6)
        ab = direct_product(a, b)
        sols = solve_exhaustive(ab).as_set()
        for w in solve_exhaustive(a):
            assert tuple(w) + (f.zero,) * b.n in sols
        for w in solve_exhaustive(b):
            assert (f.zero,) * a.n + tuple(w) in sols
        for w in itertools.product(list(f.elements()), repeat=a.n):
            assert is_weight_homomorphism(ab, tuple(w) + (f.zero,) * b.n) == is_weight_homomorphism(a, tuple(w))


def test_random_algebra():
    a = random_algebra(2, GF(3), 42, baric=True)
    assert is_semi_natural(a)
    assert a == random_algebra(2, GF(3), 42, baric=True)
    assert random_algebra(3, QQ, 1) != random_algebra(3, QQ, 2)
    for seed in range(30):
        b = random_algebra(3, QQ, seed, baric=True)
        assert is_semi_natural(b)
        assert len(solve_eigen(b)) >= 1


def test_prop_bijection_brute_force():
    """Weight homomorphisms found by evaluating the equations on every vector."""
    rng = random.Random(9)
    for _ in range(60):
        p = rng.choice((2, 3, 5, 7))
        n = rng.choice([k for k in (1, 2, 3) if p**k <= 10**5])
        a = random_algebra(n, GF(p), rng.randrange(10**6), rng.random() < 0.5)
        brute = set()
        for v in itertools.product(range(p), repeat=n):
            if not any(v):
                continue
            ok = all(
                (v[i] * v[j] - sum(a.gamma[i][j][k].value * v[k] for k in range(n))) % p == 0
                for i in range(n)
                for j in range(n)
            )
            if ok:
                brute.add(tuple(GF(p)(x) for x in v))
        hom = {tuple(w) for w in itertools.product(list(GF(p).elements()), repeat=n) if is_weight_homomorphism(a, tuple(w))}
        assert hom == brute == solve_exhaustive(a).as_set()


@pytest.mark.parametrize("field", [GF(3), GF(5), QQ])
def test_count_invariant_under_basis_change(field):
    rng = random.Random(10)
    for _ in range(30):
        n = rng.randint(1, 3)
        a = random_algebra(n, field, rng.randrange(10**6), rng.random() < 0.7, spread=2)
        b = change_basis(a, random_nonsingular(rng, n, field, spread=2))
        solver = solve_exhaustive if field.is_finite else solve_eigen
        assert len(solver(a)) == len(solver(b))


def test_constant_j_columns_gives_unique():
    rng = random.Random(11)
    hits = 0
    for _ in range(200):
        n, f = rng.randint(1, 3), GF(rng.choice((2, 3, 5)))
        rows = [[rng.randrange(f.prime) for _ in range(n)] for _ in range(n)]
        a = Algebra(n, f, [[rows[i]] * n for i in range(n)])
        assert has_constant_j_columns(a)
        sols = solve_exhaustive(a)
        if len(sols):
            hits += 1
            assert len(sols) == 1
    assert hits > 20


@pytest.mark.parametrize("n, c", [(1, 1), (2, Fraction(1, 2)), (3, Fraction(1, 3)), (4, Fraction(1, 4))])
def test_all_equal_constants_square_zero_kernel(n, c):
    a = Algebra(n, QQ, [[[c] * n] * n] * n)
    assert constant_structure_sum(a) == 1
    assert kernel_square_zero(a, (QQ.one,) * n)


# -- file format -----------------------------------------------------------------


def test_file_round_trip(tmp_path):
    a = random_algebra(3, QQ, 3)
    path = tmp_path / "a.json"
    path.write_text(json.dumps(algebra_to_json(a)))
    assert load_algebra(path) == a
    b = random_algebra(2, GF(7), 3)
    assert load_algebra(io.StringIO(json.dumps(algebra_to_json(b)))) == b


def test_file_field_override():
    doc = {"field": "Q", "dim": 1, "gamma": [[1, 1, 1, "-1"]]}
    assert load_algebra(doc, GF(5)).gamma[0][0][0] == GF(5)(4)
    with pytest.raises(AlgebraFormatError):
        load_algebra({"field": "Q", "dim": 1, "gamma": [[1, 1, 1, "1/5"]]}, GF(5))


@pytest.mark.parametrize(
    "doc, fragment",
    [
        ({"field": "Q", "dim": 2}, "missing"),
        ({"field": "R", "dim": 2, "gamma": []}, "field"),
        ({"field": {"prime": 4}, "dim": 2, "gamma": []}, "not prime"),
        ({"field": "Q", "dim": 0, "gamma": []}, "dim"),
        ({"field": "Q", "dim": 2, "gamma": [[1, 1, 3, "1"]]}, "gamma[0]"),
        ({"field": "Q", "dim": 2, "gamma": [[1, 1, 1, 1]]}, "string"),
        ({"field": "Q", "dim": 2, "gamma": [[1, 1, 1, "1"], [1, 1, 1, "2"]]}, "duplicate"),
        ({"field": "Q", "dim": 2, "gamma": [[1, 1, 1, "x"]]}, "gamma[0]"),
        ({"field": {"prime": 3}, "dim": 2, "gamma": [[1, 1, 1, "1/2"]]}, "gamma[0]"),
    ],
)
def test_file_errors(doc, fragment):
    with pytest.raises(AlgebraFormatError, match=fragment.replace("[", r"\[").replace("]", r"\]")):
        load_algebra(doc)


def test_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"field": "Q",\n "dim": }')
    with pytest.raises(AlgebraFormatError, match="line 2"):
        load_algebra(path)
