"""Built-in reproducibility checks, shared by ``baric verify-paper`` and the test-suite.

Every check is deterministic given ``seed`` and returns a :class:`CheckResult`
whose ``passed`` flag includes the stated time limit.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .algebra import (
    Algebra,
    is_commutative,
    kernel_idempotent_witness,
    kernel_square_zero,
    random_algebra,
)
from .builtin import (
    constant_product_algebra,
    idempotent_line,
    no_hom_algebra,
    non_nil_kernel_product,
    two_hom_algebra,
)
from .fields import GF, QQ, FieldSpec
from .linalg import (
    Matrix,
    determinant,
    enumerate_gl,
    gl_order,
    invert,
    is_column_stochastic,
    is_row_stochastic,
    matrix_with_row_sums,
    row_sums,
)
from .algebra import direct_product
from .seminatural import census, certify_unique_via_transitions, enumerate_seminat, row_sum_solution_check
from .solver import Verdict, certify_unique, solve, solve_eigen, solve_exhaustive

__all__ = ["CheckResult", "CHECKS", "run_checks", "random_nonsingular", "random_stochastic"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float
    limit: float

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag}  {self.name}: {self.detail} ({self.seconds:.2f}s, limit {self.limit:g}s)"


def _timed(name: str, limit: float, body: Callable[[], tuple[bool, str]]) -> CheckResult:
    t0 = time.perf_counter()
    try:
        ok, detail = body()
    except Exception as exc:  # a crashing check is a failing check
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t0
    if ok and dt >= limit:
        ok, detail = False, detail + "; too slow"
    return CheckResult(name, ok, detail, dt, limit)


def _fmt(sols) -> str:
    return "{" + ", ".join("(" + ",".join(map(str, v)) + ")" for v in sols) + "}"


def random_nonsingular(rng: random.Random, n: int, field: FieldSpec, spread: int = 3) -> Matrix:
    while True:
        if field.is_finite:
            rows = [[rng.randrange(field.prime) for _ in range(n)] for _ in range(n)]
        else:
            rows = [[rng.randint(-spread, spread) for _ in range(n)] for _ in range(n)]
        m = Matrix(field, rows)
        if determinant(m):
            return m


def random_stochastic(rng: random.Random, n: int, field: FieldSpec, spread: int = 3) -> Matrix:
    """Random nonsingular row-stochastic matrix."""
    while True:
        rows = []
        for _ in range(n):
            if field.is_finite:
                r = [rng.randrange(field.prime) for _ in range(n - 1)]
            else:
                r = [Fraction(rng.randint(-spread, spread), rng.choice((1, 2))) for _ in range(n - 1)]
            rows.append(r + [1 - sum(r)])
        m = Matrix(field, rows)
        if determinant(m):
            return m


# -- individual criteria ----------------------------------------------------------


def check_two_homs(two_hom: Algebra | None = None) -> CheckResult:
    a = two_hom or two_hom_algebra()

    def body():
        sols = solve_eigen(a)
        want = {(QQ(1), QQ(1), QQ(1)), (QQ(-1), QQ(1), QQ(-1))}
        return sols.as_set() == want, f"solutions {_fmt(sols)}"

    return _timed("two weight homomorphisms over Q", 0.1, body)


def check_non_nil_kernel() -> CheckResult:
    def body():
        factor = no_hom_algebra()
        prod = direct_product(factor, idempotent_line())
        s_factor = solve_eigen(factor)
        s_prod = solve_eigen(prod)
        w = (QQ(0), QQ(0), QQ(1))
        witness = kernel_idempotent_witness(prod, w)
        sq_zero = kernel_square_zero(prod, w)
        ok = (
            len(s_factor) == 0
            and s_prod.as_set() == {w}
            and witness == (QQ(1), QQ(0), QQ(0))
            and not sq_zero
        )
        return ok, (
            f"factor {_fmt(s_factor)}, product {_fmt(s_prod)}, "
            f"idempotent in kernel {_fmt([witness] if witness else [])}, kernel square zero {sq_zero}"
        )

    return _timed("unique homomorphism with non-nil kernel", 0.1, body)


def _oracle_sample(seed: int, count: int):
    rng = random.Random(seed)
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97]
    for t in range(count):
        n = rng.choice((1, 2, 2, 3, 3, 3))
        p = rng.choice([q for q in primes if q**n <= 10**4])
        baric = rng.random() < 0.5
        density = rng.choice((0.3, 0.6, 1.0))
        yield random_algebra(n, GF(p), rng.randrange(2**32), baric, density=density)


def check_oracle_equivalence(seed: int = 0, count: int = 1000) -> CheckResult:
    def body():
        bad, nonempty = 0, 0
        for a in _oracle_sample(seed, count):
            e = solve_eigen(a)
            x = solve_exhaustive(a)
            nonempty += bool(len(x))
            bad += e.as_set() != x.as_set()
        return bad == 0, f"{count} algebras, {nonempty} baric, {bad} mismatches"

    return _timed("eigen solver equals exhaustive scan", 60, body)


def check_two_dim_noncommutative(seed: int = 0, count: int = 1000) -> CheckResult:
    def body():
        rng = random.Random(seed)
        bad, tried = 0, 0
        done = 0
        while done < count:
            p = rng.choice((3, 5, 7, 11))
            a = random_algebra(2, GF(p), rng.randrange(2**32), baric=True)
            tried += 1
            if is_commutative(a):
                continue
            done += 1
            bad += len(solve_eigen(a)) != 1
        return bad == 0, f"{count} algebras ({tried} drawn), {bad} without exactly one solution"

    return _timed("2-dim non-commutative baric algebras have one homomorphism", 30, body)


def _transition_sample(seed: int):
    rng = random.Random(seed)
    out = [two_hom_algebra(GF(2)), two_hom_algebra(GF(3)), constant_product_algebra(2, GF(2))]
    plan = [(1, 2, 4), (1, 3, 6), (2, 2, 40), (2, 3, 60), (3, 2, 40), (3, 3, 20)]
    for n, p, k in plan:
        for _ in range(k):
            out.append(random_algebra(n, GF(p), rng.randrange(2**32), True, density=rng.choice((0.4, 1.0))))
    return out


def check_transition_criterion(seed: int = 0) -> CheckResult:
    def body():
        bad, uniq, multi = 0, 0, 0
        sample = _transition_sample(seed)
        for a in sample:
            verdict = certify_unique(a).verdict
            via = certify_unique_via_transitions(a)
            uniq += verdict is Verdict.UNIQUE
            multi += verdict is Verdict.MULTIPLE
            bad += via != (verdict is Verdict.UNIQUE)
        return bad == 0, f"{len(sample)} baric algebras ({uniq} unique, {multi} multiple), {bad} violations"

    return _timed("stochastic transitions iff unique homomorphism", 300, body)


def check_census(two_hom: Algebra | None = None) -> CheckResult:
    def body():
        a = (two_hom or two_hom_algebra()).over(GF(3))
        c3 = census(a)
        c2 = census(constant_product_algebra(2, GF(2)))
        rs3 = gl_order(3, 3) // (3**3 - 1)
        ok = (
            c3["num_seminat_bases"] == 864 == 2 * 432
            and c3["num_classes"] == 2
            and c3["class_sizes"] == [432, 432]
            and c3["rs_group_order"] == rs3 == 432
            and c2["num_seminat_bases"] == 2
            and c2["num_classes"] == 1
            and c2["class_sizes"] == [2]
        )
        return ok, (
            f"GF(3): {c3['num_seminat_bases']} bases in {c3['num_classes']} classes {c3['class_sizes']}; "
            f"GF(2) constant product: {c2['num_seminat_bases']} bases in {c2['num_classes']} class"
        )

    return _timed("coset census", 60, body)


def check_row_sum_constructor(seed: int = 0, count: int = 1000) -> CheckResult:
    def body():
        rng = random.Random(seed)
        bad, sparse = 0, 0
        for t in range(count):
            field = QQ if t % 2 == 0 else GF(rng.choice((2, 3, 5, 7, 101)))
            n = rng.randint(1, 6)
            while True:
                if t % 4 < 2:
                    # one nonzero coordinate, the rest zero
                    vals = [0] * n
                    vals[rng.randrange(n)] = rng.choice((1, 2, -1, 3))
                else:
                    vals = [rng.randint(-4, 4) for _ in range(n)]
                if field.is_finite:
                    alpha = tuple(field(v) for v in vals)
                else:
                    alpha = tuple(field(Fraction(v, rng.choice((1, 1, 2)))) for v in vals)
                if any(alpha):
                    break
            sparse += sum(1 for x in alpha if x) == 1
            m = matrix_with_row_sums(alpha)
            bad += not (determinant(m) and row_sums(m) == alpha)
        return bad == 0, f"{count} vectors ({sparse} with a single nonzero), {bad} failures"

    return _timed("nonsingular matrix with prescribed row sums", 5, body)


def check_stochastic_groups(seed: int = 0, count: int = 1000) -> CheckResult:
    def body():
        rng = random.Random(seed)
        bad = 0
        for t in range(count):
            field = QQ if t % 2 == 0 else GF(rng.choice((2, 3, 5, 7)))
            n = rng.randint(1, 4)
            m, k = random_stochastic(rng, n, field), random_stochastic(rng, n, field)
            bad += not (is_row_stochastic(m @ k) and is_row_stochastic(invert(m)))
            mc, kc = m.transpose(), k.transpose()
            bad += not (is_column_stochastic(mc @ kc) and is_column_stochastic(invert(mc)))
        orders = {}
        for n, p in ((2, 2), (2, 3), (3, 2)):
            orders[(n, p)] = sum(1 for m in enumerate_gl(n, GF(p)) if is_row_stochastic(m))
        expected = {(n, p): gl_order(n, p) // (p**n - 1) for n, p in orders}
        ok = bad == 0 and orders == expected == {(2, 2): 2, (2, 3): 6, (3, 2): 24}
        shown = ", ".join(f"|RS_{n}(F_{p})|={v}" for (n, p), v in orders.items())
        return ok, f"{count} pairs, {bad} closure failures; {shown}"

    return _timed("row-stochastic subgroup closure and order", 30, body)


def check_row_sum_biconditional(seed: int = 0, n_finite: int = 1000, n_rational: int = 100) -> CheckResult:
    def body():
        rng = random.Random(seed)
        bad, both = 0, 0
        for field, count in ((GF(3), n_finite), (QQ, n_rational)):
            for _ in range(count):
                n = rng.randint(1, 3)
                a = random_algebra(n, field, rng.randrange(2**32), rng.random() < 0.7, spread=2)
                m = random_nonsingular(rng, n, field)
                if rng.random() < 0.5:
                    sols, _ = solve(a)
                    if len(sols):
                        alpha = sols.solutions[rng.randrange(len(sols))]
                        m = matrix_with_row_sums(alpha) @ random_stochastic(rng, n, field)
                        both += 1
                bad += not row_sum_solution_check(a, m)
        return bad == 0, f"{n_finite} pairs over GF(3), {n_rational} over Q ({both} semi-natural by construction), {bad} failures"

    return _timed("semi-natural iff row sums solve the system", 60, body)


def check_field_sensitivity(two_hom: Algebra | None = None) -> CheckResult:
    def body():
        a = (two_hom or two_hom_algebra()).over(GF(2))
        sols = solve_exhaustive(a)
        eig = solve_eigen(a)
        one = GF(2)(1)
        ok = sols.as_set() == eig.as_set() == {(one, one, one)}
        return ok, f"over GF(2): {_fmt(sols)}"

    return _timed("solutions depend on the field", 0.1, body)


CHECKS = [
    ("two_homs", check_two_homs),
    ("non_nil_kernel", check_non_nil_kernel),
    ("oracle_equivalence", check_oracle_equivalence),
    ("two_dim_noncommutative", check_two_dim_noncommutative),
    ("transition_criterion", check_transition_criterion),
    ("census", check_census),
    ("row_sum_constructor", check_row_sum_constructor),
    ("stochastic_groups", check_stochastic_groups),
    ("row_sum_biconditional", check_row_sum_biconditional),
    ("field_sensitivity", check_field_sensitivity),
]

_SEEDED = {
    "oracle_equivalence",
    "two_dim_noncommutative",
    "transition_criterion",
    "row_sum_constructor",
    "stochastic_groups",
    "row_sum_biconditional",
}
_USES_TWO_HOM = {"two_homs", "census", "field_sensitivity"}


def run_checks(seed: int = 0, two_hom: Algebra | None = None, only=None, echo=None) -> list[CheckResult]:
    """Run the checks in order; ``echo`` is called with each result as it finishes."""
    results = []
    for name, fn in CHECKS:
        if only is not None and name not in only:
            continue
        kwargs = {}
        if name in _SEEDED:
            kwargs["seed"] = seed
        if name in _USES_TWO_HOM and two_hom is not None:
            kwargs["two_hom"] = two_hom
        r = fn(**kwargs)
        results.append(r)
        if echo is not None:
            echo(r)
    return results
