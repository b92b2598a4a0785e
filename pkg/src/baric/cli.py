"""``baric`` command-line interface.

Exit codes: 0 success (for ``solve``/``certify``: exactly one weight
homomorphism), 1 error, 2 several weight homomorphisms (or, for
``seminat-check``, a negative answer), 3 no weight homomorphism.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .algebra import (
    AlgebraFormatError,
    algebra_to_json,
    change_basis,
    constant_structure_sum,
    is_semi_natural,
    is_weight_homomorphism,
    load_algebra,
    random_algebra,
)
from .checks import run_checks
from .fields import FieldError, FieldSpec, parse_value
from .linalg import (
    DEFAULT_MAX_CELLS,
    CapExceededError,
    LinAlgError,
    Matrix,
    RootFindingError,
    invert,
    row_sums,
)
from .seminatural import census, seminat_from_solution
from .solver import DEFAULT_MAX_SCAN, SolverError, Verdict, certify_unique, solve

HARD_CEILING = 10**9
MAX_PRIME = 2**31

EXIT_OK, EXIT_ERROR, EXIT_MULTIPLE, EXIT_NOT_BARIC = 0, 1, 2, 3
_VERDICT_EXIT = {Verdict.UNIQUE: EXIT_OK, Verdict.MULTIPLE: EXIT_MULTIPLE, Verdict.NOT_BARIC: EXIT_NOT_BARIC}


class UsageError(Exception):
    pass


def _emit(args, record: dict, text_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(record, indent=2))
    else:
        print("\n".join(text_lines))


def _field_arg(text: str) -> FieldSpec:
    try:
        f = FieldSpec.from_text(text)
    except FieldError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    if f.is_finite and f.prime > MAX_PRIME:
        raise argparse.ArgumentTypeError(f"prime {f.prime} exceeds 2^31")
    return f


def _cap_arg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 1 <= v <= HARD_CEILING:
        raise argparse.ArgumentTypeError(f"cap must be between 1 and {HARD_CEILING}")
    return v


def _load(args):
    if args.file is None:
        raise UsageError(f"'{args.command}' needs an algebra file")
    a = load_algebra(args.file, args.field)
    if a.field.is_finite and a.field.prime > MAX_PRIME:
        raise UsageError(f"prime {a.field.prime} exceeds 2^31")
    return a


def _parse_vector(text: str, field: FieldSpec):
    return tuple(parse_value(t, field) for t in text.split(","))


def parse_matrix(text: str, field: FieldSpec) -> Matrix:
    """``[["1","0"],["0","1"]]`` (JSON rows of literals) or ``1,0;0,1``."""
    t = text.strip()
    if t.startswith("["):
        try:
            rows = json.loads(t)
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad matrix JSON: {exc.msg}") from exc
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise UsageError("matrix must be a list of rows")
        return Matrix(field, [[parse_value(str(x), field) for x in r] for r in rows])
    return Matrix(field, [[parse_value(x, field) for x in r.split(",")] for r in t.split(";")])


def _vec(v) -> list[str]:
    return [str(x) for x in v]


def _fmt_vec(v) -> str:
    return "(" + ", ".join(_vec(v)) + ")"


# -- commands --------------------------------------------------------------------


def cmd_solve(args) -> int:
    a = _load(args)
    cert = certify_unique(a, max_scan=args.max_scan)
    record = {
        "command": "solve",
        "field": a.field.to_json(),
        "dim": a.n,
        "method": cert.method,
        "solutions": cert.solutions.to_strings(),
        "verdict": cert.verdict.value,
    }
    lines = [f"algebra: dim {a.n} over {a.field}", f"weight homomorphisms ({len(cert.solutions)}):"]
    lines += [f"  {_fmt_vec(v)}" for v in cert.solutions] or ["  none"]
    lines.append(f"verdict: {cert.verdict.value}")
    _emit(args, record, lines)
    return _VERDICT_EXIT[cert.verdict]


def cmd_certify(args) -> int:
    a = _load(args)
    cert = certify_unique(a, max_scan=args.max_scan)
    fast = cert.fast_path.value if cert.fast_path else None
    record = {
        "command": "certify",
        "field": a.field.to_json(),
        "dim": a.n,
        "method": cert.method,
        "verdict": cert.verdict.value,
        "fast_path": fast,
        "solutions": cert.solutions.to_strings(),
        "semi_natural": is_semi_natural(a),
    }
    lines = [
        f"verdict: {cert.verdict.value} ({len(cert.solutions)} weight homomorphism(s), {cert.method} solver)",
        f"sufficient condition detected: {fast or 'none'}",
        f"basis semi-natural: {'yes' if record['semi_natural'] else 'no'}",
    ]
    lines += [f"  {_fmt_vec(v)}" for v in cert.solutions]
    _emit(args, record, lines)
    return _VERDICT_EXIT[cert.verdict]


def cmd_seminat_check(args) -> int:
    a = _load(args)
    if args.matrix is None:
        c = constant_structure_sum(a)
        ok = is_semi_natural(a)
        record = {"command": "seminat-check", "semi_natural": ok, "constant_sum": None if c is None else str(c)}
        lines = [
            f"basis semi-natural: {'yes' if ok else 'no'}",
            f"common coefficient sum: {c if c is not None else 'none (sums differ)'}",
        ]
        _emit(args, record, lines)
        return EXIT_OK if ok else EXIT_MULTIPLE
    m = parse_matrix(args.matrix, a.field)
    frame = change_basis(a, invert(m))
    sn = is_semi_natural(frame)
    rs = row_sums(m)
    solves = is_weight_homomorphism(a, rs)
    record = {
        "command": "seminat-check",
        "basis_semi_natural": sn,
        "row_sums": _vec(rs),
        "row_sums_solve_system": solves,
        "agree": sn == solves,
    }
    lines = [
        f"basis with transition matrix M is semi-natural: {'yes' if sn else 'no'}",
        f"row sums of M {_fmt_vec(rs)} solve the system: {'yes' if solves else 'no'}",
        f"agreement: {'yes' if sn == solves else 'NO'}",
    ]
    _emit(args, record, lines)
    if sn != solves:
        return EXIT_ERROR
    return EXIT_OK if sn else EXIT_MULTIPLE


def _violated_equation(a, alpha):
    n = a.n
    for i in range(n):
        for j in range(n):
            lhs = alpha[i] * alpha[j]
            rhs = sum((g * x for g, x in zip(a.gamma[i][j], alpha)), a.field.zero)
            if lhs != rhs:
                return i + 1, j + 1, lhs, rhs
    return None


def cmd_seminat_make(args) -> int:
    a = _load(args)
    if args.alpha is None:
        raise UsageError("seminat-make needs --alpha")
    alpha = _parse_vector(args.alpha, a.field)
    if len(alpha) != a.n:
        raise UsageError(f"--alpha has {len(alpha)} entries, algebra has dimension {a.n}")
    if not any(alpha):
        raise UsageError("--alpha must be nonzero")
    bad = _violated_equation(a, alpha)
    if bad is not None:
        i, j, lhs, rhs = bad
        raise UsageError(f"alpha is not a solution: equation ({i},{j}) gives x{i}*x{j} = {lhs} but sum_k gamma_{i}{j}k x_k = {rhs}")
    b = seminat_from_solution(a, alpha)
    frame = b.frame_algebra()
    if not is_semi_natural(frame):
        raise SolverError("constructed basis failed the semi-natural check")
    record = {
        "command": "seminat-make",
        "alpha": _vec(alpha),
        "M": b.M.to_strings(),
        "M_inverse": b.vectors.to_strings(),
        "algebra": algebra_to_json(frame),
    }
    lines = [
        "transition matrix M (new basis -> given basis):",
        str(b.M),
        "new basis vectors (rows of M^-1, in given coordinates):",
        str(b.vectors),
        "structure constants in the new basis (all coefficient sums are 1):",
        *("  " + s for s in frame.products_table()),
    ]
    _emit(args, record, lines)
    return EXIT_OK


def cmd_change_basis(args) -> int:
    a = _load(args)
    if args.matrix is None:
        raise UsageError("change-basis needs --matrix (rows = new basis vectors in current coordinates)")
    m = parse_matrix(args.matrix, a.field)
    if m.shape != (a.n, a.n):
        raise UsageError(f"matrix shape {m.shape} does not match dimension {a.n}")
    new = change_basis(a, m)
    record = algebra_to_json(new)
    lines = [f"dim {new.n} over {new.field}", *new.products_table()]
    _emit(args, record, lines)
    return EXIT_OK


def cmd_census(args) -> int:
    a = _load(args)
    if not a.field.is_finite:
        raise UsageError("census requires a finite field")
    rec = census(a, max_cells=args.max_cells, max_scan=args.max_scan)
    lines = [f"{k:>18}  {v}" for k, v in rec.items()]
    _emit(args, rec, lines)
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    echo = None if args.json else (lambda r: print(r.line(), flush=True))
    results = run_checks(seed=args.seed, echo=echo)
    ok = all(r.passed for r in results)
    if args.json:
        record = {
            "command": "verify-paper",
            "seed": args.seed,
            "passed": ok,
            "checks": [
                {"name": r.name, "passed": r.passed, "detail": r.detail, "seconds": round(r.seconds, 4)}
                for r in results
            ],
        }
        print(json.dumps(record, indent=2))
    else:
        print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return EXIT_OK if ok else EXIT_ERROR


def cmd_random(args) -> int:
    field = args.field or FieldSpec()
    a = random_algebra(args.dim, field, args.seed, args.baric)
    print(json.dumps(algebra_to_json(a)))
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "certify": cmd_certify,
    "seminat-check": cmd_seminat_check,
    "seminat-make": cmd_seminat_make,
    "change-basis": cmd_change_basis,
    "census": cmd_census,
    "verify-paper": cmd_verify_paper,
    "random": cmd_random,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse's default status 2 collides with the "multiple" verdict
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="baric",
        description="Weight homomorphisms and semi-natural bases of finite-dimensional algebras.",
        epilog=(
            "Exit codes: 0 ok / unique, 1 error, 2 multiple (or negative check), 3 not baric. "
            f"--max-scan and --max-cells cannot exceed {HARD_CEILING}."
        ),
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("file", nargs="?", help="algebra file (JSON)")
    p.add_argument("--field", type=_field_arg, help="Q or a prime p; overrides the file's field")
    p.add_argument("--alpha", help="comma-separated scalars, e.g. -1,1,-1")
    p.add_argument("--matrix", help='rows "1,0;0,1" or JSON [["1","0"],["0","1"]]')
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=3, help="dimension for 'random'")
    p.add_argument("--baric", action="store_true", help="'random': make the basis semi-natural")
    p.add_argument(
        "--max-scan", type=_cap_arg, default=DEFAULT_MAX_SCAN,
        help=f"max vectors in an exhaustive scan (default {DEFAULT_MAX_SCAN})",
    )
    p.add_argument(
        "--max-cells", type=_cap_arg, default=DEFAULT_MAX_CELLS,
        help=f"max p^(n*n) for GL_n scans (default {DEFAULT_MAX_CELLS})",
    )
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "random" and args.dim < 1:
        print("error: --dim must be positive", file=sys.stderr)
        return EXIT_ERROR
    try:
        return COMMANDS[args.command](args)
    except (
        UsageError,
        AlgebraFormatError,
        FieldError,
        LinAlgError,
        CapExceededError,
        RootFindingError,
        SolverError,
        OSError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
