import json

import pytest

from baric.algebra import Algebra, algebra_to_json, is_semi_natural, load_algebra
from baric.builtin import constant_product_algebra, non_nil_kernel_product, two_hom_algebra
from baric.checks import run_checks
from baric.cli import main, parse_matrix
from baric.fields import GF, QQ
from baric.linalg import Matrix


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, a in {
        "two_hom": two_hom_algebra(),
        "non_nil": non_nil_kernel_product(),
        "zero": Algebra.zero(2),
        "const2": constant_product_algebra(2, GF(2)),
    }.items():
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(algebra_to_json(a)))
        out[name] = str(path)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_solve_exit_codes(files, capsys):
    code, out, _ = run(capsys, "solve", files["two_hom"], "--json")
    rec = json.loads(out)
    assert code == 2 and rec["verdict"] == "Multiple"
    assert rec["solutions"] == [["-1", "1", "-1"], ["1", "1", "1"]]

    code, out, _ = run(capsys, "solve", files["non_nil"], "--json")
    assert code == 0 and json.loads(out)["solutions"] == [["0", "0", "1"]]

    code, out, _ = run(capsys, "solve", files["zero"])
    assert code == 3 and "NotBaric" in out


def test_text_and_json_agree(files, capsys):
    for name in files:
        code_t, out_t, _ = run(capsys, "certify", files[name])
        code_j, out_j, _ = run(capsys, "certify", files[name], "--json")
        assert code_t == code_j
        assert f"verdict: {json.loads(out_j)['verdict']}" in out_t


def test_field_override(files, capsys):
    code, out, _ = run(capsys, "solve", files["two_hom"], "--field", "2", "--json")
    assert code == 0 and json.loads(out)["solutions"] == [["1", "1", "1"]]
    for bad, msg in (("4", "not prime"), ("2147483659", "2^31")):
        with pytest.raises(SystemExit) as exc:
            main(["solve", files["two_hom"], "--field", bad])
        assert exc.value.code == 1 and msg in capsys.readouterr().err


def test_seminat_make(files, capsys):
    code, out, _ = run(capsys, "seminat-make", files["two_hom"], "--alpha=-1,1,-1", "--json")
    rec = json.loads(out)
    assert code == 0
    assert rec["M"] == [["-1", "0", "0"], ["0", "1", "0"], ["0", "0", "-1"]]
    assert is_semi_natural(load_algebra(rec["algebra"]))

    code, out, _ = run(capsys, "seminat-make", files["two_hom"], "--alpha", "1,1,1", "--json")
    assert code == 0 and json.loads(out)["M"] == [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]

    code, _, err = run(capsys, "seminat-make", files["two_hom"], "--alpha", "0,0,0")
    assert code == 1 and "nonzero" in err
    code, _, err = run(capsys, "seminat-make", files["two_hom"], "--alpha", "1,2,1")
    assert code == 1 and "equation (1,1)" in err

    code, out, _ = run(capsys, "seminat-make", files["non_nil"], "--alpha", "0,0,1")
    assert code == 0 and "all coefficient sums are 1" in out


def test_seminat_check(files, capsys):
    code, out, _ = run(capsys, "seminat-check", files["two_hom"], "--json")
    assert code == 0 and json.loads(out)["constant_sum"] == "1"
    code, out, _ = run(capsys, "seminat-check", files["non_nil"], "--json")
    assert code == 2 and json.loads(out)["constant_sum"] is None
    code, out, _ = run(capsys, "seminat-check", files["two_hom"], "--matrix=-1,0,0;0,1,0;0,0,-1", "--json")
    rec = json.loads(out)
    assert code == 0 and rec["basis_semi_natural"] and rec["row_sums_solve_system"] and rec["agree"]
    code, out, _ = run(capsys, "seminat-check", files["two_hom"], "--matrix", "1,1,0;0,1,0;0,0,1")
    assert code == 2 and "agreement: yes" in out


def test_change_basis(files, capsys):
    code, out, _ = run(capsys, "change-basis", files["two_hom"], "--matrix=[[\"-1\",0,0],[0,1,0],[0,0,\"-1\"]]", "--json")
    new = load_algebra(json.loads(out))
    assert code == 0 and new.gamma[0][1][0] == 1
    code, _, err = run(capsys, "change-basis", files["two_hom"], "--matrix", "1,1;1,1")
    assert code == 1
    code, _, err = run(capsys, "change-basis", files["two_hom"], "--matrix", "1,1,0;1,1,0;0,0,1")
    assert code == 1 and "singular" in err


def test_census(files, capsys):
    code, out, _ = run(capsys, "census", files["two_hom"], "--field", "3", "--json")
    rec = json.loads(out)
    assert code == 0
    assert (rec["num_weight_homs"], rec["num_seminat_bases"], rec["num_classes"]) == (2, 864, 2)
    assert set(rec) == {"dim", "prime", "num_weight_homs", "num_seminat_bases", "rs_group_order", "num_classes", "class_sizes"}
    code, out, _ = run(capsys, "census", files["const2"], "--json")
    rec = json.loads(out)
    assert (rec["num_weight_homs"], rec["num_seminat_bases"], rec["num_classes"]) == (1, 2, 1)
    code, _, err = run(capsys, "census", files["two_hom"])
    assert code == 1 and "census requires a finite field" in err
    code, _, err = run(capsys, "census", files["two_hom"], "--field", "3", "--max-cells", "100")
    assert code == 1 and "3^9 = 19683" in err


def test_caps_validated(files, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["solve", files["two_hom"], "--max-scan", str(10**10)])
    assert exc.value.code == 1


def test_random_command(capsys):
    code, out, _ = run(capsys, "random", "--dim", "2", "--field", "5", "--seed", "3", "--baric")
    a = load_algebra(json.loads(out))
    assert code == 0 and a.field == GF(5) and is_semi_natural(a)
    _, out2, _ = run(capsys, "random", "--dim", "2", "--field", "5", "--seed", "3", "--baric")
    assert out == out2


def test_parse_errors(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"field": "Q", "dim": 2, "gamma": [[1, 1, 1, "1"], [1, 1, 1, "1"]]}))
    code, _, err = run(capsys, "solve", str(path))
    assert code == 1 and "gamma[1]" in err and "duplicate" in err
    code, _, err = run(capsys, "solve", str(tmp_path / "missing.json"))
    assert code == 1
    code, _, err = run(capsys, "solve")
    assert code == 1 and "needs an algebra file" in err


def test_parse_matrix_forms():
    assert parse_matrix("1,0;0,1", QQ) == parse_matrix('[["1","0"],["0","1"]]', QQ) == Matrix(QQ, [[1, 0], [0, 1]])
    assert parse_matrix("1/2,0;0,1", QQ)[0, 0] == QQ(1) / 2


def test_verify_paper_command(capsys):
    code, out, _ = run(capsys, "verify-paper", "--json", "--seed", "1")
    rec = json.loads(out)
    assert code == 0 and rec["passed"] and len(rec["checks"]) == 10


def test_verify_paper_seed_determinism():
    quick = {"two_dim_noncommutative", "row_sum_constructor", "row_sum_biconditional"}
    a = [(r.name, r.passed, r.detail) for r in run_checks(seed=5, only=quick)]
    b = [(r.name, r.passed, r.detail) for r in run_checks(seed=5, only=quick)]
    assert a == b and all(ok for _, ok, _ in a)


def test_mutation_is_detected():
    """Corrupting one structure constant makes the two-solution check fail."""
    good = two_hom_algebra()
    g = [[list(s) for s in plane] for plane in good.gamma]
    g[1][0] = [QQ(0), QQ(1), QQ(0)]  # e2 e1 = e2 instead of e3
    mutated = Algebra(3, QQ, g)
    results = {r.name: r for r in run_checks(two_hom=mutated, only={"two_homs", "field_sensitivity"})}
    assert not results["two weight homomorphisms over Q"].passed
