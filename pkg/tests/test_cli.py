import subprocess
import sys

import pytest

from lndkernel.cli import main, parse_expression
from lndkernel.polyring import parse


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_derive_apply(capsys):
    assert run(capsys, "derive", "apply", "s") == (0, "x^3\n", "")


def test_derive_variants(capsys):
    assert run(capsys, "derive", "power", "u", "3")[1] == "x^3\n"
    assert run(capsys, "derive", "index", "u")[1] == "3\n"
    assert run(capsys, "derive", "invariant", "delta1")[1] == "true\n"
    assert run(capsys, "derive", "apply", "v", "--delta")[1] == "0\n"


def test_image_member_of_x2_g(capsys):
    code, out, _ = run(capsys, "image", "member", "x^2*g")
    assert code == 0
    assert out.strip() == "NOT-MEMBER q~ = s*y1^2*y4"


def test_image_member_positive(capsys):
    code, out, _ = run(capsys, "image", "member", "x^2*gamma0")
    assert code == 0 and out.startswith("MEMBER preimage = ")
    assert parse(out.split("=", 1)[1]) == parse("3*x^5*u - x^2*s*t")


def test_named_symbols():
    assert parse_expression("beta2") == parse("x*v^2 - 2*s*v + 2*x^2*t")
    assert parse_expression("gamma0^3 + delta0^2 - x^6*g").is_zero()


def test_exp(capsys):
    assert run(capsys, "exp", "t")[1] == "1/2*x^3*alpha^2 + s*alpha + t\n"
    assert run(capsys, "exp", "v", "--alpha", "2")[1] == "v + 2*x^2\n"
    assert run(capsys, "exp", "v", "--alpha", "zz")[0] == 2


def test_slice_verbs(capsys):
    assert run(capsys, "slice", "det", "1")[1] == "2\n"
    assert run(capsys, "slice", "count", "3")[1] == "3\n"
    assert parse(run(capsys, "slice", "kernel", "6", "2")[1]) == parse("2*x^3*t - s^2")
    assert "dim_piN=1" in run(capsys, "slice", "truncation", "3")[1]
    code, out, _ = run(capsys, "slice", "map", "6", "2")
    assert code == 0 and out.splitlines()[-1] == "2 1"  # domain order s^2, x^3*t


def test_groebner_verbs(capsys, tmp_path):
    f = tmp_path / "i.txt"
    f.write_text("x^2 - y\ny^3\n")
    code, out, _ = run(capsys, "groebner", "basis", str(f), "--vars", "x,y")
    assert code == 0 and set(out.split()) == {"x^6", "y", "-", "x^2"}
    assert run(capsys, "groebner", "member", str(f), "--vars", "x,y", "--expr", "x^6")[1].startswith("MEMBER")
    assert run(capsys, "groebner", "member", str(f), "--vars", "x,y", "--expr", "x")[1].startswith("NOT-MEMBER")
    assert run(capsys, "groebner", "radical", str(f), "--vars", "x,y", "--expr", "x")[1] == "true\n"
    assert "x - y1" in run(capsys, "groebner", "elimination")[1]


def test_families_build_and_verify(capsys, tmp_path):
    path = tmp_path / "families.txt"
    assert run(capsys, "families", "build", "--upto", "6", "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "families", "verify", str(path))
    assert code == 0 and "VERDICT families PASS" in out


def test_families_verify_rejects_tampering(capsys, tmp_path):
    path = tmp_path / "families.txt"
    run(capsys, "families", "build", "--upto", "3", "--out", str(path))
    text = path.read_text().replace("beta 1 x*v - s", "beta 1 x*v + s")
    path.write_text(text)
    code, out, _ = run(capsys, "families", "verify", str(path))
    assert code == 1 and out.startswith("FAIL")


def test_families_show(capsys):
    code, out, _ = run(capsys, "families", "show", "beta:2")
    assert code == 0 and parse(out) == parse("x*v^2 - 2*s*v + 2*x^2*t")
    assert run(capsys, "families", "show", "omega:2")[0] == 2


def test_sagbi_subduction(capsys):
    code, out, _ = run(capsys, "sagbi", "--upto", "2", "--expr", "gamma0^3 + delta0^2")
    assert code == 0 and out.startswith("residue = 0")


def test_sagbi_and_fgideal_reports(capsys, tmp_path):
    code, out, _ = run(capsys, "sagbi", "--upto", "2")
    assert code == 0 and out.strip().splitlines()[-1].startswith("VERDICT sagbi PASS")
    report = tmp_path / "fg.txt"
    code, out, _ = run(capsys, "fgideal", "--upto", "2", "--out", str(report))
    assert code == 0 and "VERDICT fg-ideal-N2 PASS" in report.read_text()


@pytest.mark.parametrize(
    "argv",
    [
        ["poly", "x^^2"],
        ["poly", "w"],
        ["bogus"],
        [],
        ["derive", "power", "u"],
        ["families", "verify", "/nonexistent/archive.txt"],
        ["groebner", "member", "--expr", "x"],
        ["fgideal", "--upto", "-1"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    assert main(argv) == 2


def test_order_flag(capsys):
    assert run(capsys, "poly", "x + v")[1] == "v + x\n"
    assert run(capsys, "poly", "x + v", "--order", "s-lex")[1] == "x + v\n"


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "lndkernel", "derive", "apply", "s"],
        capture_output=True, text=True, check=False,
    )
    assert out.returncode == 0 and out.stdout == "x^3\n"


def test_full_report_is_deterministic():
    from lndkernel.cli import verify_all

    first = verify_all(2)
    assert first.ok
    assert first.render() == verify_all(2).render()
