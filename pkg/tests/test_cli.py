import json

import pytest

from linfty import structfile
from linfty.cli import main
from linfty.coderivation import LInfinityStructure
from linfty.families import d_infty
from linfty.graded import SPACE_1_2


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def test_self_bracket(capsys):
    status, out, _ = run(capsys, "bracket", "psi[1,0,0]_3 + psi[0,0,1]_1")
    assert status == 0 and out.strip() == "2*phi[1,0,0]_1 + 2*phi[0,0,1]_3"


def test_bracket_with_zero(capsys):
    assert run(capsys, "bracket", "psi[1,0,0]_3", "0")[1].strip() == "0"


def test_bracket_errors(capsys):
    assert run(capsys, "bracket", "psi[1,0")[0] == 2
    assert run(capsys, "bracket", "psi[1,0,0]_3 + psi[0,0,2]_1")[0] == 3


def test_check(capsys):
    assert run(capsys, "check", "d_sharp", "--m", "1")[0] == 0
    status, _, err = run(capsys, "check", "psi[1,0,0]_3 + psi[0,0,1]_1")
    assert status == 4
    status, out, _ = run(capsys, "check", "d_lambda_e", "--m", "0", "--n", "1", "--json")
    assert status == 0 and json.loads(out)["square_zero"]


def test_cohomology_from_file(capsys, tmp_path):
    path = tmp_path / "d.json"
    structfile.save(LInfinityStructure.from_cochain(d_infty(1)), path)
    status, out, _ = run(capsys, "cohomology", str(path), "--max-degree", "7", "--json")
    data = json.loads(out)
    assert status == 0 and data["kind"] == "graded"
    assert [d["h"] for d in data["degrees"]] == [[3, 1], [4, 3]] + [[1, 1]] * 5


def test_cohomology_of_d_sharp_table(capsys):
    status, out, _ = run(capsys, "cohomology", "d_sharp", "--m", "1")
    rows = out.splitlines()[1:]
    assert status == 0 and all(r.split()[3] == "0|0" for r in rows[2:])


def test_cohomology_of_extension_is_filtered(capsys):
    status, out, _ = run(capsys, "cohomology", "d_infty_ext", "--m", "0", "--n", "1", "--a", "1",
                         "--max-degree", "4", "--json")
    assert status == 0 and json.loads(out)["kind"] == "filtered"


def test_zero_structure_rejected(capsys):
    assert run(capsys, "cohomology", "0")[0] == 4


def test_classify(capsys):
    status, out, _ = run(capsys, "classify", "psi[0,1,2]_3 + psi[0,0,3]_1 - 3*psi[1,1,1]_1", "--json")
    data = json.loads(out)
    assert status == 0 and data["family"] == "d_sharp" and data["degree"] == 3
    status, out, _ = run(capsys, "classify", "7*psi[1,1,1]_1", "--json")
    assert json.loads(out)["family"] == "d_infty"
    status, out, _ = run(capsys, "classify", "psi[0,0,1]_1")
    assert out.startswith("d_star in degree 1")


def test_classify_rejects_several_components(capsys):
    assert run(capsys, "classify", "d_lambda_e", "--m", "0", "--n", "1")[0] == 5


def test_d_lambda_needs_lambda(capsys):
    assert run(capsys, "check", "d_lambda", "--m", "1")[0] == 2
    assert run(capsys, "check", "d_lambda", "--m", "1", "--lambda", "-3/2")[0] == 0


def test_extend(capsys):
    status, out, _ = run(capsys, "extend", "d_infty_ext", "--m", "0", "--n", "1", "--a", "1", "--json")
    data = json.loads(out)
    assert status == 0 and data["replay_matches"]
    assert data["irremovable_degrees"] == [4]


def test_reproduce(capsys):
    status, out, _ = run(capsys, "reproduce", "sec7-dims")
    assert status == 0 and "0 mismatch" in out
    status, out, _ = run(capsys, "reproduce", "sec8-h1", "--json")
    assert any(c["status"] == "paper-typo-candidate" for c in json.loads(out)[0]["cells"])


def test_reproduce_unknown(capsys):
    status, _, err = run(capsys, "reproduce", "sec42")
    assert status == 2 and "unknown table" in err


def test_reproduce_mismatch_status(capsys, tmp_path):
    from linfty import tables

    table = tables.load_table("sec3-dims")
    table["cells"][0]["h"] = "7|7"
    (tmp_path / "sec3-dims.json").write_text(json.dumps(table))
    assert run(capsys, "reproduce", "sec3-dims", "--golden-dir", str(tmp_path))[0] == 1


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "check", "missing.json")[0] == 2
