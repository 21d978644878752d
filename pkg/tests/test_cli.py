import json
import subprocess
import sys

import pytest

from freeacts.cli import main
from freeacts.monoid import cyclic_group, enumerate_automorphisms


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def c3_file(tmp_path):
    p = tmp_path / "c3.json"
    p.write_text(json.dumps(cyclic_group(3).to_dict()))
    return str(p)


def test_validate_ok(capsys, c3_file):
    code, data = run(capsys, "monoid", "validate", c3_file)
    assert code == 0 and data["valid"]


def test_validate_not_associative(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"table": [[0, 1, 2], [1, 2, 1], [2, 2, 2]]}))
    code, data = run(capsys, "monoid", "validate", str(p))
    assert code == 1
    assert data == {**data, "valid": False, "error": "NotAssociative"}
    assert len(data["witness"]) == 3


def test_aut_and_out(capsys, c3_file):
    assert run(capsys, "monoid", "aut", c3_file)[1]["order"] == 2
    assert run(capsys, "monoid", "out", "S3")[1]["order"] == 1


def test_catalog(capsys):
    code, data = run(capsys, "catalog", "generate", "--order", "3")
    assert code == 0 and data["count"] == 7
    code, rows = run(capsys, "catalog", "classify", "--order", "2", "--max-rank", "2")
    assert code == 0 and all(r["out_matches"] for r in rows)


def test_catalog_too_large(capsys):
    code, _ = run(capsys, "catalog", "generate", "--order", "6")
    assert code == 2


def test_act_homs(capsys):
    code, data = run(capsys, "act", "homs", "--monoid", "C2", "-n", "2", "-m", "1")
    assert code == 0 and data["count"] == 4


def test_act_homs_budget(capsys):
    code, _ = run(capsys, "--max-homset", "10", "act", "homs", "--monoid", "S3", "-n", "2", "-m", "2")
    assert code == 2


def test_functor_twist_and_certify(capsys, tmp_path):
    sigma = enumerate_automorphisms(cyclic_group(3))[1]
    sp = tmp_path / "sigma.json"
    sp.write_text(json.dumps({**sigma.to_dict(), "monoid": cyclic_group(3).to_dict()}))
    code, phi = run(capsys, "functor", "twist", "--sigma", str(sp), "--max-rank", "2")
    assert code == 0 and phi["object_map"] == [1, 2]
    fp = tmp_path / "phi.json"
    fp.write_text(json.dumps(phi))
    code, data = run(capsys, "functor", "certify", "--functor", str(fp))
    assert code == 0 and data["semi_inner"] and not data["inner"]


def test_functor_certify_rejects_non_functor(capsys, tmp_path):
    sigma = enumerate_automorphisms(cyclic_group(3))[1]
    sp = tmp_path / "sigma.json"
    sp.write_text(json.dumps({**sigma.to_dict(), "monoid": cyclic_group(3).to_dict()}))
    _, phi = run(capsys, "functor", "twist", "--sigma", str(sp))
    hm = phi["hom_maps"]["2,2"]
    hm[5], hm[6] = hm[6], hm[5]
    fp = tmp_path / "phi.json"
    fp.write_text(json.dumps(phi))
    code, data = run(capsys, "functor", "certify", "--functor", str(fp))
    assert code == 1 and data["functorial"] is False


def test_functor_enumerate(capsys):
    code, data = run(capsys, "functor", "enumerate", "--monoid", "C2", "--max-rank", "2")
    assert code == 0 and data["count"] == 8


def test_suite_run(capsys):
    code, data = run(capsys, "suite", "run", "--monoid", "C3", "--max-rank", "2")
    assert code == 0
    assert data["automorphism_count"] == 36 and data["outer_order"] == 2 and data["all_semi_inner"]


def test_suite_timeout_exit_code(capsys):
    code, _ = run(capsys, "--timeout-secs", "1e-9", "suite", "run", "--monoid", "C3")
    assert code == 2


def test_unary(capsys):
    code, data = run(capsys, "unary", "rigidity", "-k", "3")
    assert code == 0 and data["count"] == 6
    code, data = run(capsys, "unary", "perfect", "-k", "2")
    assert code == 0 and not data["perfect"] and data["witnesses"] == [[1, 0]]


def test_usage_error(capsys):
    assert main(["nonsense"]) == 2
    capsys.readouterr()


def test_missing_file(capsys):
    assert main(["monoid", "validate", "/nonexistent.json"]) == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "freeacts", "monoid", "aut", "C3"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["order"] == 2
