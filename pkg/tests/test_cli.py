import json
import subprocess
import sys
from pathlib import Path

import pytest

from binlrc.cli import main

DATA = Path(__file__).resolve().parents[1] / "data"
G = str(DATA / "example1.txt")
SETS = str(DATA / "example1_repair_sets.txt")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_example1(capsys):
    code, out, _ = run(capsys, "analyze", G)
    data = json.loads(out)
    assert code == 0
    assert (data["n"], data["k"], data["d"], data["d_via_flats"]) == (10, 4, 4, 4)
    assert data["cyclic_flats"] == 17 and data["r_prime"] == 2 and len(data["atoms"]) == 10


def test_analyze_identity_fails_validation(capsys, tmp_path):
    path = tmp_path / "id.txt"
    path.write_text("1 0 0\n0 1 0\n0 0 1\n")
    code, out, _ = run(capsys, "analyze", str(path))
    assert code == 4 and json.loads(out)["validation"]["ok"] is False


@pytest.mark.parametrize("content", ["", "1 0 2\n", "10\n1\n"])
def test_analyze_parse_errors(capsys, tmp_path, content):
    path = tmp_path / "bad.txt"
    path.write_text(content)
    code, _, err = run(capsys, "analyze", str(path))
    assert code == 2 and "parse error" in err


def test_missing_file_and_unknown_flag(capsys):
    assert run(capsys, "analyze", "/nonexistent/g.txt")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["bounds", "--n", "10", "--bogus"])
    assert info.value.code == 2


def test_lattice_dot_deterministic(capsys, tmp_path):
    code, out, _ = run(capsys, "lattice", G)
    assert code == 0 and out.startswith("digraph")
    target = tmp_path / "z.dot"
    run(capsys, "lattice", G, "--dot", str(target))
    assert target.read_text() == out


def test_locality(capsys):
    code, out, _ = run(capsys, "locality", G, SETS)
    data = json.loads(out)
    assert code == 0 and (data["r"], data["delta"], data["ell"]) == (4, 3, 3)


def test_locality_violation_exit(capsys):
    code, _, err = run(capsys, "locality", G, SETS, "--r", "3", "--delta", "3")
    assert code == 4 and "validation failed" in err


def test_chain(capsys):
    code, out, _ = run(capsys, "chain", G, SETS)
    data = json.loads(out)
    assert code == 0 and data["chain"]["m"] == 2 and data["chain"]["alpha"] == "1/2"
    assert data["lemmas"]["ok"] is True


def test_chain_random_prints_default_seed(capsys):
    code, _, err = run(capsys, "chain", G, SETS, "--picker", "random")
    assert code == 0 and "seed 42" in err


@pytest.mark.parametrize(
    "erase, tier",
    [("1", "AtomRepair"), ("1,2", "LocalSetRepair"), ("1,2,5", "GlobalRepair")],
)
def test_repair(capsys, erase, tier):
    code, out, _ = run(capsys, "repair", G, SETS, "--erase", erase, "--codeword-seed", "1")
    assert code == 0
    assert out.splitlines()[0] == f"tier: {tier}"
    assert "1000/1000" in out


def test_repair_global_equations(capsys):
    _, out, _ = run(capsys, "repair", G, SETS, "--erase", "1,2,5", "--codeword-seed", "1", "--json")
    eqs = [e["text"] for e in json.loads(out)["plan"]["equations"]]
    assert eqs == ["c1 = c4 ⊕ c7", "c2 = c3 ⊕ c6", "c5 = c3 ⊕ c4 ⊕ c6 ⊕ c7"]


def test_repair_unrepairable(capsys):
    code, _, _ = run(capsys, "repair", G, SETS, "--erase", "1,2,3,4,5,6,7", "--codeword-seed", "1")
    assert code == 6


def test_bounds_achieved(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "10", "--k", "4", "--r", "4", "--delta", "3", "--d", "4")
    assert code == 0
    line = next(l for l in out.splitlines() if l.startswith("corollary"))
    assert line.split()[1] == "4" and "ACHIEVED" in line


def test_bounds_domain_error(capsys):
    code, _, _ = run(capsys, "bounds", "--n", "3", "--k", "4", "--r", "2", "--delta", "3")
    assert code == 5


def test_bounds_json_alpha(capsys):
    _, out, _ = run(capsys, "bounds", "--n", "10", "--k", "4", "--r", "4", "--delta", "3",
                    "--ell", "3", "--alpha", "1/2", "--json")
    values = {b["name"]: b["value"] for b in json.loads(out)["bounds"]}
    assert values["alpha"] == 5


def test_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "--n", "50", "--delta", "3")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "r,k,old_bound,new_bound" and len(lines) == 1 + 8 * 48


def test_cm(capsys):
    code, out, _ = run(capsys, "cm", "--n", "10", "--d", "4", "--r", "4", "--delta", "3", "--ell", "3", "--k", "4")
    data = json.loads(out)
    assert code == 0 and data["k_max"] == 5
    cmp = data["comparison"]
    assert (cmp["lhs"], cmp["rhs_new"], cmp["rhs_cm"]) == (10, 10, 11)


def test_verify_structure(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "structure", "--n", "6", "--k", "3")
    data = json.loads(out)
    assert code == 0 and data["failures"] == [] and data["instances"] > 0


def test_verify_castle_needs_params(capsys):
    assert run(capsys, "verify", "--suite", "castle", "--n", "6", "--k", "3")[0] == 2


def test_search_with_candidate(capsys):
    code, out, _ = run(capsys, "search", "--n", "10", "--k", "4", "--d", "4", "--r", "4", "--delta", "3",
                       "--candidate", G, "--keep", "1", "--seed", "0")
    best = json.loads(out)["best_codes"]
    assert code == 0 and best[0]["achieved"] and best[0]["matrix"][0] == "1000101111"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "binlrc", "bounds", "--n", "10", "--k", "4", "--r", "4", "--delta", "3"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and "kamath" in proc.stdout
