import json
import subprocess
import sys

import pytest

from adiam import cli


def run(argv, capsys):
    code = cli.main(argv)
    return code, capsys.readouterr().out


def test_diam_sl2(capsys):
    code, out = run(["diam", "--rep", "sl2:8", "--sub", "upper:8:3"], capsys)
    obj = json.loads(out)
    assert code == 0 and obj["kind"] == "Exact" and obj["value"] == 2


def test_output_is_deterministic(capsys):
    argv = ["diam", "--rep", "conj:sln:3", "--sub", "random:3:5:7", "--seed", "4"]
    assert run(argv, capsys) == run(argv, capsys)


def test_verify_round_trip_and_tamper(tmp_path, capsys):
    path = tmp_path / "c.json"
    assert cli.main(["diam", "--rep", "conj:sln:4", "--sub", "named:4:counterexample", "--out", str(path)]) == 0
    code, out = run(["verify", str(path)], capsys)
    assert code == 0 and "OK" in out
    obj = json.loads(path.read_text())
    obj["witnesses"] = obj["witnesses"][:2]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    code, out = run(["verify", str(path), str(bad)], capsys)
    assert code == 1 and "FAIL" in out
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert cli.main(["verify", str(junk)], quiet=True) == 1


def test_inconclusive_exit(capsys):
    code, out = run(["diam", "--rep", "conj:sln:3", "--sub", "random:3:5:1", "--max-k", "1"], capsys)
    assert code == 2 and json.loads(out)["type"] == "bounds"


def test_infinite_is_certified(capsys):
    code, out = run(["liediam", "--rep", "sl2:4", "--sub", "upper:4:3", "--lie", "elem"], capsys)
    obj = json.loads(out)
    assert code == 0 and obj["lower"]["obstruction"]["kind"] == "ElementaryReach"


def test_lie_variant(tmp_path, capsys):
    path = tmp_path / "l.json"
    assert cli.main(["diam", "--rep", "sl2:3", "--sub", "upper:3:2", "--lie", "mon", "--out", str(path)]) == 0
    assert json.loads(path.read_text())["value"] == 2
    assert cli.main(["verify", str(path)], quiet=True) == 0


@pytest.mark.parametrize("argv", [
    ["diam", "--rep", "sl2:0", "--sub", "upper:0:0"],
    ["diam", "--rep", "sl2:3", "--sub", "upper:4:1"],
    ["diam", "--rep", "conj:sln:3", "--sub", "nonsense"],
    ["waring", "--map", "cubic", "--point", "1,0"],
    ["waring", "--map", "twisted_cubic"],
    ["waring", "--map", "twisted_cubic", "--mode", "float", "--k", "2"],
])
def test_errors_exit_one(argv, capsys):
    assert cli.main(argv) == 1
    assert "error" in capsys.readouterr().err


def test_waring_exact(tmp_path, capsys):
    path = tmp_path / "w.json"
    assert cli.main(["waring", "--map", "twisted_cubic", "--point", "1,0", "--out", str(path)]) == 0
    assert json.loads(path.read_text())["bound"] == 4
    assert cli.main(["verify", str(path)], quiet=True) == 0
    code, out = run(["waring", "--map", "comm:2", "--point", "1,2,0,1,0,1,3,0"], capsys)
    assert code == 0 and json.loads(out)["type"] == "waring_trapped"


def test_waring_float(capsys):
    code, out = run(["waring", "--map", "twisted_cubic", "--mode", "float", "--target", "0,1,0,0", "--k", "3"], capsys)
    obj = json.loads(out)
    assert code == 0 and obj["found"] and obj["residual"] < 1e-9
    code, out = run(["waring", "--map", "twisted_cubic", "--mode", "float", "--target", "0,1,0,0", "--k", "2",
                     "--trials", "10"], capsys)
    assert code == 2 and not json.loads(out)["found"]


def test_enumerate(capsys):
    code, out = run(["enumerate", "--n", "3", "--dim", "8"], capsys)
    obj = json.loads(out)
    assert code == 0 and len(obj["subspaces"]) == 1


def test_reproduce_selector(tmp_path, capsys):
    path = tmp_path / "rows.json"
    code, out = run(["reproduce", "lem:poly_basis", "--out", str(path)], capsys)
    assert code == 0 and out.startswith("lem:poly_basis") and "PASS" in out
    assert json.loads(path.read_text())[0]["passed"]
    assert cli.main(["reproduce", "no-such-row"], quiet=True) == 1


def test_console_script_module():
    proc = subprocess.run([sys.executable, "-m", "adiam.cli", "diam", "--rep", "sl2:2", "--sub", "upper:2:0"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == 1
