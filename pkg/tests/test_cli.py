import io as _io
import json

import numpy as np
import pytest

from fixlattice import io
from fixlattice.classify import reflection
from fixlattice.cli import main
from fixlattice.groups import MatrixGroup
from fixlattice.roots import root_lattice


def run(*args, env=None, monkeypatch=None):
    out, err = _io.StringIO(), _io.StringIO()
    code = main(list(args), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    for name in ("E8", "A2", "E6", "A1", "E7"):
        io.save(root_lattice(name), tmp_path / f"{name.lower()}.json")
    (tmp_path / "bad.json").write_text('{"rank": 2,\n "gram": [[2, 1], [1, "x"]]}\n')
    e8 = root_lattice("E8")
    seeds = tmp_path / "seeds"
    seeds.mkdir()
    io.save(MatrixGroup(e8, [reflection(e8, np.eye(8, dtype=np.int64)[i]) for i in (0, 1)]),
            seeds / "a1a1.json")
    return tmp_path


def test_lattice_info(files):
    code, out, _ = run("lattice", "info", str(files / "e8.json"))
    assert code == 0
    assert "det: 1" in out and "minimum: 2" in out and "alpha: 8" in out and "milgram: 0" in out
    code, out, _ = run("lattice", "info", str(files / "a2.json"), "--format", "json")
    doc = json.loads(out)
    assert doc["format"] == "fixlattice/1"
    assert (doc["det"], doc["minimum"], doc["invariant_factors"], doc["milgram"]) == (3, 2, [3], 2)


def test_parse_error_exit(files):
    code, out, err = run("lattice", "info", str(files / "bad.json"))
    assert code == 2 and "ParseError" in err and "bad.json:2:" in err


def test_usage_errors(files):
    assert run("lattice")[0] == 2
    assert run("nonsense")[0] == 2
    assert run("lattice", "info", str(files / "missing.json"))[0] == 2
    code, _, err = run("element", "find", "--order", "3", "--rank", "6", "--format", "json")
    assert code == 2 and "--seed" in err


def test_budget_exit(files, monkeypatch):
    monkeypatch.setenv("FIXLAT_SEARCH_BUDGET", "3")
    code, _, err = run("element", "find", "--order", "7", "--rank", "24", "--seed", "1")
    assert code == 3 and "BudgetExceeded" in err
    monkeypatch.setenv("FIXLAT_SEARCH_BUDGET", "-1")
    assert run("element", "find", "--order", "7", "--rank", "24")[0] == 2


def test_shortvec_aut_isom(files):
    code, out, _ = run("lattice", "shortvec", str(files / "a2.json"), "--bound", "2", "--vectors")
    assert code == 0 and "count: 6" in out
    code, out, _ = run("lattice", "aut", str(files / "a2.json"), "--format", "json")
    assert json.loads(out)["order"] == 12
    code, out, _ = run("lattice", "isom", str(files / "e6.json"), str(files / "e6.json"))
    assert code == 0 and "isometric: True" in out
    code, out, _ = run("lattice", "isom", str(files / "e6.json"), str(files / "e7.json"))
    assert "isometric: False" in out


def test_fqs_commands(files, tmp_path):
    code, out, _ = run("fqs", "milgram", str(files / "a2.json"))
    assert "milgram: 2" in out
    code, out, _ = run("fqs", "classes", str(files / "e6.json"), str(files / "a2.json"))
    assert "classes: 1" in out
    code, out, _ = run("fqs", "glue", str(files / "a1.json"), str(files / "e7.json"),
                       "--out-dir", str(tmp_path / "glued"))
    assert code == 0
    assert io.load(tmp_path / "glued" / "overlattice_0.json").det == 1
    code, _, err = run("fqs", "classes", str(files / "a1.json"), str(files / "a1.json"))
    assert code == 2 and "NoAntiIsometry" in err


def test_group_commands(files, tmp_path):
    g = str(files / "seeds" / "a1a1.json")
    assert "order: 4" in run("group", "order", g)[1]
    code, out, _ = run("group", "fixlat", g, "--out-dir", str(tmp_path / "fix"))
    assert "invariant_rank: 6" in out
    S = tmp_path / "fix" / "invariant.json"
    code, out, _ = run("group", "stab", str(S))
    assert code == 0 and "order: 4" in out
    code, out, _ = run("group", "o2", g, "--seed", "0")
    assert "o2_order: 1" in out


def test_classify_e8_and_determinism(files, tmp_path):
    code, out, _ = run("classify", "e8", "--out-dir", str(tmp_path / "rec"))
    assert code == 0 and "41 orbits" in out
    assert len(list((tmp_path / "rec").glob("record_*.json"))) == 41
    a = run("classify", "e8", "--remove-root", "7", "--format", "json", "--threads", "1")[1]
    b = run("classify", "e8", "--remove-root", "7", "--format", "json", "--threads", "4")[1]
    assert a == b
    assert json.loads(a)["orbits"] == 29


def test_classify_run(files):
    code, out, _ = run("classify", "run", "--seeds", str(files / "seeds"))
    assert code == 0 and "a1a1.json" in out


def test_leech_and_element(tmp_path):
    code, out, _ = run("leech", "verify")
    assert code == 0 and out.count("[PASS]") == 8
    code, out, _ = run("element", "find", "--order", "3", "--rank", "6", "--seed", "0",
                       "--out-dir", str(tmp_path / "el"))
    assert code == 0 and "fixed_rank: 6" in out and "2^27 3^36" in out
    code, out, _ = run("slattice", "type", str(tmp_path / "el" / "fixed.json"))
    assert code == 0 and "a: 27" in out and "b: 36" in out
    code, out, _ = run("slattice", "check", str(tmp_path / "el" / "fixed.json"), "--format", "json")
    assert json.loads(out)["checks"]["s_lattice"] is True
    code, out, _ = run("leech", "build", "--format", "json")
    assert json.loads(out)["rank"] == 24
