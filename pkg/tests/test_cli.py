from __future__ import annotations

import json
import shutil

import pytest

from lcnindex.cli import main
from lcnindex.double import data_dir


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_index_values_rows(capsys):
    code, out, _ = run(capsys, "index-values", "--max", "4.8")
    rows = out.strip().splitlines()
    assert code == 0 and len(rows) == 6
    assert rows[-1].startswith("3+sqrt(3) ≈ 4.732050807569")
    code, out, _ = run(capsys, "index-values", "--max", "4", "--format", "tsv")
    assert [r.split("\t")[0] for r in out.strip().splitlines()] == ["1", "2", "3", "(5+sqrt(5))/2", "4"]
    assert "3.618033988750" in out


def test_classify_a7(capsys):
    code, out, _ = run(capsys, "classify", "A7")
    assert code == 0
    assert out.splitlines()[0] == "EXCLUDED: theta 0⊕2 not a local extension of SU(2)_6"


def test_graph_check_builtins(capsys):
    code, out, _ = run(capsys, "graph-check", "D6", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["pendant_ok"] and obj["triple_point_distance"] == 3
    code, out, _ = run(capsys, "graph-check", "Ainf", "--depth", "12", "--format", "json")
    assert json.loads(out)["excluded"]
    code, out, _ = run(capsys, "graph-check", "haagerup:H", "--format", "json")
    assert json.loads(out)["corollary_excluded"]


def test_graph_check_file(tmp_path, capsys):
    path = tmp_path / "g.graph"
    path.write_text("graph P\nvertex a even root\nvertex b odd\nvertex c even\nedge a b\nedge b c\n")
    code, out, _ = run(capsys, "graph-check", str(path), "--format", "tsv")
    assert code == 0 and out.splitlines()[1].startswith("P\tTrue")


def test_braidings_and_double_show(capsys):
    code, out, _ = run(capsys, "braidings", "A5", "--format", "json")
    assert code == 0 and json.loads(out)["count"] == 3
    code, out, _ = run(capsys, "double-show", "A5", "--format", "tsv")
    assert code == 0 and len(out.strip().splitlines()) == 9
    code, out, _ = run(capsys, "double-show", "E6")
    assert code == 0 and "(5,1)_1" in out


def test_json_output_round_trips(capsys):
    for argv in (("classify", "D6"), ("braidings", "D6"), ("index-values",), ("graph-check", "E6")):
        _, out, _ = run(capsys, *argv, "--format", "json")
        again = json.dumps(json.loads(out), indent=1, sort_keys=True, ensure_ascii=False)
        assert again == out.rstrip("\n")


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["table1", "--format", "xml"])
    assert exc.value.code == 2
    code, _, err = run(capsys, "classify", "Q5")
    assert code == 2 and "bad diagram name" in err


def test_missing_data_exit_3(tmp_path, capsys):
    code, _, err = run(capsys, "braidings", "E6", "--data-dir", str(tmp_path))
    assert code == 3 and str(tmp_path / "e6_double.json") in err


def test_data_dir_flag_overrides_environment(tmp_path, monkeypatch, capsys):
    for name in ("e6_double.json", "e8_double.json", "kl_table.json", "haagerup.graphs"):
        shutil.copy(data_dir() / name, tmp_path / name)
    monkeypatch.setenv("LCNINDEX_DATA", str(tmp_path / "absent"))
    code, out, _ = run(capsys, "classify", "E6", "--data-dir", str(tmp_path))
    assert code == 0 and out.startswith("EXCLUDED")
    code, _, _ = run(capsys, "classify", "E6")
    assert code == 3


def test_table1_tsv(capsys):
    code, out, _ = run(capsys, "table1", "--format", "tsv")
    assert code == 0
    header, row = out.strip().splitlines()
    assert header.split("\t") == ["A2", "A5", "otherA", "D4", "D6", "otherD", "E6", "E8"]
    assert row.split("\t") == ["1", "3", "2", "3", "4", "2", "0", "0"]
