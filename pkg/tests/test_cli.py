import json

import numpy as np
import pytest

from qrelkit import serialize
from qrelkit.cli import main

CHANNEL = {"kind": "channel", "kernel": [[1, 0], [0.5, 0.5]]}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(serialize.dumps(doc))
    return str(p)


@pytest.fixture
def channel_path(tmp_path):
    return write(tmp_path, "channel.json", CHANNEL)


@pytest.fixture
def relation_path(tmp_path, channel_path, capsys):
    code, out, _ = run(capsys, "classical", "import", channel_path)
    assert code == 0
    p = tmp_path / "relation.json"
    p.write_text(out)
    return str(p)


# -- happy paths ---------------------------------------------------------------------


def test_classical_import_support(capsys, channel_path):
    code, out, err = run(capsys, "classical", "import", channel_path)
    assert code == 0 and err == ""
    doc = json.loads(out)
    assert doc["kind"] == "relation"
    assert doc["pairs"] == [[0, 0], [0, 1], [1, 1]]
    assert doc["dim"] == 3


def test_classical_import_pairs_document(capsys, tmp_path):
    p = write(tmp_path, "pairs.json", {
        "kind": "classical_relation",
        "pairs": [[0, 0], [1, 1]],
        "source_points": 2,
        "target_points": 2,
    })
    code, out, _ = run(capsys, "classical", "import", p)
    assert code == 0
    assert json.loads(out)["pairs"] == [[0, 0], [1, 1]]


def test_relation_check_flags(capsys, relation_path):
    code, out, _ = run(capsys, "relation", "check", relation_path)
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "report" and doc["ok"]
    assert doc["flags"]["cosurjective"] is True
    assert doc["flags"]["function"] is False


def test_relation_adjoint_and_compose(capsys, tmp_path, relation_path):
    code, adj_text, _ = run(capsys, "relation", "adjoint", relation_path)
    assert code == 0
    adj_path = write(tmp_path, "adj.json", json.loads(adj_text))
    code, out, _ = run(capsys, "relation", "compose", adj_path, relation_path)
    assert code == 0
    assert json.loads(out)["dim"] == 4


def test_classical_export_round_trip(capsys, relation_path):
    code, out, _ = run(capsys, "classical", "export", relation_path)
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "classical_relation"
    assert doc["pairs"] == [[0, 0], [0, 1], [1, 1]]


def test_cp_to_relation_and_confusability(capsys, tmp_path):
    cp_doc = {
        "kind": "cpmap",
        "source": {"blocks": [1, 1]},
        "target": {"blocks": [1, 1]},
        "action": [[1, 0], [0.5, 0.5]],
    }
    p = write(tmp_path, "cp.json", cp_doc)
    code, out, _ = run(capsys, "cp", "to-relation", p)
    assert code == 0 and json.loads(out)["dim"] == 3
    code, out, _ = run(capsys, "cp", "confusability", p)
    assert code == 0 and json.loads(out)["dim"] == 4


def test_hom_round_trip_via_cli(capsys, tmp_path):
    # embedding M2 -> M2 + M2 as an action matrix on algebra coordinates
    action = np.vstack([np.eye(4), np.eye(4)])
    hom_doc = {
        "kind": "hom",
        "source": {"blocks": [2]},
        "target": {"blocks": [2, 2]},
        "action": serialize.matrix_to_doc(action),
    }
    p = write(tmp_path, "hom.json", hom_doc)
    code, out, _ = run(capsys, "hom", "to-relation", p)
    assert code == 0
    rel = json.loads(out)
    rel_path = write(tmp_path, "homrel.json", rel)
    code, out, _ = run(capsys, "hom", "from-relation", rel_path)
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "hom"
    assert doc["certificate"]["residual"] < 1e-8
    back = serialize.matrix_from_doc(doc["action"])
    assert np.abs(back - action).max() < 1e-8


def test_adjacency_of_relation_and_classify(capsys, tmp_path, relation_path):
    code, out, _ = run(capsys, "adjacency", "of-relation", relation_path)
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "adjacency"
    assert doc["flags"]["cp"] and doc["flags"]["schur_idempotent"]
    adj_path = write(tmp_path, "adjacency.json", doc)
    code, out, _ = run(capsys, "adjacency", "classify", adj_path)
    assert code == 0
    report = json.loads(out)
    assert report["flags"]["psi_projection"]


def test_construct_verdon_via_cli(capsys, tmp_path):
    pairs = []
    for i in range(4):
        pairs += [[i, i], [i, (i + 1) % 4], [(i + 1) % 4, i]]
    pairs = sorted({(y, x) for y, x in pairs})
    import_doc = {
        "kind": "classical_relation",
        "pairs": [list(p) for p in pairs],
        "source_points": 4,
        "target_points": 4,
    }
    p = write(tmp_path, "cycle.json", import_doc)
    code, out, _ = run(capsys, "classical", "import", p)
    assert code == 0
    rel_path = write(tmp_path, "cycle_rel.json", json.loads(out))
    code, out, _ = run(capsys, "construct", "verdon", rel_path)
    assert code == 0
    doc = json.loads(out)
    assert doc["flags"]["unital"] and doc["certificate"]["residual"] < 1e-7
    code, out, _ = run(capsys, "construct", "qg-from-cp", rel_path)
    assert code == 0
    assert json.loads(out)["certificate"]["residual"] < 1e-7


def test_verify_report_and_determinism(capsys):
    code, out1, _ = run(capsys, "verify", "gns", "--trials", "5", "--seed", "42")
    assert code == 0
    code, out2, _ = run(capsys, "verify", "--suite", "gns", "--trials", "5",
                        "--seed", "42")
    assert code == 0
    assert out1 == out2
    report = json.loads(out1)
    assert report["passed"] and report["trials"] == 5


def test_verify_all_zero_trials(capsys):
    code, out, _ = run(capsys, "verify", "all", "--trials", "0")
    assert code == 0
    report = json.loads(out)
    assert report["passed"] and len(report["suites"]) == 11


def test_stdin_and_out_flag(capsys, tmp_path, relation_path, monkeypatch):
    import io, sys
    text = open(relation_path).read()
    monkeypatch.setattr(sys, "stdin", io.StringIO(text))
    out_file = tmp_path / "copy.json"
    code, out, _ = run(capsys, "relation", "check", "-", "--out", str(out_file))
    assert code == 0
    assert out_file.read_text() == out


# -- failure paths ---------------------------------------------------------------------


def test_malformed_document_exits_1(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"kind": }')
    code, out, err = run(capsys, "relation", "check", str(p))
    assert code == 1 and out == ""
    assert "byte offset" in err


def test_unknown_suite_exits_1(capsys):
    code, _, err = run(capsys, "verify", "bogus")
    assert code == 1 and "unknown suite" in err


def test_unknown_command_exits_1(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == 1 and "usage" in err.lower()


def test_wrong_kind_exits_1(capsys, channel_path):
    code, _, err = run(capsys, "relation", "check", channel_path)
    assert code == 1 and "kind" in err


def test_suite_failure_exits_2(capsys):
    code, out, _ = run(capsys, "verify", "gns", "--trials", "2",
                       "--tol", "1e-300")
    assert code == 2
    assert not json.loads(out)["passed"]


def test_max_block_guard(capsys, relation_path):
    code, _, err = run(capsys, "relation", "check", relation_path,
                       "--max-block", "0")
    assert code == 1 and "max-block" in err


def test_env_tol_override(capsys, relation_path, monkeypatch):
    monkeypatch.setenv("QRELKIT_TOL", "1e-6")
    code, out, _ = run(capsys, "relation", "check", relation_path)
    assert code == 0
    assert json.loads(out)["tol"] == 1e-6


def test_missing_file_exits_1(capsys):
    code, _, err = run(capsys, "relation", "check", "/no/such/file.json")
    assert code == 1 and "cannot read" in err
