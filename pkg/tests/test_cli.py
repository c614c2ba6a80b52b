"""CLI surface: subcommand output, piping, exit codes, determinism."""

import filecmp
import io
import json

import numpy as np
import pytest

from pwlregions.cli import main
from pwlregions.network import load_network, save_network
from pwlregions.constructions import build_abs_net


@pytest.fixture()
def abs_path(tmp_path):
    p = tmp_path / "abs.json"
    save_network(build_abs_net().network, str(p))
    return str(p)


def test_bounds_text(capsys):
    assert main(["bounds", "--n0", "2", "--widths", "4,4,4"]) == 0
    out = capsys.readouterr().out
    assert "deep_lower" in out and "176" in out


def test_bounds_json(capsys):
    assert main(["bounds", "--n0", "2", "--widths", "3", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["shallow_max"] == 7
    assert main(["bounds", "--n0", "1", "--widths", "1", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["upper_2n"] == 2 and doc["deep_lower"] == 2


def test_bounds_maxout(capsys):
    assert main(["bounds", "--n0", "2", "--widths", "2,2", "--maxout-rank", "3",
                 "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["maxout_lower"] == 27


def test_construct_enumerate_pipe(tmp_path, capsys, monkeypatch):
    assert main(["construct", "--kind", "shi", "--n", "3"]) == 0
    net_json = capsys.readouterr().out
    monkeypatch.setattr("sys.stdin", io.StringIO(net_json))
    assert main(["enumerate", "-", "--expect", "16", "--format", "text"]) == 0
    assert capsys.readouterr().out == "regions: 16\n"


def test_enumerate_expectation_failure(abs_path, capsys):
    assert main(["enumerate", abs_path, "--expect", "5", "--format", "text"]) == 1
    err = capsys.readouterr().err
    assert "expected 5" in err and "counted 4" in err


def test_enumerate_report_schema(abs_path, capsys):
    assert main(["enumerate", abs_path, "--box", "1.0"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["count"] == 4
    assert doc["box"] == 1.0
    region = doc["regions"][0]
    assert set(region) == {"pattern", "witness", "affine", "constraints"}


def test_enumerate_exit_codes(abs_path, tmp_path, capsys):
    assert main(["enumerate", abs_path, "--cap", "2"]) == 3
    bad = tmp_path / "bad.json"
    bad.write_text('{"input_dim": 2}')
    assert main(["enumerate", str(bad)]) == 2
    assert main(["enumerate", str(tmp_path / "missing.json")]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["enumerate"])
    assert exc.value.code == 2


def test_construct_witness_record(tmp_path, capsys):
    out = tmp_path / "net.json"
    wit = tmp_path / "wit.json"
    assert main(["construct", "--kind", "folding", "--n0", "2", "--widths", "4,4",
                 "-o", str(out), "--witness-out", str(wit)]) == 0
    doc = json.loads(wit.read_text())
    assert doc["predicted_count"] == 44
    net = load_network(str(out))
    assert net.widths == (4, 4)


def test_construct_certificate(tmp_path):
    wit = tmp_path / "wit.json"
    assert main(["construct", "--kind", "rank2-rectifier", "--n0", "2", "--L", "2",
                 "-o", str(tmp_path / "sim.json"), "--witness-out", str(wit)]) == 0
    doc = json.loads(wit.read_text())
    assert doc["certificate"] <= 1e-9


def test_construct_invalid_params(capsys):
    assert main(["construct", "--kind", "cones", "--n0", "3", "--k", "3"]) == 1
    assert "construction failed" in capsys.readouterr().err


def test_oracle_subcommand(tmp_path, capsys):
    net = tmp_path / "saw.json"
    assert main(["construct", "--kind", "sawtooth", "--p", "3", "-o", str(net)]) == 0
    assert main(["oracle", str(net), "--box=-1,4", "--step", "1e-3"]) == 0
    assert capsys.readouterr().out == "4\n"


def test_regions2d_exports(abs_path, tmp_path, capsys):
    csv = tmp_path / "r.csv"
    svg = tmp_path / "r.svg"
    assert main(["regions2d", abs_path, "--box", "1.5",
                 "--csv", str(csv), "--svg", str(svg)]) == 0
    assert capsys.readouterr().out == "regions: 4\n"
    lines = csv.read_text().splitlines()
    assert lines[0] == "region_id,vertex_index,x,y"
    assert len(lines) > 12  # 4 quadrant squares, >= 3 vertices each
    body = svg.read_text()
    assert body.startswith("<svg") and body.count("<polygon") == 4


def test_linmap_subcommand(abs_path, tmp_path, capsys):
    pts = tmp_path / "pts.csv"
    np.savetxt(pts, [[0.5, 0.5], [-0.5, 0.5], [-0.5, -0.5]], delimiter=",")
    assert main(["linmap", abs_path, "--layer", "0", "--unit", "0",
                 "--points", str(pts)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc) == 1  # unit 0 active only in the right half-plane
    assert doc[0]["map"]["matrix"] == [[1.0, 0.0]]
    assert main(["linmap", abs_path, "--layer", "0", "--unit", "0",
                 "--points", str(pts), "--readout", "1,1,0,0;0,0,1,1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc) == 2  # |x| has two visible pieces at these samples


def test_identify_subcommand(abs_path, capsys):
    assert main(["identify", abs_path, "--layer", "0", "--unit", "0",
                 "--x1", "0.7,0.2", "--x2=-0.9,0.2",
                 "--readout", "1,1,0,0;0,0,1,1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["point"] == pytest.approx([-0.7, 0.2])
    assert doc["same_region"] is False
    # without the readout the unit is inactive on the left half-plane
    assert main(["identify", abs_path, "--layer", "0", "--unit", "0",
                 "--x1", "0.7,0.2", "--x2=-0.9,0.2"]) == 1
    assert "identification failed" in capsys.readouterr().err


def test_verify_all_byte_identical(tmp_path):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    assert main(["verify-all", "-o", str(a)]) == 0
    assert main(["verify-all", "-o", str(b)]) == 0
    assert filecmp.cmp(str(a), str(b), shallow=False)
    text = a.read_text()
    assert text.count("PASS") == 12
    assert text.rstrip().endswith("12/12 criteria passed")
