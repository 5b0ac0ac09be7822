import json

import numpy as np
import pytest

from cochainlab.cli import main
from cochainlab.graphons import random_kernel, random_w00
from cochainlab.groups import Group
from cochainlab.serialize import dump_json, kernel_to_json_dict


@pytest.fixture
def kernel_file(tmp_path):
    W = random_w00(Group((2,)), 4, np.random.default_rng(70))
    p = tmp_path / "w.json"
    dump_json(kernel_to_json_dict(W), str(p))
    return str(p)


def run(argv):
    return main(argv)


def test_certify_quick_exits_zero(tmp_path, capsys):
    out = tmp_path / "cert.csv"
    assert run(["certify", "--quick", "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0].startswith("check,passed,")
    assert all(",true," in line for line in lines[1:])


def test_unknown_subcommand_exits_two():
    with pytest.raises(SystemExit):
        run(["frobnicate"])  # argparse exits on its own for unknown commands


def test_missing_input_file_exits_two(capsys):
    assert run(["homology", "--in", "/nonexistent/x.json"]) == 2
    assert "error:" in capsys.readouterr().err


def test_sample_deterministic_csv(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert run(["sample", "--model", "one-out", "--n", "7", "--seed", "3", "--out", str(a)]) == 0
    assert run(["sample", "--model", "one-out", "--n", "7", "--seed", "3", "--out", str(b)]) == 0
    assert a.read_text() == b.read_text()
    assert a.read_text().startswith("u,v,w\n")
    c = tmp_path / "c.csv"
    assert run(["sample", "--model", "one-out", "--n", "7", "--seed", "4", "--out", str(c)]) == 0
    assert c.read_text() != a.read_text()


def test_sample_json_then_homology(tmp_path):
    x = tmp_path / "x.json"
    assert run(["sample", "--model", "hypertree", "--n", "6", "--seed", "1",
                "--format", "json", "--out", str(x)]) == 0
    doc = json.loads(x.read_text())
    assert doc["n"] == 6
    assert len(doc["triangles"]) == 10
    rep = tmp_path / "rep.json"
    assert run(["homology", "--in", str(x), "--format", "json", "--out", str(rep)]) == 0
    d = json.loads(rep.read_text())
    assert d["num_faces"] == 10
    assert d["torsion_order"] >= 1


def test_homology_csv_format(tmp_path):
    x = tmp_path / "x.json"
    run(["sample", "--model", "one-out", "--n", "5", "--seed", "2",
         "--format", "json", "--out", str(x)])
    rep = tmp_path / "rep.csv"
    assert run(["homology", "--in", str(x), "--p", "2", "--out", str(rep)]) == 0
    header = rep.read_text().split("\n")[0]
    assert "torsion_order" in header


def test_graphon_cutnorm(kernel_file, tmp_path):
    out = tmp_path / "c.csv"
    assert run(["graphon", "cutnorm", "--in", kernel_file, "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "cut_norm,exact"
    val, exact = lines[1].split(",")
    assert float(val) >= 0
    assert exact == "true"


def test_graphon_b_and_rate(kernel_file, tmp_path):
    out = tmp_path / "b.csv"
    assert run(["graphon", "b", "--in", kernel_file, "--out", str(out)]) == 0
    header, row = out.read_text().strip().split("\n")
    assert header == "b,entropy,b_plus_entropy"
    b, h, s = (float(x) for x in row.split(","))
    assert s <= 1e-9  # variational upper bound at work
    out2 = tmp_path / "r.csv"
    assert run(["graphon", "rate", "--in", kernel_file, "--out", str(out2)]) == 0
    rate = float(out2.read_text().strip().split("\n")[1])
    assert rate >= -1e-12


def test_graphon_convolve_roundtrip(kernel_file, tmp_path):
    out = tmp_path / "conv.json"
    assert run(["graphon", "convolve", "--in", kernel_file, "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["group"] == [2]
    assert len(doc["values"]) == 4


def test_graphon_fk_csv_summary(tmp_path):
    W = random_kernel(Group((2,)), 9, np.random.default_rng(71))
    p = tmp_path / "w.json"
    dump_json(kernel_to_json_dict(W), str(p))
    out = tmp_path / "fk.csv"
    assert run(["graphon", "fk", "--in", str(p), "--eps", "0.4", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("round,slice,box_integral,energy_after,parts\n")
    assert "# rounds=" in text
    assert "certified=true" in text


def test_layer_audit_formats(tmp_path):
    csv_out = tmp_path / "layer.csv"
    code = run(["layer-audit", "--n", "5", "--samples", "30", "--seed", "2", "--out", str(csv_out)])
    assert code == 0
    text = csv_out.read_text()
    assert text.startswith("n,group,")
    assert "# audit " in text
    json_out = tmp_path / "layer.json"
    run(["layer-audit", "--n", "5", "--samples", "30", "--seed", "2",
         "--format", "json", "--out", str(json_out)])
    doc = json.loads(json_out.read_text())
    assert "audit" in doc
    assert doc["audit"]["samples"] == 30


def test_ez1_trend_cli_deterministic(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    args = ["ez1-trend", "--n", "5,6", "--samples", "25", "--seed", "11"]
    assert run(args + ["--out", str(a)]) == 0
    assert run(args + ["--out", str(b)]) == 0
    assert a.read_text() == b.read_text()


def test_betti_trend_cli(tmp_path):
    out = tmp_path / "betti.csv"
    assert run(["betti-trend", "--n", "5:7:1", "--samples", "20", "--seed", "8",
                "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 1 + 3  # header + n in {5, 6, 7}, one prime


def test_group_flag_parsing(tmp_path):
    out = tmp_path / "z6.csv"
    assert run(["ez1-trend", "--n", "5", "--samples", "10", "--group", "2,3",
                "--seed", "1", "--out", str(out)]) == 0
    assert "Z/2 x Z/3" in out.read_text()


def test_bad_group_flag_exits_two(capsys):
    with pytest.raises(SystemExit):
        run(["ez1-trend", "--group", "0"])  # argparse type error


def test_fk_bad_eps_exits_two(kernel_file, capsys):
    assert run(["graphon", "fk", "--in", kernel_file, "--eps", "-1"]) == 2
    assert "error:" in capsys.readouterr().err
