import json

import numpy as np
import pytest

from varikit.cli import main
from varikit.config import (SchemaError, build_family, build_function,
                            load_config, validate_config)
from varikit.families import FlatDisc, PlaneBundle, ProductSlab, SphereShell
from varikit.runner import run_config


def _write(tmp_path, text, name="cfg.yaml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_load_config_empty_document(tmp_path):
    doc = load_config(_write(tmp_path, ""))
    assert doc["experiments"] == []
    doc = load_config(_write(tmp_path, "seed: 7\nexperiments: []\n"))
    assert doc["seed"] == 7


def test_schema_errors_carry_field_paths(tmp_path):
    with pytest.raises(SchemaError) as err:
        load_config(_write(tmp_path, "experiments: []\nbogus: 1\n"))
    assert "bogus" in str(err.value)
    with pytest.raises(SchemaError) as err:
        validate_config({"experiments": [
            {"name": "x", "kind": "ball-iso",
             "family": {"tag": "circle", "radius": 1.0}, "r": 1.0, "oops": 2}]})
    assert "experiments[0]" in str(err.value) and "oops" in str(err.value)
    with pytest.raises(SchemaError):
        validate_config({"experiments": [{"name": "x", "kind": "wat"}]})
    with pytest.raises(SchemaError):
        validate_config({"experiments": [
            {"name": "x", "kind": "ball-iso",
             "family": {"tag": "martian", "radius": 1.0}, "r": 1.0}]})
    with pytest.raises(SchemaError):
        load_config(_write(tmp_path, "experiments: {not: a list}\n"))
    with pytest.raises(SchemaError):
        load_config(_write(tmp_path, "a: [unclosed\n", name="broken.yaml"))


def test_family_and_function_builders():
    assert isinstance(build_family({"tag": "circle", "radius": 2.0}), SphereShell)
    disc = build_family({"tag": "disc", "m": 1, "n": 3, "radius": 1.0})
    assert isinstance(disc, FlatDisc) and disc.n == 3
    bundle = build_family({"tag": "bundle", "k": 4, "weight": 0.3, "clip": 1.0})
    assert isinstance(bundle, PlaneBundle)
    slab = build_family({"tag": "slab", "axes": [0], "lo": [-1, -1],
                         "hi": [1, 1], "unbounded": True})
    assert isinstance(slab, ProductSlab) and slab.unbounded
    f = build_function({"tag": "radialBump", "radius": 0.5}, 2)
    assert f(np.zeros(2)) == 1.0
    z = build_function({"tag": "zero"}, 2)
    assert z(np.ones(2)) == 0.0


def test_run_config_outputs(tmp_path):
    doc = validate_config({"experiments": [
        {"name": "ball/circle", "kind": "ball-iso",
         "family": {"tag": "circle", "radius": 1.0}, "r": 1.0},
        {"name": "blow", "kind": "blowup", "blowupKind": "lebesgueScaling",
         "p": "inf", "steps": 2},
    ]})
    lines = []
    code = run_config(doc, output_dir=tmp_path / "out", log=lines.append)
    assert code == 0
    assert any(line.startswith("PASS ball/circle") for line in lines)
    payload = json.loads((tmp_path / "out" / "reports.json").read_text())
    assert payload["reports"][0]["name"] == "ball/circle"
    assert "blow" in payload["series"]
    assert (tmp_path / "out" / "blowup-blow.csv").exists()
    csv_head = (tmp_path / "out" / "reports.csv").read_text().splitlines()[0]
    assert csv_head.startswith("name,lhs,rhs,ratio,pass")


def test_cli_run_and_exit_codes(tmp_path):
    cfg = _write(tmp_path,
                 "outputDir: " + str(tmp_path / "rep") + "\n"
                 "experiments:\n"
                 "  - {name: b, kind: ball-iso, family: {tag: circle, radius: 1.0}, r: 1.0}\n")
    assert main(["run", cfg]) == 0
    assert (tmp_path / "rep" / "reports.csv").exists()
    bad = _write(tmp_path, "experiments: 3\n", name="bad.yaml")
    assert main(["run", bad]) == 2


def test_cli_verify_prints_implied_bound(tmp_path, capsys):
    code = main(["verify", "--theorem", "ball-iso", "--family", "disc",
                 "--m", "2", "--n", "3"])
    out = capsys.readouterr().out
    assert code == 0
    assert "impliedGammaLowerBound" in out
    assert "0.2820947917" in out


def test_cli_verify_precondition_exit(capsys):
    code = main(["verify", "--theorem", "isoperimetric", "--family", "circle",
                 "--d", "-1.0"])
    assert code == 3


def test_cli_verify_resolution_exit(capsys):
    code = main(["verify", "--theorem", "isoperimetric", "--family", "bundle",
                 "--k", "8", "--h", "0.4"])
    assert code == 4


def test_cli_blowup_csv(tmp_path, capsys):
    out = tmp_path / "series.csv"
    code = main(["blowup", "--kind", "plane-bundle", "--p", "inf",
                 "--steps", "3", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "parameter,norm,budget,growthFactor"
    assert len(lines) == 4


def test_cli_gamma_bound(capsys):
    assert main(["gamma-bound"]) == 0
    out = capsys.readouterr().out
    assert "m=1" in out and "m=2" in out


def test_cli_lemmas(capsys):
    assert main(["lemmas", "--instances", "25", "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 4


def test_cli_convert_round_trip(tmp_path):
    from varikit.families import SphereShell
    from varikit.varifold import save_csv

    src = tmp_path / "in.csv"
    dst = tmp_path / "out.csv"
    save_csv(SphereShell(1, 2, 1.0).sample(0.1), src)
    assert main(["convert", str(src), str(dst)]) == 0
    assert src.read_bytes() == dst.read_bytes()
