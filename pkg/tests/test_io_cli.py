import json
import subprocess
import sys
from fractions import Fraction

import pytest

from dynspectra.classical import QuadraticSurd
from dynspectra.cli import run
from dynspectra.engine import EntropyPoint
from dynspectra.intervals import Interval
from dynspectra.io import (CSV_COLUMNS, ConfigError, dumps, load_potential, load_sft, read_entropy_csv,
                           sequence_from_json, to_jsonable, write_entropy_csv)
from dynspectra.prooflab import FiniteSequence


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), (json.loads(err.strip().splitlines()[-1]) if err.strip() else None)


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def is_exact_record(node):
    """Every number below `node` sits inside a record carrying an exact form and a decimal."""
    if isinstance(node, dict):
        if "decimal" in node:
            return any(k in node for k in ("num", "p", "terms", "lo"))
        return all(is_exact_record(v) for v in node.values())
    if isinstance(node, list):
        return all(is_exact_record(v) for v in node)
    if isinstance(node, float):
        return False
    return True


# -- serialization -------------------------------------------------------------------

def test_numbers_carry_exact_records():
    doc = to_jsonable({"f": 0.6445, "q": Fraction(1, 3), "s": QuadraticSurd(0, 1, 5, 1),
                       "i": Interval(Fraction(1, 3), Fraction(1, 2))}, digits=6)
    assert doc["f"] == {"num": 1289, "den": 2000, "decimal": "0.644500"}
    assert doc["q"]["decimal"] == "0.333333"
    assert doc["s"]["decimal"].startswith("2.236067")
    assert is_exact_record(doc)


def test_dumps_is_sorted_and_rejects_unknown_types():
    assert dumps({"b": 1, "a": 2}).index('"a"') < dumps({"b": 1, "a": 2}).index('"b"')
    with pytest.raises(TypeError):
        to_jsonable(object())


def test_theta_layouts():
    doc = {"center": 1, "future": {"preperiod": [2, 3], "period": [1]},
           "past": {"preperiod": [4, 5], "period": [2, 1]}}
    theta = sequence_from_json(doc)
    assert [theta.at(n) for n in range(-6, 5)] == [1, 2, 1, 2, 5, 4, 1, 2, 3, 1, 1]
    assert sequence_from_json({"periodic": [1, 2]}).at(3) == 2
    fin = sequence_from_json({"finite": [1, 2, 3], "origin": 1})
    assert isinstance(fin, FiniteSequence) and fin.at(0) == 2
    with pytest.raises(ValueError):
        sequence_from_json({"center": 1, "future": {"period": []}, "past": {"period": [1]}})


def test_loaders(tmp_path):
    assert len(load_sft("full:3")) == 3 and len(load_sft("goldenmean")) == 2
    sft = write(tmp_path, "s.json", {"sft": {"alphabet": [1, 2], "transitions": [[0, 1], [1, 1]]}})
    assert load_sft(sft).allowed(2, 2) and not load_sft(sft).allowed(1, 1)
    assert load_potential("gauss:7").left == 7
    with pytest.raises(ConfigError):
        load_sft(str(tmp_path / "missing.json"))
    with pytest.raises(ConfigError):
        load_potential("gauss:x")


def test_csv_contract(tmp_path):
    points = [EntropyPoint(Fraction(11, 5), None, 0, 0),
              EntropyPoint(Fraction(5, 2), Interval(Fraction(0), Fraction(1, 10 ** 12)), 3, 3)]
    path = tmp_path / "h.csv"
    write_entropy_csv(points, path, digits=4)
    rows = read_entropy_csv(path)
    assert tuple(rows[0]) == CSV_COLUMNS
    assert rows[0]["entropy_lower"] == rows[0]["entropy_upper"] == ""
    assert rows[1] == {"t": "2.5000", "entropy_lower": "0.0000", "entropy_upper": "0.0001",
                       "node_count": "3", "edge_count": "3"}


# -- spectra commands -----------------------------------------------------------------------

def test_triples(capsys):
    code, out, _ = call(capsys, "triples", "--zmax", "30")
    assert code == 0 and out["triples"][-1] == [2, 5, 29]


def test_cf_and_lagrange(capsys):
    code, out, _ = call(capsys, "cf", "--period", "1")
    assert code == 0 and out["cf"]["decimal"].startswith("1.618033988")
    code, out, _ = call(capsys, "lagrange", "--period", "2,2,1,1")
    assert out["lagrange"]["decimal"].startswith("2.973213749")
    code, out, _ = call(capsys, "lagrange", "--zmax", "5")
    assert [row["z"] for row in out["lagrange"]] == [1, 2, 5] and all(r["agree"] for r in out["lagrange"])


def test_min_report(capsys):
    code, out, _ = call(capsys, "min", "--sft", "full2", "--potential", "gauss:20")
    assert code == 0 and out["cycle"] == "(1)"
    lo, hi = Fraction(out["min"]["lo"]["num"], out["min"]["lo"]["den"]), \
        Fraction(out["min"]["hi"]["num"], out["min"]["hi"]["den"])
    assert lo <= Fraction(22360679774, 10 ** 10) and Fraction(22360679775, 10 ** 10) <= hi
    assert out["min_exact"]["decimal"].startswith("2.2360679")
    assert is_exact_record(out)


def test_min_on_empty_sft(capsys, tmp_path):
    dead = write(tmp_path, "dead.json", {"alphabet": [1, 2], "transitions": [[0, 1], [0, 0]]})
    code, out, err = call(capsys, "min", "--sft", dead, "--potential", "gauss:3")
    assert code == 2 and out is None and err["error"] == "empty-subshift"


def test_exit_codes(capsys, tmp_path):
    assert call(capsys, "min", "--potential", "nope.json")[0] == 2
    code, _, err = call(capsys, "bogus")
    assert code == 2 and err["error"] == "usage"
    code, _, err = call(capsys, "sample", "--max-period", "14", "--budget", "10")
    assert code == 4 and err["error"] == "budget-exceeded"


def test_sublevel_scan(capsys, tmp_path):
    csv_path = tmp_path / "h.csv"
    code, out, _ = call(capsys, "sublevel-scan", "--from", "2.2", "--to", "3.2", "--steps", "10",
                        "--csv", str(csv_path))
    assert code == 0 and out["points"] == 11
    rows = read_entropy_csv(csv_path)
    assert rows[0]["t"].startswith("2.2") and rows[0]["entropy_upper"] == ""
    assert float(rows[-1]["entropy_lower"]) > 0


def test_perturbed_min_is_seeded(capsys):
    args = ("min", "--potential", "gauss:8", "--random-perturbation", "0.05", "--perturbation-depth", "3")
    a = call(capsys, *args, "--seed", "5")[1]
    b = call(capsys, *args, "--seed", "5")[1]
    c = call(capsys, *args, "--seed", "6")[1]
    assert a == b and a != c


def test_out_file(capsys, tmp_path):
    path = tmp_path / "t.json"
    assert run(["triples", "--zmax", "5", "--out", str(path)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(path.read_text())["triples"][-1] == [1, 2, 5]


def test_byte_identical_across_processes(tmp_path):
    outs = []
    for _ in range(2):
        proc = subprocess.run([sys.executable, "-m", "dynspectra.cli", "sample", "--max-period", "5",
                               "--potential", "gauss:8", "--random-perturbation", "1/50"],
                              capture_output=True, check=True)
        outs.append(proc.stdout)
    assert outs[0] == outs[1] and len(outs[0]) > 100


def test_png_outputs(capsys, tmp_path):
    pytest.importorskip("matplotlib")
    png = tmp_path / "h.png"
    code, _, _ = call(capsys, "sublevel-scan", "--from", "2.2", "--to", "3", "--steps", "4",
                      "--csv", str(tmp_path / "h.csv"), "--png", str(png))
    assert code == 0 and png.read_bytes()[:4] == b"\x89PNG"
    png2 = tmp_path / "s.png"
    assert call(capsys, "sample", "--max-period", "4", "--png", str(png2))[0] == 0
    assert png2.stat().st_size > 0


# -- prooflab commands ---------------------------------------------------------------------------

@pytest.fixture
def lab(tmp_path):
    return {
        "params": write(tmp_path, "params.json", {"a": 1, "b": -1, "lam1": 0.9, "lam2": 0.95, "K": 6, "m": 1}),
        "spiked": write(tmp_path, "spiked.json", {
            "center": 1, "future": {"preperiod": [1] * 9 + [2] + [1] * 19 + [2], "period": [1]},
            "past": {"preperiod": [], "period": [1]}}),
        "periodic": write(tmp_path, "periodic.json", {"theta": {"periodic": [1, 2]}}),
        "candidate": write(tmp_path, "cand.json", {"finite": [1, 2, 2, 1, 1, 2, 1, 1, 1, 1, 2, 1], "origin": 0}),
    }


def test_records_command(capsys, lab):
    code, out, _ = call(capsys, "prooflab", "records", "--theta", lab["spiked"], "--params", lab["params"],
                        "--horizon", "40", "--potential", "gauss:6")
    assert code == 0 and out["records"][0] == 1
    assert {"k", "d", "weak_record", "record", "flags"} <= set(out["positions"][0])


def test_claim_strange_and_compete(capsys, lab):
    code, out, _ = call(capsys, "prooflab", "claim", "--theta", lab["periodic"], "--m", "2", "--center-window", "5")
    assert code == 0 and not out["clean"] and out["violation"]["gamma"] == [1, 2]
    code, out, _ = call(capsys, "prooflab", "strange", "--theta", lab["periodic"], "--alpha", "2,1")
    assert code == 0 and out["strange"] == []
    code, out, _ = call(capsys, "prooflab", "compete", "--theta", lab["periodic"], "--params", lab["params"],
                        "--mode", "i", "--horizon", "10")
    assert code == 0 and out["reports"][0]["smaller"] is False


def test_prooflab_entry_point(lab):
    proc = subprocess.run(["prooflab", "claim", "--theta", lab["periodic"], "--m", "1"], capture_output=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["m"] == 1


def test_cells_not_happy(capsys, lab):
    code, _, err = call(capsys, "prooflab", "cells", "--theta", lab["periodic"], "--params", lab["params"],
                        "--k", "2")
    assert code == 2 and err["error"] == "not-happy"


def test_lambda_scan_command(capsys, lab):
    code, out, _ = call(capsys, "prooflab", "lambda-scan", "--params", lab["params"], "--ratio", "1/1024",
                        "--r-from", "2", "--r-to", "5", "--points", "300")
    assert code == 0 and len(out["bad_fraction"]) == 4
    code, _, err = call(capsys, "prooflab", "lambda-scan", "--params", lab["params"], "--ratio", "0.4")
    assert code == 2 and err["error"] == "dimension-too-large"


def test_bad_params_file(capsys, tmp_path, lab):
    bad = write(tmp_path, "bad.json", {"a": 1, "b": -1, "lam1": 0.3, "lam2": 0.5, "K": 5, "m": 2})
    code, _, err = call(capsys, "prooflab", "records", "--theta", lab["periodic"], "--params", bad)
    assert code == 2 and err["error"] == "config"
