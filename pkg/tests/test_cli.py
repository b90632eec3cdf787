import json

import pytest

from magnonqi.cli import build_parser, main

from conftest import BALANCED


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--reproducible")
    return code, json.loads(out)


def test_parser_defaults():
    args = build_parser().parse_args(["teleport", "--sample"])
    assert args.trials == 100
    assert args.tolerance == 1e-9
    assert build_parser().parse_args(["dense", "--sample"]).tolerance == 1e-10


def test_check_balanced_inline(capsys):
    code, rep = run_json(capsys, "check", "--family", "teleport", "--amplitudes", json.dumps(BALANCED.to_json()))
    assert code == 0
    assert max(rep["residuals"].values()) < 1e-12
    for key in ("schema_version", "subcommand", "config", "residuals", "branches", "pass", "eq13_interpretation", "tolerance"):
        assert key in rep


def test_check_from_file(capsys, tmp_path):
    path = tmp_path / "w.json"
    path.write_text(json.dumps(BALANCED.to_json(), indent=2))
    code, rep = run_json(capsys, "check", "--family", "dense", "--amplitudes-file", str(path))
    assert code == 0
    assert rep["config"]["path"] == str(path)


def test_teleport_sampled(capsys):
    code, rep = run_json(capsys, "teleport", "--sample", "--seed", "7", "--trials", "100")
    assert code == 0
    assert rep["min_fidelity"] >= 1 - 1e-9
    assert len(rep["trials"]) == 100
    assert len(rep["branches"]) == 16


def test_teleport_uniform_names_failures(capsys):
    code, rep = run_json(capsys, "teleport", "--amplitudes", "uniform", "--trials", "1")
    assert code == 1
    assert "tele_bilinear" in rep["failing"]


def test_dense_uniform_fails(capsys):
    code, rep = run_json(capsys, "dense", "--amplitudes", "uniform")
    assert code == 1
    assert set(rep["failing"]) == {"dense_w110_w011_w101", "dense_w100_zero"}


def test_dense_fig1_reports_discrepancy(capsys):
    code, rep = run_json(capsys, "dense", "--fig1")
    assert code == 1
    assert "ancilla" in rep["circuit_discrepancy"]
    assert rep["diagnostics"]["ancilla_excitation"] == pytest.approx(0.25)


def test_qis_sampled(capsys):
    code, rep = run_json(capsys, "qis", "--sample", "--trials", "3")
    assert code == 0
    assert rep["eq13_interpretation"] == "equal-only"
    assert rep["prestate_discrepancies"] == [[1, 0]]


def test_evolve_t_star(capsys):
    code, rep = run_json(capsys, "evolve", "--t-star", "--j", "2")
    assert code == 0
    assert rep["w_generation"]["one_magnon_weight"] == pytest.approx(1)


def test_resolve(capsys):
    code, rep = run_json(capsys, "resolve-eq13", "--seeds", "2")
    assert code == 0
    assert rep["interpretation"] == "equal-only"


def test_sample_count(capsys):
    code, rep = run_json(capsys, "sample", "--family", "dense", "--count", "3", "--full-family")
    assert code == 0
    assert [s["seed"] for s in rep["samples"]] == [0, 1, 2]


def test_reproducible_reports_are_identical(capsys):
    argv = ["qis", "--sample", "--seed", "3", "--trials", "2", "--reproducible"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert "timestamp" not in json.loads(first)


def test_timestamp_by_default(capsys):
    _, out, _ = run(capsys, "sample", "--family", "teleport")
    assert "timestamp" in json.loads(out)


def test_output_file_and_text(capsys, tmp_path):
    path = tmp_path / "r.txt"
    code, out, _ = run(capsys, "dense", "--amplitudes", "balanced", "--format", "text", "--output", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("dense: PASS")


def test_malformed_json_points_at_line(capsys):
    code, _, err = run(capsys, "check", "--family", "dense", "--amplitudes", '{\n"w001": [1, 0],\n oops}')
    assert code == 2
    assert "line 3" in err


def test_bad_field_is_named(capsys):
    w = BALANCED.to_json()
    w["w110"] = [1, 2, 3]
    code, _, err = run(capsys, "check", "--family", "teleport", "--amplitudes", json.dumps(w))
    assert code == 2
    assert "w110" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["teleport"],
        ["bogus"],
        ["check", "--amplitudes", "uniform"],
        ["teleport", "--sample", "--trials", "0"],
        ["teleport", "--sample", "--alice-channel", "1,1"],
        ["evolve", "--initial", "10"],
        ["check", "--family", "teleport", "--sample", "--amplitudes", "uniform"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    assert main(argv) == 2
