import hashlib
import json
import os

import pytest

from eqlab import cli


def write_config(tmp_path, obj, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def read_outputs(out_dir):
    with open(os.path.join(out_dir, "manifest.json")) as fh:
        manifest = json.load(fh)
    blobs = {}
    for entry in manifest["outputs"]:
        with open(os.path.join(out_dir, entry["path"]), "rb") as fh:
            blobs[entry["path"]] = (fh.read(), entry["sha256"])
    return manifest, blobs


def test_validate_accepts_good_config(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "experiment": "sweep",
        "params": {"betas": [0.1, 0.2], "gamma_0": 1.0, "gamma_e": 10.0},
    })
    assert cli.main(["validate", "--config", cfg]) == 0
    assert "config ok" in capsys.readouterr().out


def test_validate_requires_config(capsys):
    assert cli.main(["validate"]) == 2


@pytest.mark.parametrize("cfg_obj", [
    {"experiment": "sweep", "params": {"betas": [0.1], "bogus": 1}},
    {"experiment": "sweep", "params": {}},
    {"experiment": "sweep", "params": {"betas": "not-a-list"}},
    {"experiment": "sweep", "params": {"betas": [0.1], "comb_size": 2.5}},
    {"experiment": "no_such_experiment"},
    {"experiment": "sweep", "betas": [0.1]},
    {"experiment": "sweep", "seed": -1},
])
def test_bad_configs_exit_2(tmp_path, capsys, cfg_obj):
    cfg = write_config(tmp_path, cfg_obj)
    assert cli.main(["sweep", "--config", cfg]) == 2
    assert "config error" in capsys.readouterr().err


def test_malformed_json_exits_2(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert cli.main(["sweep", "--config", str(path)]) == 2


def test_numerical_abort_exits_3(tmp_path, capsys):
    # beta = 0 with gamma_0 = 0 has no unique steady state
    cfg = write_config(tmp_path, {
        "params": {"betas": [0.0], "gamma_0": 0.0, "gamma_e": 1.0},
        "output_dir": str(tmp_path / "out"),
    })
    assert cli.main(["sweep", "--config", cfg]) == 3
    assert "numerical abort" in capsys.readouterr().err
    assert not os.path.exists(tmp_path / "out" / "manifest.json")


def test_manifest_hashes_match_files(tmp_path):
    out = str(tmp_path / "fig4")
    assert cli.main(["fig4_tomography", "--out", out]) == 0
    manifest, blobs = read_outputs(out)
    assert manifest["experiment"] == "fig4_tomography"
    assert len(blobs) >= 4
    for data, recorded in blobs.values():
        assert hashlib.sha256(data).hexdigest() == recorded


def test_reruns_are_byte_identical(tmp_path):
    out_a = str(tmp_path / "a")
    out_b = str(tmp_path / "b")
    assert cli.main(["fig4_tomography", "--out", out_a]) == 0
    assert cli.main(["fig4_tomography", "--out", out_b]) == 0
    _, blobs_a = read_outputs(out_a)
    _, blobs_b = read_outputs(out_b)
    assert blobs_a == blobs_b


def test_csv_values_round_trip(tmp_path):
    cfg = write_config(tmp_path, {
        "params": {"betas": [0.1, 0.7], "gamma_e": 10.0, "gamma_0": 1.0},
    })
    out = str(tmp_path / "sweep")
    assert cli.main(["sweep", "--config", cfg, "--out", out]) == 0
    with open(os.path.join(out, "sweep.csv")) as fh:
        lines = fh.read().splitlines()
    assert lines[0] == "beta_rad,x,y,z,purity"
    for line in lines[1:]:
        for field in line.split(","):
            # shortest round-trip decimals reparse exactly
            assert repr(float(field)) == field
    assert len(lines) == 3


def test_parallel_matches_serial(tmp_path):
    cfg = write_config(tmp_path, {
        "params": {"comb_sizes": [2], "grid": 8},
    })
    out_1 = str(tmp_path / "serial")
    out_2 = str(tmp_path / "parallel")
    assert cli.main(["fig1_maps", "--config", cfg, "--out", out_1]) == 0
    assert cli.main(["fig1_maps", "--config", cfg, "--out", out_2,
                     "--jobs", "2"]) == 0
    _, blobs_1 = read_outputs(out_1)
    _, blobs_2 = read_outputs(out_2)
    assert blobs_1 == blobs_2


def test_env_var_output_dir(tmp_path, monkeypatch):
    out = str(tmp_path / "envout")
    monkeypatch.setenv("EQLAB_OUT", out)
    cfg = write_config(tmp_path, {
        "params": {"betas": [0.2], "gamma_e": 10.0, "gamma_0": 1.0},
    })
    assert cli.main(["sweep", "--config", cfg]) == 0
    assert os.path.exists(os.path.join(out, "manifest.json"))


def test_seed_recorded_in_manifest(tmp_path):
    out = str(tmp_path / "seeded")
    assert cli.main(["fig4_tomography", "--out", out, "--seed", "42"]) == 0
    manifest, _ = read_outputs(out)
    assert manifest["seed"] == 42
    assert manifest["params"]["beta"] == pytest.approx(0.6)
