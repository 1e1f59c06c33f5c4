import csv
import json

import numpy as np
import pytest

from commands import EXIT_ERROR, EXIT_OK, EXIT_REJECTED
from events.sequence_loader import SequenceLoader
from main import main
from report.writers import AGES_FILE, MANIFEST_FILE, PLOT_FILE, RESULTS_FILE, SUMMARY_FILE


@pytest.fixture(autouse=True)
def no_env_seed(monkeypatch):
    monkeypatch.delenv("XA_SEED", raising=False)


def power_rows(output):
    lines = output.strip().splitlines()
    assert lines[0] == "N\tT_a\tmu1\tpower"
    return [tuple(float(v) for v in line.split("\t")) for line in lines[1:]]


def test_unknown_flag_is_an_error():
    assert main(["xa", "--no-such-flag"]) == EXIT_ERROR


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == EXIT_OK
    assert "xa-single" in capsys.readouterr().out


def test_missing_source_is_an_error(tmp_path):
    assert main(["xa", "--out-dir", str(tmp_path)]) == EXIT_ERROR
    assert main(["xa-single", "--out-dir", str(tmp_path)]) == EXIT_ERROR
    assert main(["generate", "--out", str(tmp_path / "x.txt")]) == EXIT_ERROR


def test_generate_writes_waits_and_manifest(tmp_path):
    out = tmp_path / "poisson.txt"
    code = main(["generate", "--kind", "poisson", "--lambda", "2", "--n", "500",
                 "--seed", "7", "--out", str(out)])
    assert code == EXIT_OK
    taus = SequenceLoader(out).read_values()
    assert len(taus) == 500
    assert np.all(taus > 0)
    assert taus.mean() == pytest.approx(0.5, rel=0.15)

    manifest = json.loads(out.with_name("poisson.txt.manifest.json").read_text())
    assert manifest["command"] == "generate"
    assert manifest["seed"] == 7
    assert manifest["config"]["write"] == "taus"


def test_generate_is_reproducible(tmp_path):
    args = ["generate", "--kind", "hawkes", "--lambda0", "0.75", "--alpha", "0.2",
            "--beta", "0.4", "--horizon", "200", "--seed", "3"]
    assert main(args + ["--out", str(tmp_path / "a.txt")]) == EXIT_OK
    assert main(args + ["--out", str(tmp_path / "b.txt")]) == EXIT_OK
    first = SequenceLoader(tmp_path / "a.txt").read_values()
    assert np.array_equal(first, SequenceLoader(tmp_path / "b.txt").read_values())
    assert np.all(np.diff(first) > 0)
    assert first[-1] <= 200


def test_generate_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("XA_SEED", "42")
    out = tmp_path / "env.txt"
    assert main(["generate", "--kind", "poisson", "--lambda", "1", "--n", "50",
                 "--out", str(out)]) == EXIT_OK
    manifest = json.loads(out.with_name("env.txt.manifest.json").read_text())
    assert manifest["seed"] == 42


def test_xa_inline_spec_writes_outputs(tmp_path):
    out_dir = tmp_path / "xa"
    code = main(["xa", "--spec", "kind=poisson,lambda=1,n=3000", "--N", "4", "--Ta", "3",
                 "--seed", "7", "--out-dir", str(out_dir), "--plot"])
    assert code in (EXIT_OK, EXIT_REJECTED)
    for name in (RESULTS_FILE, AGES_FILE, SUMMARY_FILE, MANIFEST_FILE, PLOT_FILE):
        assert (out_dir / name).exists()

    with (out_dir / RESULTS_FILE).open() as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 3 * 4
    assert {row["method"] for row in rows} == {"ks_asymptotic"}

    summary = json.loads((out_dir / SUMMARY_FILE).read_text())
    assert (code == EXIT_REJECTED) == summary["reject_renewal"]
    manifest = json.loads((out_dir / MANIFEST_FILE).read_text())
    assert manifest["config"]["resolved"]["N"] == 4
    assert manifest["config"]["resolved"]["generator"]["kind"] == "poisson"


def test_xa_reruns_are_identical(tmp_path):
    args = ["xa", "--spec", "kind=exp_ar1,beta=0.674,rate=0.4,n=2000", "--N", "4", "--Ta", "3",
            "--seed", "11"]
    first = main(args + ["--out-dir", str(tmp_path / "one")])
    second = main(args + ["--workers", "3", "--out-dir", str(tmp_path / "two")])
    assert first == second
    assert ((tmp_path / "one" / RESULTS_FILE).read_bytes()
            == (tmp_path / "two" / RESULTS_FILE).read_bytes())


def test_xa_config_file_and_flag_override(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"N": 3, "Ta": 2, "seed": 5, "out_dir": str(tmp_path / "cfg")}))
    code = main(["xa", "--config", str(config), "--spec", "kind=poisson,lambda=1,n=2000",
                 "--Ta", "3"])
    assert code in (EXIT_OK, EXIT_REJECTED)
    manifest = json.loads((tmp_path / "cfg" / MANIFEST_FILE).read_text())
    assert manifest["config"]["config_file"] == str(config)
    assert manifest["config"]["resolved"]["N"] == 3
    assert manifest["config"]["resolved"]["T_a"] == 3
    assert manifest["seed"] == 5


def test_xa_rejects_invalid_settings(tmp_path):
    code = main(["xa", "--spec", "kind=poisson,lambda=1,n=2000", "--N", "1",
                 "--out-dir", str(tmp_path)])
    assert code == EXIT_ERROR


def test_xa_single_on_generated_input(tmp_path):
    data = tmp_path / "waits.txt"
    assert main(["generate", "--kind", "poisson", "--lambda", "1", "--n", "2000",
                 "--seed", "2", "--out", str(data)]) == EXIT_OK
    out_dir = tmp_path / "single"
    code = main(["xa-single", "--input", str(data), "--tw", "500", "--Ta", "4",
                 "--ta-max", "20", "--method", "ks", "--seed", "2", "--out-dir", str(out_dir)])
    assert code in (EXIT_OK, EXIT_REJECTED)

    summary = json.loads((out_dir / SUMMARY_FILE).read_text())
    assert any("not fully independent" in w for w in summary["warnings"])
    manifest = json.loads((out_dir / MANIFEST_FILE).read_text())
    assert str(data) in manifest["inputs"]
    assert manifest["config"]["resolved"]["t_a_max"] == 20
    with (out_dir / RESULTS_FILE).open() as f:
        assert len(list(csv.DictReader(f))) == 4 * 4


def test_xa_single_too_short_input(tmp_path):
    data = tmp_path / "short.txt"
    data.write_text("\n".join(str(1.0 + 0.01 * k) for k in range(120)) + "\n")
    code = main(["xa-single", "--input", str(data), "--tw", "100",
                 "--out-dir", str(tmp_path / "out")])
    assert code == EXIT_ERROR


def test_power_at_null_mean_equals_alpha(capsys):
    assert main(["power", "--N", "100", "--Ta", "20", "--alpha", "0.05"]) == EXIT_OK
    (row,) = power_rows(capsys.readouterr().out)
    assert row[0] == 100
    assert row[1] == 20
    assert row[3] == pytest.approx(0.05, abs=1e-6)


def test_power_sweep_is_monotone(capsys, tmp_path):
    svg = tmp_path / "power.svg"
    assert main(["power", "--mu1", "0.34", "--Ta", "100", "--sweep", "N",
                 "--values", "10,50,100,300", "--svg", str(svg)]) == EXIT_OK
    rows = power_rows(capsys.readouterr().out)
    assert [row[0] for row in rows] == [10, 50, 100, 300]
    powers = [row[3] for row in rows]
    assert powers == sorted(powers)
    assert powers[-1] > 0.9
    assert "<svg" in svg.read_text()


def test_power_svg_needs_sweep(tmp_path):
    assert main(["power", "--mu1", "0.3", "--svg", str(tmp_path / "p.svg")]) == EXIT_ERROR
    assert main(["power", "--sweep", "Ta", "--values", "0,2"]) == EXIT_ERROR


def test_xa_print_palette(tmp_path):
    args = ["xa", "--spec", "kind=poisson,lambda=1,n=2000", "--N", "3", "--Ta", "2",
            "--seed", "4", "--plot"]
    assert main(args + ["--palette", "print", "--out-dir", str(tmp_path / "print")]) in (
        EXIT_OK, EXIT_REJECTED)
    assert main(args + ["--out-dir", str(tmp_path / "screen")]) in (EXIT_OK, EXIT_REJECTED)
    printed = (tmp_path / "print" / PLOT_FILE).read_text()
    screen = (tmp_path / "screen" / PLOT_FILE).read_text()
    assert "#2980b9" in screen
    assert "#2980b9" not in printed
    assert "#000000" in printed


def test_xa_unknown_palette_is_an_error(tmp_path):
    assert main(["xa", "--spec", "kind=poisson,lambda=1,n=2000", "--plot",
                 "--palette", "sepia", "--out-dir", str(tmp_path)]) == EXIT_ERROR


def test_xa_seed_from_generator_spec(tmp_path):
    spec = "kind=poisson,lambda=1,n=2000,seed=9"
    assert main(["xa", "--spec", spec, "--N", "3", "--Ta", "2",
                 "--out-dir", str(tmp_path / "spec")]) in (EXIT_OK, EXIT_REJECTED)
    assert json.loads((tmp_path / "spec" / MANIFEST_FILE).read_text())["seed"] == 9
    assert main(["xa", "--spec", spec, "--N", "3", "--Ta", "2", "--seed", "5",
                 "--out-dir", str(tmp_path / "flag")]) in (EXIT_OK, EXIT_REJECTED)
    assert json.loads((tmp_path / "flag" / MANIFEST_FILE).read_text())["seed"] == 5


@pytest.mark.slow
@pytest.mark.parametrize("mu", ["1.5", "2.1"])
def test_xa_pareto_renewal_is_not_rejected(tmp_path, mu):
    code = main(["xa", "--spec", f"kind=pareto_renewal,mu={mu},theta=1,n=10000", "--seed", "21",
                 "--out-dir", str(tmp_path)])
    assert code == EXIT_OK
    summary = json.loads((tmp_path / SUMMARY_FILE).read_text())
    assert not summary["reject_renewal"]


def test_xa_on_recorded_heavy_tailed_waits(tmp_path):
    files = []
    for k in range(10):
        out = tmp_path / f"pareto_{k}.txt"
        assert main(["generate", "--kind", "pareto_renewal", "--mu", "1.5", "--n", "2000",
                     "--seed", str(k), "--out", str(out)]) == EXIT_OK
        files.append(str(out))
    code = main(["xa", "--spec", *files, "--input-mode", "taus", "--N", "5", "--Ta", "3",
                 "--seed", "3", "--out-dir", str(tmp_path / "xa")])
    assert code in (EXIT_OK, EXIT_REJECTED)
    with (tmp_path / "xa" / RESULTS_FILE).open() as f:
        assert len(list(csv.DictReader(f))) == 3 * 5
