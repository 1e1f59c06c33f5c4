import csv
import json

from report.writers import (
    AGE_COLUMNS,
    RESULT_COLUMNS,
    RunManifest,
    file_digest,
    write_run,
)


def test_write_run(xa_result, tmp_path):
    manifest = RunManifest(command="xa", config={"N": 4}, seed=7)
    written = write_run(xa_result, tmp_path / "out", manifest)
    assert set(written) == {"results", "ages", "summary", "manifest"}

    with written["results"].open() as f:
        rows = list(csv.reader(f))
    assert rows[0] == RESULT_COLUMNS
    assert len(rows) == 1 + 20 * 4
    assert rows[1][:3] == ["0", "5.0", "0"]
    assert float(rows[1][3]) == xa_result.ages[0].outcomes[0].p_value
    assert rows[1][4] == "ks_asymptotic"
    assert rows[1][7] == "true"

    with written["ages"].open() as f:
        ages = list(csv.DictReader(f))
    assert list(ages[0]) == AGE_COLUMNS
    assert float(ages[3]["g_p"]) == xa_result.ages[3].g_p
    assert ages[0]["adjusted_p"] == ""

    summary = json.loads(written["summary"].read_text())
    assert summary["stripe_lo"] == xa_result.stripe_lo
    assert summary["mu0"] == xa_result.mu0
    assert summary["reject_renewal"] == xa_result.reject_renewal
    assert summary["calibration"] == "stripe_calibrated"

    recorded = json.loads(written["manifest"].read_text())
    assert recorded["command"] == "xa"
    assert recorded["seed"] == 7
    assert recorded["finished_at"] is not None


def test_manifest_records_input_digests(tmp_path):
    data = tmp_path / "events.txt"
    data.write_text("1.0\n2.0\n")
    manifest = RunManifest(command="xa-single", config={}, seed=0)
    manifest.add_input(data)
    assert manifest.to_dict()["inputs"] == {str(data): file_digest(data)}
    assert len(file_digest(data)) == 64
