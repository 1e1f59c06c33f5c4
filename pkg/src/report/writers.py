import csv
import hashlib
import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

from xa.results import XAResult, outcome_row

TOOL_VERSION = "1.0.0"

RESULTS_FILE = "results.csv"
AGES_FILE = "ages.csv"
SUMMARY_FILE = "summary.json"
MANIFEST_FILE = "manifest.json"
PLOT_FILE = "xa_plot.svg"

RESULT_COLUMNS = ["age_index", "t_a", "trial", "p_value", "method", "m", "n", "valid"]
AGE_COLUMNS = ["age_index", "t_a", "g_p", "fisher_p", "adjusted_p", "uniformity_p",
               "in_stripe", "valid", "q1", "median", "q3", "whisker_lo", "whisker_hi",
               "n_outliers"]

logger = logging.getLogger(__name__)


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def file_digest(path: Union[str, Path]) -> str:
    """SHA-256 of a file's bytes."""
    digest = hashlib.sha256()
    with Path(path).open("rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _cell(value: Any) -> Any:
    # full round-trip precision for numpy scalars
    if hasattr(value, "item"):
        value = value.item()
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return value


def write_rows(path: Path, header: List[str], rows: Iterable[List[Any]]) -> Path:
    with path.open("w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    return path


def write_results_table(result: XAResult, path: Union[str, Path]) -> Path:
    """One row per (age, trial) comparison."""
    rows = (outcome_row(age, trial) for age in result.ages for trial in range(len(age.outcomes)))
    return write_rows(Path(path), RESULT_COLUMNS, rows)


def write_ages_table(result: XAResult, path: Union[str, Path]) -> Path:
    """One summary row per age."""
    rows = []
    for age in result.ages:
        box = age.boxplot
        rows.append([age.index, age.t_a, age.g_p, age.fisher_p,
                     "" if age.adjusted_p is None else age.adjusted_p, age.uniformity_p,
                     age.in_stripe, age.valid, box.q1, box.median, box.q3,
                     box.whisker_lo, box.whisker_hi, box.n_outliers])
    return write_rows(Path(path), AGE_COLUMNS, rows)


def write_json(data: Dict[str, Any], path: Union[str, Path]) -> Path:
    path = Path(path)
    with path.open("w") as f:
        json.dump(data, f, indent=2, sort_keys=False)
        f.write("\n")
    return path


def write_summary(result: XAResult, path: Union[str, Path]) -> Path:
    """Key-value summary: stripe, z_g, verdict and warnings."""
    return write_json(result.summary(), path)


@dataclass
class RunManifest:
    """Everything needed to regenerate the files of an output directory.

    Attributes:
        command: Subcommand name
        config: Fully resolved settings
        seed: Run seed
        inputs: SHA-256 digest of every input file, by path
        version: Tool version
        started_at: UTC start time
        finished_at: UTC end time
    """
    command: str
    config: Dict[str, Any]
    seed: Optional[int]
    inputs: Dict[str, str] = field(default_factory=dict)
    version: str = TOOL_VERSION
    started_at: str = field(default_factory=utc_now)
    finished_at: Optional[str] = None

    def add_input(self, path: Union[str, Path]) -> None:
        self.inputs[str(path)] = file_digest(path)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "version": self.version,
            "seed": self.seed,
            "config": self.config,
            "inputs": dict(self.inputs),
            "started_at": self.started_at,
            "finished_at": self.finished_at,
        }

    def write(self, path: Union[str, Path]) -> Path:
        self.finished_at = utc_now()
        return write_json(self.to_dict(), path)


def write_run(result: XAResult, out_dir: Union[str, Path], manifest: RunManifest) -> Dict[str, Path]:
    """Write the results table, age table, summary and manifest of a run.

    Returns:
        Dict[str, Path]: Written files by role
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = {
        "results": write_results_table(result, out_dir / RESULTS_FILE),
        "ages": write_ages_table(result, out_dir / AGES_FILE),
        "summary": write_summary(result, out_dir / SUMMARY_FILE),
    }
    written["manifest"] = manifest.write(out_dir / MANIFEST_FILE)
    logger.info(f"Wrote {len(written)} result files to {out_dir}")
    return written
