import argparse

from aging.aging import AgingMode
from config import SingleConfig
from errors import ConfigurationError
from events.rng import RngHandle
from events.sequence_loader import InputMode, SequenceLoader
from report.writers import RunManifest
from significance.meta_analysis import Calibration
from xa.single_realization import run_single
from .command import Command
from .xa import JITTER_STREAM, add_common_arguments, finish_run


class XASingleCommand(Command):
    """Runs the approximate aging test on one observed sequence."""

    name = "xa-single"
    help = "Approximate aging test on a single observed sequence"
    defaults = {
        "input": None, "tw": 500, "Ta": 20, "ta_min": None, "ta_max": None, "method": "auto",
        "adjust": "none", "alpha": 0.05, "calibration": Calibration.STRIPE_CALIBRATED.value,
        "mode": AgingMode.SEQUENTIAL.value, "smax": 1000, "workers": 1, "seed": 0,
        "out_dir": "xa_single_out", "plot": False, "palette": "screen", "input_mode": InputMode.TAUS.value,
        "jitter": None,
    }

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--input", default=None, help="Observed sequence file")
        parser.add_argument("--tw", type=int, default=None,
                            help="Waiting times per window (default: 500)")
        parser.add_argument("--adjust", choices=["none", "bonferroni"], default=None,
                            help="Multiple-testing adjustment of the per-age p-values")
        parser.add_argument("--method", choices=["auto", "permutation", "ks"], default=None,
                            help="Two-sample test (default: auto)")
        add_common_arguments(parser)

    def run(self) -> int:
        s = self.settings
        if not s["input"]:
            raise ConfigurationError("xa-single needs --input")
        taus = SequenceLoader(s["input"]).load_interarrivals(
            s.enum("input_mode", InputMode), s["jitter"], RngHandle(s["seed"], (JITTER_STREAM, 0))
        )
        config = SingleConfig(
            t_w=s["tw"], T_a=s["Ta"], s_max=s["smax"], alpha=s["alpha"], seed=s["seed"],
            adjust=s["adjust"], method=s["method"], calibration=s.enum("calibration", Calibration),
            t_a_min=s["ta_min"], t_a_max=s["ta_max"], mode=s.enum("mode", AgingMode),
            workers=s["workers"],
        )
        result = run_single(taus, config)
        manifest = RunManifest(command=self.name, config=s.to_dict(), seed=s["seed"])
        manifest.add_input(s["input"])
        manifest.config["resolved"] = result.config.to_dict()
        return finish_run(self, result, manifest, f"Single-realization aging test ({len(taus)} waits)")
