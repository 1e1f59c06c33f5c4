import argparse
import json
from pathlib import Path
from typing import List, Optional, Tuple, Union

from aging.aging import AgingMode
from errors import ConfigurationError
from events.rng import RngHandle
from events.sequence_loader import InputMode, SequenceLoader
from events.sequences import InterArrivalSequence
from generators.process_generator import GeneratorSpec, parse_inline_spec
from report.style import StyleManager
from report.writers import PLOT_FILE, RunManifest, write_run
from report.xa_plot import PlotSpec, render_xa_svg
from significance.meta_analysis import Calibration
from xa.exact import default_config, run_exact, run_exact_on_samples
from xa.pair_sources import GeneratorPairSource, realizations_summary
from xa.results import RunWarnings, XAResult
from .command import EXIT_OK, EXIT_REJECTED, Command

# Substreams of input tie-breaking, clear of the (age, trial) cell streams
JITTER_STREAM = 1 << 31


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    """Flags shared by the two aging-test commands."""
    parser.add_argument("--Ta", type=int, default=None, help="Number of ages (default: 20)")
    parser.add_argument("--ta-min", dest="ta_min", type=float, default=None,
                        help="Smallest latency (default: derived from the data)")
    parser.add_argument("--ta-max", dest="ta_max", type=float, default=None,
                        help="Largest latency (default: derived from the data)")
    parser.add_argument("--alpha", type=float, default=None, help="Significance level (default: 0.05)")
    parser.add_argument("--calibration", choices=[c.value for c in Calibration], default=None,
                        help="Null reference of the global z statistic")
    parser.add_argument("--mode", choices=[m.value for m in AgingMode], default=None,
                        help="Window placement of the aging experiment")
    parser.add_argument("--smax", type=int, default=None, help="Permutation budget (default: 1000)")
    parser.add_argument("--workers", type=int, default=None, help="Worker threads (default: 1)")
    parser.add_argument("--seed", type=int, default=None, help="Run seed")
    parser.add_argument("--out-dir", dest="out_dir", default=None, help="Output directory")
    parser.add_argument("--plot", action="store_true", default=None, help="Also write the SVG plot")
    parser.add_argument("--palette", choices=sorted(StyleManager.get_instance().palettes()),
                        default=None, help="Colour palette of the SVG plot (default: screen)")
    parser.add_argument("--input-mode", dest="input_mode",
                        choices=[m.value for m in InputMode], default=None,
                        help="Read input files as timestamps or waiting times")
    parser.add_argument("--jitter", type=float, default=None,
                        help="Break repeated timestamps with uniform noise of this width")


def finish_run(command: Command, result: XAResult, manifest: RunManifest, title: str) -> int:
    """Write the result files and turn the verdict into an exit code."""
    out_dir = command.out_dir()
    write_run(result, out_dir, manifest)
    if command.settings["plot"]:
        manager = StyleManager.get_instance()
        palettes = manager.palettes()
        if command.settings["palette"] not in palettes:
            raise ConfigurationError(
                f"palette must be one of {sorted(palettes)}, got '{command.settings['palette']}'"
            )
        manager.set_style(palettes[command.settings["palette"]])
        render_xa_svg(PlotSpec.from_result(result, title=title), out_dir / PLOT_FILE)
    verdict = "renewal rejected" if result.reject_renewal else "renewal not rejected"
    print(f"{verdict}: z_g={result.z_g:.4f} alpha={result.alpha} "
          f"valid_ages={len(result.valid_ages)}/{len(result.ages)}")
    return EXIT_REJECTED if result.reject_renewal else EXIT_OK


class XACommand(Command):
    """Runs the exact aging test on a generator or on recorded realizations."""

    name = "xa"
    help = "Exact aging test over many independent realizations"
    defaults = {
        "spec": None, "N": 100, "Ta": 20, "ta_min": None, "ta_max": None, "method": "ks",
        "alpha": 0.05, "calibration": Calibration.STRIPE_CALIBRATED.value,
        "mode": AgingMode.SEQUENTIAL.value, "smax": 1000, "workers": 1, "seed": 0,
        "out_dir": "xa_out", "plot": False, "palette": "screen", "input_mode": InputMode.TIMESTAMPS.value,
        "jitter": None,
    }

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--spec", nargs="+", default=None,
                            help="Generator (kind=poisson,lambda=1,n=3000 or a JSON spec file) "
                                 "or at least 2N recorded sequence files")
        parser.add_argument("--N", type=int, default=None, help="Trials per age (default: 100)")
        parser.add_argument("--method", choices=["ks", "permutation"], default=None,
                            help="Two-sample test (default: ks)")
        add_common_arguments(parser)

    def resolve_source(self) -> Tuple[Optional[GeneratorSpec], List[str]]:
        """Read ``--spec`` as a generator spec or as a list of input files.

        Raises:
            ConfigurationError: If no source is given
        """
        spec: Union[str, List[str], None] = self.settings["spec"]
        if not spec:
            raise ConfigurationError("xa needs --spec")
        items = [spec] if isinstance(spec, str) else list(spec)
        if len(items) == 1 and "kind=" in items[0]:
            return GeneratorSpec.from_dict(parse_inline_spec(items[0])), []
        if len(items) == 1 and items[0].endswith(".json"):
            with Path(items[0]).open() as f:
                return GeneratorSpec.from_dict(json.load(f)), items
        return None, items

    def xa_fields(self) -> dict:
        s = self.settings
        return {
            "T_a": s["Ta"], "N": s["N"], "method": s["method"], "alpha": s["alpha"],
            "calibration": s.enum("calibration", Calibration), "seed": s["seed"],
            "s_max": s["smax"], "mode": s.enum("mode", AgingMode), "workers": s["workers"],
            "t_a_min": s["ta_min"],
        }

    def run(self) -> int:
        settings = self.settings
        generator_spec, files = self.resolve_source()
        spec_seed = generator_spec.seed if generator_spec is not None else None
        if spec_seed is not None and not settings.is_given("seed"):
            settings.values["seed"] = spec_seed
        warnings = RunWarnings(self._logger)
        manifest = RunManifest(command=self.name, config=settings.to_dict(), seed=settings["seed"])
        for path in files:
            manifest.add_input(path)

        if generator_spec is not None:
            source = GeneratorPairSource(generator_spec)
            pilot = source.pilot(settings["seed"])
            L, mean_tau, p01 = realizations_summary([pilot])
            config = default_config(L, mean_tau, p01, t_a_max=settings["ta_max"],
                                    warnings=warnings, **self.xa_fields())
            manifest.config["resolved"] = {**config.to_dict(), "generator": generator_spec.to_dict()}
            result = run_exact(source, config, warnings)
            title = f"Aging test: {generator_spec.kind}"
        else:
            realizations = self.load_realizations(files)
            L, mean_tau, p01 = realizations_summary(realizations)
            config = default_config(L, mean_tau, p01, t_a_max=settings["ta_max"],
                                    warnings=warnings, **self.xa_fields())
            manifest.config["resolved"] = config.to_dict()
            result = run_exact_on_samples(realizations, config, warnings)
            title = f"Aging test: {len(realizations)} recorded sequences"
        return finish_run(self, result, manifest, title)

    def load_realizations(self, files: List[str]) -> List[InterArrivalSequence]:
        mode = self.settings.enum("input_mode", InputMode)
        jitter = self.settings["jitter"]
        seed = self.settings["seed"]
        return [SequenceLoader(path).load_interarrivals(mode, jitter,
                                                        RngHandle(seed, (JITTER_STREAM, k)))
                for k, path in enumerate(files)]
