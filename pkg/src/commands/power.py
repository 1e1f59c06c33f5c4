import argparse
from typing import List, Optional

from errors import ConfigurationError
from report.xa_plot import PowerCurveSpec, render_power_svg
from significance.meta_analysis import Calibration, GeoNull, power_lower_tailed
from .command import EXIT_OK, Command

DEFAULT_SWEEPS = {
    "N": [10, 25, 50, 100, 200, 300, 400, 500],
    "Ta": [2, 5, 10, 20, 50, 100, 200],
}


def parse_values(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise ConfigurationError(f"Sweep values must be comma-separated integers, got '{text}'") from e
    if not values or min(values) < 1:
        raise ConfigurationError(f"Sweep values must be positive integers, got '{text}'")
    return values


class PowerCommand(Command):
    """Prints the analytic power of the lower-tailed z test."""

    name = "power"
    help = "Power of the global z test against a mean geometric mean mu1"
    defaults = {"N": 100, "Ta": 20, "alpha": 0.05,
                "calibration": Calibration.STRIPE_CALIBRATED.value}

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--mu1", type=float, default=None,
                            help="Mean geometric mean under the alternative (default: null mean)")
        parser.add_argument("--N", type=int, default=None, help="Trials per age (default: 100)")
        parser.add_argument("--Ta", type=int, default=None, help="Number of ages (default: 20)")
        parser.add_argument("--alpha", type=float, default=None, help="Significance level")
        parser.add_argument("--calibration", choices=[c.value for c in Calibration], default=None)
        parser.add_argument("--sweep", choices=["N", "Ta"], default=None,
                            help="Parameter to sweep")
        parser.add_argument("--values", default=None,
                            help="Comma-separated sweep grid (default: a built-in grid)")
        parser.add_argument("--svg", default=None, help="Also draw the power curve to this file")

    def run(self) -> int:
        s = self.settings
        calibration = s.enum("calibration", Calibration)
        sweep = self._args.sweep
        grid = parse_values(self._args.values) or (DEFAULT_SWEEPS[sweep] if sweep else [None])

        rows = []
        for value in grid:
            N = value if sweep == "N" else s["N"]
            T_a = value if sweep == "Ta" else s["Ta"]
            mu1 = self._args.mu1 if self._args.mu1 is not None else GeoNull(N).mu0
            rows.append((N, T_a, mu1, power_lower_tailed(mu1, N, T_a, s["alpha"], calibration)))

        print("N\tT_a\tmu1\tpower")
        for N, T_a, mu1, power in rows:
            print(f"{N}\t{T_a}\t{mu1:.6f}\t{power:.6f}")

        if self._args.svg:
            if sweep is None:
                raise ConfigurationError("--svg needs --sweep")
            x_index = 0 if sweep == "N" else 1
            label = f"mu1={self._args.mu1}" if self._args.mu1 is not None else "mu1=mu0"
            render_power_svg(PowerCurveSpec(
                x_label=sweep,
                curves=[(label, [(float(row[x_index]), row[3]) for row in rows])],
                alpha=s["alpha"],
            ), self._args.svg)
        return EXIT_OK
