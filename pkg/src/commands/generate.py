import argparse
import json
from pathlib import Path
from typing import Any, Dict

import numpy as np

from errors import ConfigurationError
from events.rng import RngHandle
from events.sequence_loader import InputMode, write_sequence
from generators.process_generator import GeneratorSpec, component_list
from report.writers import RunManifest
from .command import EXIT_OK, Command

# flag dest -> generator parameter
_PARAMETER_FLAGS = {
    "lam": "lambda", "mu": "mu", "theta": "theta", "beta": "beta", "rate": "rate",
    "b": "b", "s": "s", "lambda0": "lambda0", "alpha": "alpha", "a0": "a0", "b0": "b0",
    "jitter": "jitter", "log_clip": "log_clip",
}


class GenerateCommand(Command):
    """Writes one seeded realization of a synthetic process."""

    name = "generate"
    help = "Generate a realization of a synthetic event process"
    defaults = {"seed": 0}

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--kind", help="Generator kind, e.g. poisson, hawkes, exp_ar1")
        parser.add_argument("--spec-file", help="JSON generator spec instead of --kind and parameters")
        parser.add_argument("--lambda", dest="lam", type=float, help="Poisson rate")
        parser.add_argument("--mu", type=float, help="Pareto exponent")
        parser.add_argument("--theta", type=float, help="Pareto scale")
        parser.add_argument("--beta", type=float, help="AR(1) coefficient or Hawkes decay")
        parser.add_argument("--rate", type=float, help="Target event rate of exp_ar1")
        parser.add_argument("--b", type=float, help="Volatility AR(1) coefficient")
        parser.add_argument("--s", type=float, help="Volatility innovation scale")
        parser.add_argument("--log-clip", dest="log_clip", type=float,
                            help="Bound on the stochastic-volatility log-waits (default: none)")
        parser.add_argument("--lambda0", type=float, help="Hawkes baseline intensity")
        parser.add_argument("--alpha", type=float, help="Hawkes excitation")
        parser.add_argument("--a0", type=int, help="Initial colour-A balls of the urn")
        parser.add_argument("--b0", type=int, help="Initial colour-B balls of the urn")
        parser.add_argument("--component", action="append", default=None,
                            help="Superposition component as kind=...,param=value (repeatable)")
        parser.add_argument("--jitter", type=float, help="Tie-breaking noise of a superposition")
        parser.add_argument("--n", type=int, help="Number of waiting times")
        parser.add_argument("--horizon", type=float, help="Time horizon")
        parser.add_argument("--seed", type=int, default=None, help="Run seed")
        parser.add_argument("--write", choices=[m.value for m in InputMode], default=None,
                            help="Write waiting times or timestamps (default: taus with --n, "
                                 "timestamps with --horizon)")
        parser.add_argument("--out", required=True, help="Output file")

    def build_spec(self) -> GeneratorSpec:
        """Assemble the generator spec from the spec file or the flags.

        Raises:
            ConfigurationError: If neither a kind nor a spec file is given
        """
        args = self._args
        if args.spec_file:
            with Path(args.spec_file).open() as f:
                data: Dict[str, Any] = json.load(f)
        elif args.kind:
            data = {"kind": args.kind}
            for dest, name in _PARAMETER_FLAGS.items():
                value = getattr(args, dest)
                if value is not None:
                    data[name] = value
            if args.component:
                data["components"] = component_list(args.component)
        else:
            raise ConfigurationError("generate needs --kind or --spec-file")
        if args.n is not None:
            data["n"] = args.n
        if args.horizon is not None:
            data["horizon"] = args.horizon
        spec = GeneratorSpec.from_dict(data)
        if spec.n is None and spec.horizon is None:
            raise ConfigurationError("generate needs --n or --horizon")
        return spec

    def run(self) -> int:
        spec = self.build_spec()
        generator = spec.build()
        if spec.seed is not None and not self.settings.is_given("seed"):
            self.settings.values["seed"] = spec.seed
        seed = self.settings["seed"]
        rng = RngHandle(seed)
        default_mode = InputMode.TAUS if spec.n is not None else InputMode.TIMESTAMPS
        mode = InputMode(self._args.write) if self._args.write else default_mode

        if spec.n is not None and mode is InputMode.TAUS:
            values = generator.interarrivals(spec.n, rng).taus
        else:
            times = spec.realize(rng).times
            values = times if mode is InputMode.TIMESTAMPS else np.diff(times)

        out = Path(self._args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        write_sequence(out, values, header=[
            f"kind={spec.kind} parameters={json.dumps(spec.parameters, sort_keys=True)}",
            f"seed={seed} mode={mode.value}",
        ])
        manifest = RunManifest(command=self.name,
                               config={**spec.to_dict(), "write": mode.value, "out": str(out),
                                       **self.settings.to_dict()},
                               seed=seed)
        if self._args.spec_file:
            manifest.add_input(self._args.spec_file)
        manifest.write(out.with_name(out.name + ".manifest.json"))
        self._logger.info(f"Wrote {len(values)} {mode.value} of {spec.kind} to {out}")
        return EXIT_OK
