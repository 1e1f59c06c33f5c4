import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Type

import numpy as np

from aging.analytic import ParetoLaw
from errors import ConfigurationError, ValidationError
from events.rng import RngHandle
from events.sequences import EventSequence, InterArrivalSequence, from_interarrivals
from generators import processes

_MAX_HORIZON_ATTEMPTS = 32


class BaseProcessGenerator(ABC):
    """Base class for all synthetic event generators.

    Subclasses produce either a number of waiting times or the events on a
    time horizon and get the other view from this class. Generators hold
    only parameters, so one instance can serve many worker threads.
    """

    kind: str = ""
    required: Dict[str, type] = {}
    optional: Dict[str, type] = {}

    def __init__(self, parameters: Dict[str, Any]) -> None:
        """Initialize the generator.

        Args:
            parameters: Kind-specific parameters

        Raises:
            ValidationError: If a parameter is missing, unknown, or mistyped
        """
        self._parameters = self._validate(parameters)

    def _validate(self, parameters: Dict[str, Any]) -> Dict[str, Any]:
        known = {**self.required, **self.optional}
        for name in parameters:
            if name not in known:
                raise ValidationError(f"Unknown parameter '{name}' for kind '{self.kind}'")
        validated = {}
        for name, kind in known.items():
            if name not in parameters:
                if name in self.required:
                    raise ValidationError(f"Missing required parameter '{name}' for kind '{self.kind}'")
                continue
            value = parameters[name]
            if kind is float and isinstance(value, int) and not isinstance(value, bool):
                value = float(value)
            if not isinstance(value, kind) or isinstance(value, bool):
                raise ValidationError(
                    f"Invalid type for '{name}': expected {kind.__name__}, got {type(value).__name__}"
                )
            validated[name] = value
        return validated

    @property
    def parameters(self) -> Dict[str, Any]:
        """Get a copy of the validated parameters."""
        return dict(self._parameters)

    @abstractmethod
    def interarrivals(self, n: int, rng: RngHandle) -> InterArrivalSequence:
        """Generate ``n`` waiting times."""

    def events(self, n: int, rng: RngHandle) -> EventSequence:
        """Generate ``n + 1`` events starting with one at the origin."""
        return from_interarrivals(self.interarrivals(n, rng), 0.0, include_origin=True)

    def events_until(self, horizon: float, rng: RngHandle) -> EventSequence:
        """Generate the events in ``[0, horizon]``.

        Waiting times are drawn in growing batches, each from its own
        substream, until their sum passes the horizon.
        """
        if horizon <= 0:
            raise ValidationError(f"Horizon must be positive, got {horizon}")
        n = max(16, int(math.ceil(2 * horizon / self.mean_interarrival())))
        for attempt in range(_MAX_HORIZON_ATTEMPTS):
            events = self.events(n, rng.child(attempt))
            if events.times[-1] > horizon:
                return EventSequence(events.times[events.times <= horizon], origin=0.0)
            n *= 2
        raise ValidationError(f"{self.kind} did not reach horizon {horizon}")

    def mean_interarrival(self) -> float:
        """Get the expected waiting time, used to size batches."""
        return 1.0

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self._parameters})"


class PoissonGenerator(BaseProcessGenerator):
    """Exponential renewal process."""
    kind = "poisson"
    required = {"lambda": float}

    def interarrivals(self, n: int, rng: RngHandle) -> InterArrivalSequence:
        return processes.gen_poisson(self._parameters["lambda"], n, rng)

    def mean_interarrival(self) -> float:
        return 1.0 / self._parameters["lambda"]


class ParetoRenewalGenerator(BaseProcessGenerator):
    """Power-law renewal process."""
    kind = "pareto_renewal"
    required = {"mu": float}
    optional = {"theta": float}

    def __init__(self, parameters: Dict[str, Any]) -> None:
        super().__init__(parameters)
        self._law = ParetoLaw(self._parameters["mu"], self._parameters.get("theta", 1.0))

    def interarrivals(self, n: int, rng: RngHandle) -> InterArrivalSequence:
        return processes.gen_pareto_renewal(self._law, n, rng)

    def mean_interarrival(self) -> float:
        # median-based sizing when the mean diverges
        if self._law.mu <= 2:
            return self._law.theta * (2 ** (1 / (self._law.mu - 1)) - 1)
        return self._law.mean


class AbsAR1Generator(BaseProcessGenerator):
    """Absolute value of a stationary AR(1)."""
    kind = "abs_ar1"
    required = {"beta": float}

    def __init__(self, parameters: Dict[str, Any]) -> None:
        super().__init__(parameters)
        processes.check_ar1(self._parameters["beta"])

    def interarrivals(self, n: int, rng: RngHandle) -> InterArrivalSequence:
        return processes.gen_abs_ar1(self._parameters["beta"], n, rng)

    def mean_interarrival(self) -> float:
        beta = self._parameters["beta"]
        return math.sqrt(2 / math.pi) / math.sqrt(1 - beta ** 2)


class ExpAR1Generator(BaseProcessGenerator):
    """Exponential of a stationary AR(1)."""
    kind = "exp_ar1"
    required = {"beta": float}
    optional = {"rate": float}

    def __init__(self, parameters: Dict[str, Any]) -> None:
        super().__init__(parameters)
        processes.check_ar1(self._parameters["beta"])

    def interarrivals(self, n: int, rng: RngHandle) -> InterArrivalSequence:
        return processes.gen_exp_ar1(self._parameters["beta"], n, rng,
                                     rate=self._parameters.get("rate"))

    def mean_interarrival(self) -> float:
        if "rate" in self._parameters:
            return 1.0 / self._parameters["rate"]
        return processes.exp_ar1_mean(self._parameters["beta"])


class StochVolGenerator(BaseProcessGenerator):
    """Uncorrelated but dependent stochastic-volatility intervals."""
    kind = "stoch_vol"
    required = {"b": float, "s": float}
    optional = {"log_clip": float}

    def __init__(self, parameters: Dict[str, Any]) -> None:
        super().__init__(parameters)
        processes.check_ar1(self._parameters["b"])

    def interarrivals(self, n: int, rng: RngHandle) -> InterArrivalSequence:
        p = self._parameters
        return processes.gen_stoch_vol(p["b"], p["s"], n, rng, log_clip=p.get("log_clip"))

    def mean_interarrival(self) -> float:
        # the mean diverges once s^2 / (1 - b^2) >= 1; the median is always 1
        return 1.0


class HawkesGenerator(BaseProcessGenerator):
    """Self-exciting process with a single exponential kernel."""
    kind = "hawkes"
    required = {"lambda0": float, "alpha": float, "beta": float}

    def __init__(self, parameters: Dict[str, Any]) -> None:
        super().__init__(parameters)
        processes.check_hawkes(self._parameters["lambda0"], self._parameters["alpha"],
                                self._parameters["beta"])

    def events_until(self, horizon: float, rng: RngHandle) -> EventSequence:
        p = self._parameters
        return processes.gen_hawkes(p["lambda0"], p["alpha"], p["beta"], horizon, rng)

    def interarrivals(self, n: int, rng: RngHandle) -> InterArrivalSequence:
        horizon = 2.0 * (n + 1) * self.mean_interarrival()
        for attempt in range(_MAX_HORIZON_ATTEMPTS):
            events = self.events_until(horizon, rng.child(attempt))
            if len(events) > n:
                return InterArrivalSequence(np.diff(events.times[:n + 1]))
            horizon *= 2
        raise ValidationError(f"Hawkes process produced fewer than {n + 1} events")

    def mean_interarrival(self) -> float:
        p = self._parameters
        rate = processes.hawkes_mean_rate(p["lambda0"], p["alpha"], p["beta"])
        return 1.0 / (p["lambda0"] if math.isinf(rate) else rate)


class SuperpositionGenerator(BaseProcessGenerator):
    """Pooled events of independent component processes."""
    kind = "superposition"
    required = {"components": list}
    optional = {"jitter": float}

    def __init__(self, parameters: Dict[str, Any]) -> None:
        super().__init__(parameters)
        components = self._parameters["components"]
        if len(components) < 2:
            raise ValidationError("Superposition needs at least two components")
        self._components = [GeneratorSpec.from_dict(c).build() for c in components]

    def events_until(self, horizon: float, rng: RngHandle) -> EventSequence:
        pooled = self._component_events(0, horizon, rng)
        for index in range(1, len(self._components)):
            pooled = processes.gen_superposition(
                pooled, self._component_events(index, horizon, rng),
                jitter=self._parameters.get("jitter"), rng=rng.child(len(self._components)),
            )
        return pooled

    def _component_events(self, index: int, horizon: float, rng: RngHandle) -> EventSequence:
        # drop the event every component places at the origin
        events = self._components[index].events_until(horizon, rng.child(index))
        return EventSequence(events.times[events.times > events.origin], origin=events.origin)

    def interarrivals(self, n: int, rng: RngHandle) -> InterArrivalSequence:
        horizon = 2.0 * (n + 1) * self.mean_interarrival()
        for attempt in range(_MAX_HORIZON_ATTEMPTS):
            events = self.events_until(horizon, rng.child(attempt))
            if len(events) > n:
                return InterArrivalSequence(np.diff(events.times[:n + 1]))
            horizon *= 2
        raise ValidationError(f"Superposition produced fewer than {n + 1} events")

    def mean_interarrival(self) -> float:
        return 1.0 / sum(1.0 / c.mean_interarrival() for c in self._components)


class PolyaUrnGenerator(BaseProcessGenerator):
    """Events at the colour-A draws of a Polya urn."""
    kind = "polya_urn"
    required = {"a0": int, "b0": int}

    def interarrivals(self, n: int, rng: RngHandle) -> InterArrivalSequence:
        p = self._parameters
        # draw until n + 1 colour-A draws are seen
        draws = 2 * (n + 1)
        for attempt in range(_MAX_HORIZON_ATTEMPTS):
            events = processes.gen_polya_urn(p["a0"], p["b0"], draws, rng.child(attempt)).events
            if len(events) > n:
                return InterArrivalSequence(np.diff(events.times[:n + 1]))
            draws *= 2
        raise ValidationError(f"Polya urn produced fewer than {n + 1} colour-A draws")

    def events_until(self, horizon: float, rng: RngHandle) -> EventSequence:
        p = self._parameters
        draws = int(math.floor(horizon)) + 1
        return processes.gen_polya_urn(p["a0"], p["b0"], draws, rng).events


GENERATOR_KINDS: Dict[str, Type[BaseProcessGenerator]] = {
    cls.kind: cls for cls in (
        PoissonGenerator, ParetoRenewalGenerator, AbsAR1Generator, ExpAR1Generator,
        StochVolGenerator, HawkesGenerator, SuperpositionGenerator, PolyaUrnGenerator,
    )
}


@dataclass
class GeneratorSpec:
    """Serializable description of a synthetic source.

    Attributes:
        kind: Generator kind, a key of ``GENERATOR_KINDS``
        parameters: Kind-specific parameters
        n: Number of waiting times per realization
        horizon: Time horizon per realization, used when ``n`` is None
        seed: Default run seed
    """
    kind: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    n: Optional[int] = None
    horizon: Optional[float] = None
    seed: Optional[int] = None

    def validate(self) -> None:
        """Check the kind and the length fields.

        Raises:
            ValidationError: If the spec is not admissible
        """
        if self.kind not in GENERATOR_KINDS:
            raise ValidationError(
                f"Unknown generator kind '{self.kind}', expected one of {sorted(GENERATOR_KINDS)}"
            )
        if self.n is not None and self.n < 1:
            raise ValidationError(f"n must be at least 1, got {self.n}")
        if self.horizon is not None and self.horizon <= 0:
            raise ValidationError(f"horizon must be positive, got {self.horizon}")

    def build(self) -> BaseProcessGenerator:
        """Instantiate the generator described by this spec."""
        self.validate()
        return GENERATOR_KINDS[self.kind](self.parameters)

    def realize(self, rng: RngHandle) -> EventSequence:
        """Generate one realization of the configured length.

        Raises:
            ConfigurationError: If neither ``n`` nor ``horizon`` is set
        """
        generator = self.build()
        if self.n is not None:
            return generator.events(self.n, rng)
        if self.horizon is not None:
            return generator.events_until(self.horizon, rng)
        raise ConfigurationError(f"Generator spec '{self.kind}' needs n or horizon")

    def realize_interarrivals(self, rng: RngHandle) -> InterArrivalSequence:
        """Generate the waiting times of one realization.

        With ``n`` set the waits are drawn directly and never pass through
        absolute times; they are the draws behind ``realize(rng)``.

        Raises:
            ConfigurationError: If neither ``n`` nor ``horizon`` is set
        """
        if self.n is not None:
            return self.build().interarrivals(self.n, rng)
        return InterArrivalSequence(np.diff(self.realize(rng).times))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GeneratorSpec":
        """Build a spec from its JSON form.

        Keys other than ``kind``, ``n``, ``horizon`` and ``seed`` are read as
        parameters unless a ``parameters`` object is given.
        """
        if not isinstance(data, dict) or "kind" not in data:
            raise ValidationError("Generator spec must be an object with a 'kind'")
        reserved = {"kind", "n", "horizon", "seed", "parameters"}
        parameters = dict(data.get("parameters", {}))
        parameters.update({k: v for k, v in data.items() if k not in reserved})
        spec = cls(kind=data["kind"], parameters=parameters, n=data.get("n"),
                   horizon=data.get("horizon"), seed=data.get("seed"))
        spec.validate()
        return spec

    def to_dict(self) -> Dict[str, Any]:
        """Get the JSON form of this spec."""
        data: Dict[str, Any] = {"kind": self.kind, "parameters": dict(self.parameters)}
        for name in ("n", "horizon", "seed"):
            value = getattr(self, name)
            if value is not None:
                data[name] = value
        return data


def parse_inline_spec(text: str) -> Dict[str, Any]:
    """Parse ``kind=poisson,lambda=1,n=3000`` into a spec dictionary."""
    data: Dict[str, Any] = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        if "=" not in item:
            raise ValidationError(f"Expected key=value in generator spec, got '{item}'")
        key, raw = (s.strip() for s in item.split("=", 1))
        data[key] = _parse_scalar(raw)
    return data


def _parse_scalar(raw: str) -> Any:
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            continue
    return raw


def component_list(specs: List[str]) -> List[Dict[str, Any]]:
    """Parse inline component specs of a superposition."""
    return [parse_inline_spec(text) for text in specs]
