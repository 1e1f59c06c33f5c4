import json
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, FrozenSet, Mapping, Optional, Tuple, Union

import numpy as np

from aging.aging import AgingMode
from errors import ConfigurationError
from significance.meta_analysis import Calibration
from significance.two_sample import DEFAULT_S_MAX, MIN_S_MAX

SEED_ENV_VAR = "XA_SEED"

XA_METHODS = ("ks", "permutation")
SINGLE_METHODS = ("auto", "permutation", "ks")
ADJUSTMENTS = ("none", "bonferroni")


@dataclass
class XAConfig:
    """Configuration of the exact aging test.

    Attributes:
        t_a_min: Smallest latency of the age grid
        t_a_max: Largest latency of the age grid
        T_a: Number of ages
        N: Trials (realization pairs) per age
        method: Two-sample test, ``ks`` or ``permutation``
        alpha: Significance level of the global verdict
        calibration: Null reference of the global z statistic
        seed: Run seed
        s_max: Permutation budget
        mode: Window placement of the aging experiment
        workers: Threads working on the (age x trial) grid
    """
    t_a_min: float
    t_a_max: float
    T_a: int = 20
    N: int = 100
    method: str = "ks"
    alpha: float = 0.05
    calibration: Calibration = Calibration.STRIPE_CALIBRATED
    seed: int = 0
    s_max: int = DEFAULT_S_MAX
    mode: AgingMode = AgingMode.SEQUENTIAL
    workers: int = 1

    def validate(self) -> None:
        """Validate the configuration.

        Raises:
            ConfigurationError: If any field is out of range
        """
        if not 0 <= self.t_a_min < self.t_a_max:
            raise ConfigurationError(
                f"Need 0 <= t_a_min < t_a_max, got {self.t_a_min}, {self.t_a_max}"
            )
        if self.T_a < 2:
            raise ConfigurationError(f"T_a must be at least 2, got {self.T_a}")
        if self.N < 2:
            raise ConfigurationError(f"N must be at least 2, got {self.N}")
        if self.method not in XA_METHODS:
            raise ConfigurationError(f"method must be one of {XA_METHODS}, got '{self.method}'")
        _check_common(self.alpha, self.s_max, self.workers, self.seed)

    def age_grid(self) -> np.ndarray:
        """Get the T_a evenly spaced latencies from t_a_min to t_a_max."""
        return np.linspace(self.t_a_min, self.t_a_max, self.T_a)

    def to_dict(self) -> Dict[str, Any]:
        """Get the JSON form of the configuration."""
        return {
            "t_a_min": self.t_a_min, "t_a_max": self.t_a_max, "T_a": self.T_a,
            "N": self.N, "method": self.method, "alpha": self.alpha,
            "calibration": self.calibration.value, "seed": self.seed,
            "s_max": self.s_max, "mode": self.mode.value, "workers": self.workers,
        }


@dataclass
class SingleConfig:
    """Configuration of the single-realization aging test.

    Attributes:
        t_w: Waiting times per window; the number of windows N follows from L
        T_a: Number of ages
        s_max: Permutation budget
        alpha: Significance level
        seed: Run seed
        adjust: ``none`` or ``bonferroni``
        method: ``auto`` (permutation, KS when both samples are large), ``permutation`` or ``ks``
        calibration: Null reference of the global z statistic
        t_a_min: Smallest latency, derived from the data when None
        t_a_max: Largest latency, derived from the data when None
        mode: Window placement of the aging experiment
        workers: Threads working on the (age x window) grid
    """
    t_w: int = 500
    T_a: int = 20
    s_max: int = DEFAULT_S_MAX
    alpha: float = 0.05
    seed: int = 0
    adjust: str = "none"
    method: str = "auto"
    calibration: Calibration = Calibration.STRIPE_CALIBRATED
    t_a_min: Optional[float] = None
    t_a_max: Optional[float] = None
    mode: AgingMode = AgingMode.SEQUENTIAL
    workers: int = 1

    def validate(self) -> None:
        """Validate the data-independent fields.

        Raises:
            ConfigurationError: If any field is out of range
        """
        if self.t_w < 50:
            raise ConfigurationError(f"t_w must be at least 50 events per window, got {self.t_w}")
        if self.T_a < 2:
            raise ConfigurationError(f"T_a must be at least 2, got {self.T_a}")
        if self.adjust not in ADJUSTMENTS:
            raise ConfigurationError(f"adjust must be one of {ADJUSTMENTS}, got '{self.adjust}'")
        if self.method not in SINGLE_METHODS:
            raise ConfigurationError(f"method must be one of {SINGLE_METHODS}, got '{self.method}'")
        if self.t_a_min is not None and self.t_a_max is not None \
                and not 0 <= self.t_a_min < self.t_a_max:
            raise ConfigurationError(
                f"Need 0 <= t_a_min < t_a_max, got {self.t_a_min}, {self.t_a_max}"
            )
        _check_common(self.alpha, self.s_max, self.workers, self.seed)

    def to_dict(self) -> Dict[str, Any]:
        """Get the JSON form of the configuration."""
        return {
            "t_w": self.t_w, "T_a": self.T_a, "s_max": self.s_max, "alpha": self.alpha,
            "seed": self.seed, "adjust": self.adjust, "method": self.method,
            "calibration": self.calibration.value, "t_a_min": self.t_a_min,
            "t_a_max": self.t_a_max, "mode": self.mode.value, "workers": self.workers,
        }


def _check_common(alpha: float, s_max: int, workers: int, seed: int) -> None:
    if not 0 < alpha < 1:
        raise ConfigurationError(f"alpha must lie in (0, 1), got {alpha}")
    if s_max < MIN_S_MAX:
        raise ConfigurationError(f"s_max must be at least {MIN_S_MAX}, got {s_max}")
    if workers < 1:
        raise ConfigurationError(f"workers must be at least 1, got {workers}")
    if not 0 <= seed < 2 ** 64:
        raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {seed}")


# Keys of the flat config file; they mirror the long flag names.
CONFIG_KEYS: Dict[str, Tuple[type, ...]] = {
    "seed": (int,),
    "N": (int,),
    "Ta": (int,),
    "ta_min": (int, float),
    "ta_max": (int, float),
    "method": (str,),
    "alpha": (float,),
    "calibration": (str,),
    "mode": (str,),
    "smax": (int,),
    "tw": (int,),
    "adjust": (str,),
    "workers": (int,),
    "plot": (bool,),
    "palette": (str,),
    "out_dir": (str,),
    "spec": (str, list),
    "input": (str,),
    "input_mode": (str,),
    "jitter": (int, float),
}


class ConfigLoader:
    """Loads run settings from a flat JSON document.

    This class is responsible for:
    - Reading the JSON object
    - Rejecting unknown keys and mistyped values
    - Handing the validated values to the settings resolution
    """

    def __init__(self, file_path: Union[str, Path]) -> None:
        """Initialize the config loader.

        Args:
            file_path: Path to the JSON config file
        """
        self._file_path = Path(file_path)
        self._logger = logging.getLogger(__name__)

    def load(self) -> Dict[str, Any]:
        """Load and validate the config file.

        Returns:
            Dict[str, Any]: Validated settings

        Raises:
            FileNotFoundError: If the config file doesn't exist
            ConfigurationError: If the document is not a flat object of known keys
        """
        if not self._file_path.exists():
            raise FileNotFoundError(f"Config file not found: {self._file_path}")
        try:
            with self._file_path.open('r') as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            self._logger.error(f"Invalid JSON format in config file: {e}")
            raise ConfigurationError(f"Invalid JSON in {self._file_path}: {e}") from e

        if not isinstance(data, dict):
            raise ConfigurationError("Config file must hold a JSON object")
        for key, value in data.items():
            if key not in CONFIG_KEYS:
                raise ConfigurationError(f"Unknown config key: {key}")
            types = CONFIG_KEYS[key]
            if isinstance(value, bool) and bool not in types:
                raise ConfigurationError(f"Invalid type for {key}: got bool")
            if not isinstance(value, types):
                expected = "/".join(t.__name__ for t in types)
                raise ConfigurationError(f"Invalid type for {key}: expected {expected}")
        self._logger.info(f"Loaded {len(data)} settings from {self._file_path}")
        return data


def resolve_settings(defaults: Mapping[str, Any], file_values: Mapping[str, Any],
                     flag_values: Mapping[str, Any],
                     environ: Optional[Mapping[str, str]] = None) -> Dict[str, Any]:
    """Merge settings: flags over config file over environment over defaults.

    Args:
        defaults: Built-in defaults
        file_values: Values from the config file
        flag_values: Parsed flags; None means the flag was not given
        environ: Environment, ``os.environ`` when None

    Returns:
        Dict[str, Any]: The resolved settings
    """
    environ = os.environ if environ is None else environ
    resolved = dict(defaults)
    if SEED_ENV_VAR in environ:
        try:
            resolved["seed"] = int(environ[SEED_ENV_VAR])
        except ValueError as e:
            raise ConfigurationError(f"{SEED_ENV_VAR} must be an integer") from e
    resolved.update(file_values)
    resolved.update({k: v for k, v in flag_values.items() if v is not None})
    return resolved


@dataclass
class RunSettings:
    """Resolved settings of one command invocation.

    Attributes:
        values: Settings after precedence resolution
        config_file: Config file the values were read from, if any
        given: Keys set by a flag, the config file or the environment
    """
    values: Dict[str, Any]
    config_file: Optional[str] = None
    given: FrozenSet[str] = frozenset()

    def is_given(self, key: str) -> bool:
        """Whether ``key`` was set anywhere but the built-in defaults."""
        return key in self.given

    def __getitem__(self, key: str) -> Any:
        return self.values[key]

    def get(self, key: str, default: Any = None) -> Any:
        return self.values.get(key, default)

    def enum(self, key: str, enum_type: Any) -> Any:
        """Get a setting as a member of ``enum_type``.

        Raises:
            ConfigurationError: If the value names no member
        """
        try:
            return enum_type(self.values[key])
        except ValueError as e:
            choices = [m.value for m in enum_type]
            raise ConfigurationError(f"{key} must be one of {choices}, got '{self.values[key]}'") from e

    def to_dict(self) -> Dict[str, Any]:
        data = dict(self.values)
        if self.config_file is not None:
            data["config_file"] = self.config_file
        return data
