import argparse
import logging
import os
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, Optional

from config import SEED_ENV_VAR, ConfigLoader, RunSettings, resolve_settings

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_ERROR = 2


class Command(ABC):
    """Base class for all command-line subcommands.

    Each command declares its flags, the built-in defaults of the settings it
    reads and how it runs. Settings are resolved with flags over the config
    file over the environment over the defaults.

    Attributes:
        name: Subcommand name
        help: One-line description
        defaults: Built-in defaults; their keys are the settings the command reads
    """

    name: str = ""
    help: str = ""
    defaults: Dict[str, Any] = {}

    def __init__(self, args: argparse.Namespace) -> None:
        """Initialize the command.

        Args:
            args: Parsed command-line arguments
        """
        self._args = args
        self._logger = logging.getLogger(f"{__name__}.{self.name}")
        self._settings: Optional[RunSettings] = None

    @classmethod
    @abstractmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        """Declare the command's flags.

        Flags that map to settings must default to None so the resolution
        can tell them apart from flags that were not given.
        """

    @abstractmethod
    def run(self) -> int:
        """Run the command.

        Returns:
            int: Process exit code
        """

    @property
    def settings(self) -> RunSettings:
        """Get the resolved settings, loading the config file on first use."""
        if self._settings is None:
            config_file = getattr(self._args, "config", None)
            file_values = ConfigLoader(config_file).load() if config_file else {}
            file_values = {k: v for k, v in file_values.items() if k in self.defaults}
            flags = {k: v for k, v in vars(self._args).items() if k in self.defaults}
            given = set(file_values) | {k for k, v in flags.items() if v is not None}
            if SEED_ENV_VAR in os.environ:
                given.add("seed")
            self._settings = RunSettings(
                values=resolve_settings(self.defaults, file_values, flags),
                config_file=config_file,
                given=frozenset(given),
            )
        return self._settings

    def out_dir(self) -> Path:
        path = Path(self.settings["out_dir"])
        path.mkdir(parents=True, exist_ok=True)
        return path
