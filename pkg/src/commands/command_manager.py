import argparse
import logging
from typing import Dict, List, Optional, Type

from errors import XAError
from .command import EXIT_ERROR, Command


class CommandManager:
    """Manages the subcommands of the command-line tool.

    This class is responsible for:
    - Registering available commands
    - Building the argument parser from the registered commands
    - Dispatching a parsed invocation to its command
    - Mapping failures to the error exit code

    Attributes:
        _commands: Dictionary mapping command names to command classes
    """

    def __init__(self, description: str = "Renewal and aging tests for event sequences") -> None:
        """Initialize the command manager.

        Args:
            description: Description shown by --help
        """
        self._description = description
        self._commands: Dict[str, Type[Command]] = {}
        self._logger = logging.getLogger(__name__)

    def register_command(self, command_class: Type[Command]) -> None:
        """Register a new command type.

        Args:
            command_class: Command class to register

        Raises:
            ValueError: If the command name is already registered
        """
        if command_class.name in self._commands:
            raise ValueError(f"Command '{command_class.name}' is already registered")
        self._commands[command_class.name] = command_class

    @property
    def command_names(self) -> List[str]:
        return list(self._commands)

    def build_parser(self, parent: Optional[argparse.ArgumentParser] = None) -> argparse.ArgumentParser:
        """Build the argument parser with one subparser per command.

        Args:
            parent: Parser holding options shared by every command
        """
        parser = argparse.ArgumentParser(description=self._description,
                                         parents=[parent] if parent else [])
        subparsers = parser.add_subparsers(dest="command", required=True)
        for name, command_class in self._commands.items():
            sub = subparsers.add_parser(name, help=command_class.help,
                                        description=command_class.help)
            sub.add_argument("--config", default=None,
                             help="JSON file of settings; flags override it")
            command_class.add_arguments(sub)
        return parser

    def dispatch(self, args: argparse.Namespace) -> int:
        """Run the command selected by ``args``.

        Returns:
            int: The command's exit code, or the error code if it failed

        Raises:
            ValueError: If the command is not registered
        """
        if args.command not in self._commands:
            raise ValueError(f"Command '{args.command}' not registered")
        command = self._commands[args.command](args)
        try:
            return command.run()
        except (XAError, ValueError, OSError) as e:
            self._logger.error(f"{args.command} failed: {e}")
            return EXIT_ERROR
