import argparse
import logging
import sys
from typing import List, Optional

from commands import ALL_COMMANDS, EXIT_ERROR, CommandManager


def setup_logging(level: str = "INFO", log_file: Optional[str] = None) -> None:
    """Configure logging for the application.

    Log records go to stderr, and to ``log_file`` when given; stdout is left
    to command output.

    Args:
        level: Logging level name
        log_file: Optional log file path
    """
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )


def build_manager() -> CommandManager:
    """Create the command manager with every subcommand registered."""
    manager = CommandManager()
    for command_class in ALL_COMMANDS:
        manager.register_command(command_class)
    return manager


def common_options() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--log-level", default="INFO",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="Logging level (default: INFO)")
    parser.add_argument("--log-file", default=None, help="Also write the log to this file")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point of the command-line tool.

    This function:
    1. Parses the command line
    2. Sets up logging
    3. Dispatches to the selected command

    Returns:
        int: 0 when renewal is not rejected (or nothing was tested), 1 when it
            is rejected, 2 on any error
    """
    manager = build_manager()
    parser = manager.build_parser(common_options())
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else 0

    setup_logging(args.log_level, args.log_file)
    logging.info(f"Running {args.command}")
    try:
        return manager.dispatch(args)
    except Exception:
        logging.exception(f"Unexpected error while running {args.command}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
