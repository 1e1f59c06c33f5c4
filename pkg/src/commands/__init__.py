from .command import EXIT_ERROR, EXIT_OK, EXIT_REJECTED, Command
from .command_manager import CommandManager
from .generate import GenerateCommand
from .power import PowerCommand
from .xa import XACommand
from .xa_single import XASingleCommand

ALL_COMMANDS = [GenerateCommand, XACommand, XASingleCommand, PowerCommand]

__all__ = [
    'EXIT_ERROR', 'EXIT_OK', 'EXIT_REJECTED', 'Command', 'CommandManager',
    'GenerateCommand', 'PowerCommand', 'XACommand', 'XASingleCommand', 'ALL_COMMANDS',
]
