"""
Command package: one click command per subcommand.
"""

from erasefl.commands.bounds import bounds_command
from erasefl.commands.dataset import dataset_command
from erasefl.commands.run import run_command
from erasefl.commands.sweep import sweep_command

__all__ = [
    "bounds_command",
    "dataset_command",
    "run_command",
    "sweep_command",
]
