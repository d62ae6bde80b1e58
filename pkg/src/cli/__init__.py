"""Command-line surface of the workbench."""

from .commands import COMMANDS, Workbench, add_subcommands, dispatch

__all__ = ["COMMANDS", "Workbench", "add_subcommands", "dispatch"]
