import importlib
import logging
import sys

import click

from config import config_manager
from utils.run_monitor import default_monitor

log = logging.getLogger("clonebench")


COMMANDS = [
    "close",
    "member",
    "check",
    "settings",
]


def configure_logging(verbose: bool) -> None:
    level = "DEBUG" if verbose else config_manager.get_str("log_level") or "WARNING"
    logging.basicConfig(stream=sys.stderr, format="[%(name)s] %(message)s", level=level, force=True)


@click.group(name="clonebench", help="Werkbank für Klone endlicher Operationen.")
@click.option("--verbose", "-v", is_flag=True, help="Diagnoseausgaben auf stderr.")
@click.option("--stats", is_flag=True, help="Laufzeitstatistik nach dem Kommando auf stderr ausgeben.")
@click.pass_context
def cli(ctx: click.Context, verbose: bool, stats: bool) -> None:
    configure_logging(verbose)
    default_monitor.slow_task_ms = config_manager.get_float("slow_task_ms")
    if stats:
        ctx.call_on_close(lambda: click.echo(default_monitor.render_table(), err=True))


def load_commands(group: click.Group) -> None:
    for extension in COMMANDS:
        try:
            module = importlib.import_module(f"commands.{extension}")
            module.setup(group)
        except Exception as exc:
            log.error("Fehler beim Laden von %s: %s", extension, exc)


load_commands(cli)


def main() -> None:
    cli(prog_name="clonebench")


if __name__ == "__main__":
    main()
