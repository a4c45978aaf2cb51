from __future__ import annotations

import click

from commands.common import EXIT_PASS, EXIT_USAGE, guarded
from config import CONFIG_SCHEMA, config_manager


def _pretty_value(value) -> str:
    if value is None or value == "":
        return "(nicht gesetzt)"
    return str(value)


@click.group(name="config", help="Einstellungen anzeigen und ändern.")
def config_group() -> None:
    pass


@config_group.command(name="show", help="Aktive Konfiguration anzeigen.")
def config_show() -> None:
    descriptions = config_manager.schema_description
    for key, value in config_manager.to_display_dict().items():
        click.echo(f"{key} = {_pretty_value(value)}  # {descriptions.get(key, '')}")


@config_group.command(name="set", help="Einen Wert setzen.")
@click.argument("key")
@click.argument("value")
@guarded
def config_set(key: str, value: str) -> int:
    key = key.lower()
    if key not in CONFIG_SCHEMA:
        click.echo(f"Unbekannter Schlüssel: {key}", err=True)
        return EXIT_USAGE
    stored = config_manager.set_value(key, value)
    click.echo(f"{key} aktualisiert: {stored}")
    return EXIT_PASS


@config_group.command(name="reload", help="Konfiguration von Disk laden.")
def config_reload() -> None:
    config_manager.load()
    click.echo("Konfiguration neu geladen.")


@config_group.command(name="reset", help="Alle Werte auf Default setzen.")
def config_reset() -> None:
    config_manager.reset()
    click.echo("Konfiguration zurückgesetzt.")


def setup(cli: click.Group) -> None:
    cli.add_command(config_group)


__all__ = ["config_group", "setup"]
