import click
from dotenv import get_key, set_key

from mcloop.utils.envpath import get_env_path
from mcloop.utils.logs import LOG_ENV_VAR, LOG_LEVELS


@click.command("logging")
@click.argument("level", type=click.Choice(LOG_LEVELS, case_sensitive=False))
def configure_logging_level(level):
    """Set the default mcloop log level"""
    env_path = get_env_path(create_if_not_exist=True)

    existing = get_key(env_path, LOG_ENV_VAR)
    if existing is not None:
        click.echo(f"Replacing {LOG_ENV_VAR}={existing}")

    set_key(env_path, LOG_ENV_VAR, level.upper())
    click.echo(f"Configuration updated: {env_path}")


@click.command("which")
def which():
    """Display active mcloop environment file"""
    env_path = get_env_path()

    if env_path is not None:
        click.echo(f"Using configuration from: {env_path}")
    else:
        click.echo("Configuration file does not exist. Using env variables if present.")
