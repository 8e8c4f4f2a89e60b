import click
from mcloop import __version__
from mcloop.clitools import bode_cli
from mcloop.clitools import configure_cli
from mcloop.clitools import cutoff_cli
from mcloop.clitools import design_cli
from mcloop.clitools import simulate_cli
from mcloop.utils.envpath import load_mcloop_env
from mcloop.utils.logs import configure_logging


@click.group()
@click.version_option(__version__, prog_name="mcloop")
def cli():
    """mcloop CLI: bidirectional molecular-communication channel analysis"""
    load_mcloop_env()
    configure_logging()


@cli.group()
def configure():
    """Configuration-related commands"""
    pass


configure.add_command(configure_cli.which)
configure.add_command(configure_cli.configure_logging_level)

cli.add_command(bode_cli.bode)
cli.add_command(cutoff_cli.cutoff)
cli.add_command(design_cli.design_check_command)
cli.add_command(simulate_cli.simulate_command)
cli.add_command(simulate_cli.compare)

if __name__ == "__main__":
    cli()
