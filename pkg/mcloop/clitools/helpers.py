import functools
import logging
import os
import sys

import click
from rocrate.rocrate import ROCrate

from mcloop.config import RunConfig
from mcloop.exceptions import (
    ConfigError, DenominatorUnderflow, EvaluationError, FeedbackSingular, InvalidParam,
    NoCrossing, NotSettled, SingularResolvent, Unstable
)
from mcloop.utils.files import write_csv_atomic, write_json_atomic

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_CONFIG = 2
EXIT_EVALUATION = 3
EXIT_NO_CROSSING = 4
EXIT_SIMULATION = 5

# most specific first
ERROR_EXIT_CODES = (
    ((ConfigError, InvalidParam), EXIT_CONFIG),
    ((DenominatorUnderflow, SingularResolvent, FeedbackSingular, EvaluationError), EXIT_EVALUATION),
    ((NoCrossing,), EXIT_NO_CROSSING),
    ((NotSettled, Unstable), EXIT_SIMULATION),
)

ENCODING_FORMATS = {
    ".csv": "text/csv",
    ".json": "application/json",
}


def exit_code_for(err: Exception) -> int | None:
    for types, code in ERROR_EXIT_CODES:
        if isinstance(err, types):
            return code
    return None


def handle_errors(command):
    """Echo library errors as ``Error: <message>`` on stderr and exit with the mapped code."""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except click.exceptions.Exit:
            raise
        except Exception as err:
            code = exit_code_for(err)
            if code is None:
                raise
            logger.debug("Command failed", exc_info=True)
            click.echo(f"Error: {err}", err=True)
            sys.exit(code)
    return wrapper


def load_run_config(config_path: str, out_dir: str | None = None, crate: bool = False) -> tuple:
    """Validated RunConfig plus the resolved output directory and crate flag."""
    cfg = RunConfig.load(config_path)
    out = out_dir if out_dir is not None else cfg.output.dir
    os.makedirs(out, exist_ok=True)
    return cfg, out, crate or cfg.output.crate


def distance_tag(L: float) -> str:
    return f"L{L:g}um"


class OutputSet:
    """Files written by one command, optionally packaged as an RO-Crate."""

    def __init__(self, out_dir: str, command: str):
        self.out_dir = out_dir
        self.command = command
        self.files = []

    def path(self, filename: str) -> str:
        return os.path.join(self.out_dir, filename)

    def csv(self, df, filename: str, description: str) -> str:
        path = write_csv_atomic(df, self.path(filename))
        self._record(path, description)
        return path

    def json(self, data, filename: str, description: str) -> str:
        path = write_json_atomic(data, self.path(filename))
        self._record(path, description)
        return path

    def _record(self, path: str, description: str):
        self.files.append((path, description))
        logger.info(f"Wrote {path}")

    def write_crate(self) -> str:
        return generate_crate(self.out_dir, self.files, self.command)


def generate_crate(out_dir: str, files: list, command: str) -> str:
    """Package ``files`` (path, description pairs) into ``<out_dir>/mcloop_crate``."""
    crate = ROCrate()
    for path, description in files:
        extension = os.path.splitext(path)[1]
        crate.add_file(
            path,
            properties={
                "name": f"mcloop {command} ({os.path.basename(path)})",
                "description": description,
                "encodingFormat": ENCODING_FORMATS.get(extension, "application/octet-stream"),
            }
        )

    crate_path = os.path.join(out_dir, "mcloop_crate")
    os.makedirs(crate_path, exist_ok=True)
    crate.write(crate_path)
    logger.info(f"Wrote RO-Crate to {crate_path}")
    return crate_path


def finish(outputs: OutputSet, crate: bool):
    for path, _ in outputs.files:
        click.echo(f"Wrote {path}")
    if crate:
        click.echo(f"RO-Crate: {outputs.write_crate()}")


def common_options(command):
    command = click.option("--crate", is_flag=True, default=False, help="Package outputs as an RO-Crate")(command)
    command = click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
                           help="Output directory (overrides output.dir)")(command)
    command = click.option("--config", "config_path", type=click.Path(dir_okay=False), required=True,
                           help="YAML or JSON run configuration")(command)
    return command
