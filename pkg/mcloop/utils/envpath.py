import os
from pathlib import Path

from dotenv import load_dotenv

ENV_FILE_VAR = "MCLOOP_ENV_FILE"


def home_env_path() -> Path:
    return Path.home() / ".config" / "mcloop" / ".env"


def candidate_env_paths() -> list:
    """
    Search order for the active ``.env``: an explicit ``MCLOOP_ENV_FILE``, the
    working directory, then ``~/.config/mcloop``.
    """
    paths = []
    explicit = os.getenv(ENV_FILE_VAR)
    if explicit:
        paths.append(explicit)
    paths.append(".env")
    paths.append(str(home_env_path()))
    return paths


def get_env_path(create_if_not_exist: bool = False) -> str | None:
    for path in candidate_env_paths():
        if os.path.isfile(path):
            return path

    if not create_if_not_exist:
        return None

    target = home_env_path()
    target.parent.mkdir(parents=True, exist_ok=True)
    target.touch()
    return str(target)


def load_mcloop_env() -> str | None:
    """Load the active ``.env`` over the process environment; returns its path."""
    env_path = get_env_path()
    if env_path is not None:
        load_dotenv(env_path, override=True)
    return env_path
