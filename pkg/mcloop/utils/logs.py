import logging
import os

LOG_ENV_VAR = "MCLOOP_LOG"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")
DEFAULT_LEVEL = "WARNING"

_HANDLER_NAME = "mcloop-stderr"


def resolve_level(value: str | None) -> tuple:
    """Map a MCLOOP_LOG value to (level name, valid)."""
    if value is None or value.strip() == "":
        return DEFAULT_LEVEL, True
    name = value.strip().upper()
    if name not in LOG_LEVELS:
        return DEFAULT_LEVEL, False
    return name, True


def configure_logging(level: str | None = None) -> int:
    """
    Install one stderr handler on the ``mcloop`` logger.

    Args:
        level (str, optional): Level name; defaults to the MCLOOP_LOG environment variable.

    Returns:
        int: The numeric level applied.
    """
    raw = os.getenv(LOG_ENV_VAR) if level is None else level
    name, valid = resolve_level(raw)

    logger = logging.getLogger("mcloop")
    for handler in list(logger.handlers):
        if handler.get_name() == _HANDLER_NAME:
            logger.removeHandler(handler)

    handler = logging.StreamHandler()
    handler.set_name(_HANDLER_NAME)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(handler)
    logger.setLevel(name)
    logger.propagate = False

    if not valid:
        logger.warning(f"Unknown {LOG_ENV_VAR} level {raw!r}; using {DEFAULT_LEVEL}")
    return logger.level
