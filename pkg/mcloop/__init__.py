try:
    from .version import __version__
except ImportError:
    try:
        from importlib.metadata import version
        __version__ = version("mcloop")
    except ImportError:
        __version__ = "0.0.0"

__all__ = ["__version__"]
