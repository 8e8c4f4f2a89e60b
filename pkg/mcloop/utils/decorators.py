import functools

import numpy as np

from mcloop.exceptions import McloopError


def private(obj):
    """Mark a helper as internal; the Sphinx build skips it."""
    obj.__private_api__ = True
    return obj


def stamp_omega(tf):
    """
    Wrap a frequency-evaluable ``tf(s)`` so that library errors it raises carry
    the scalar frequency they were raised at, unless they already name one.
    """
    @functools.wraps(tf)
    def wrapper(s, *args, **kwargs):
        try:
            return tf(s, *args, **kwargs)
        except McloopError as err:
            if err.omega is None and np.ndim(s.omega) == 0:
                err.omega = float(s.omega)
            raise
    return wrapper
