"""Optional numba acceleration.

Set ``SUPERINT_DISABLE_NUMBA=1`` to run every kernel as plain Python over
numpy arrays. The same source is used for both paths, so results agree to
rounding.
"""

import os

_flag = os.environ.get("SUPERINT_DISABLE_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _flag not in ("", "0", "false", "no")

try:
    import numba as _numba
except ImportError:  # pragma: no cover - exercised only without numba
    _numba = None

NUMBA_ENABLED = _numba is not None and not DISABLED_BY_ENV


def njit(*args, **kwargs):
    """``numba.njit`` when acceleration is on, identity otherwise.

    Works both bare (``@njit``) and with options (``@njit(cache=True)``).
    Un-jitted functions still expose ``py_func`` so callers can always
    reach the interpreted path.
    """
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return _wrap(args[0], {})

    def deco(fn):
        return _wrap(fn, kwargs)

    return deco


def _wrap(fn, options):
    if NUMBA_ENABLED:
        return _numba.njit(**options)(fn)
    fn.py_func = fn
    return fn
