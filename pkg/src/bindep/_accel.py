"""Backend selection for the compiled kernels.

Numba is used when importable unless ``BINDEP_DISABLE_NUMBA`` is set to a
truthy value, in which case every kernel dispatches to its numpy twin.
"""

import os

_FALSY = {"", "0", "false", "no", "off"}

DISABLED_BY_ENV = os.environ.get("BINDEP_DISABLE_NUMBA", "").strip().lower() not in _FALSY

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not DISABLED_BY_ENV


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, otherwise the identity decorator.

    Compiled functions are always created (so both backends stay testable in
    one process); ``USE_NUMBA`` only controls which one the public kernels call.
    """
    if not HAVE_NUMBA:
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f
    kwargs.setdefault("cache", True)
    return numba.njit(*args, **kwargs)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
