"""Runtime knobs: dense-table capacity and worker threads.

Precedence: explicit function/CLI argument > environment variable > default.
"""

import os

from .errors import CapacityError, InvalidArgument

VERSION = "0.1.0"
DEFAULT_CAP_N = 24
ENV_CAP_N = "BOOLSP_CAP_N"
ENV_THREADS = "BOOLSP_THREADS"


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise InvalidArgument(f"{name} must be an integer, got {raw!r}")
    if value < 1:
        raise InvalidArgument(f"{name} must be >= 1, got {value}")
    return value


def dense_cap(override=None):
    """Largest n for which dense 2^n tables may be materialized."""
    if override is not None:
        return int(override)
    return _env_int(ENV_CAP_N, DEFAULT_CAP_N)


def thread_count(override=None):
    """Worker threads for the embarrassingly parallel scans (census)."""
    if override is not None:
        return int(override)
    return _env_int(ENV_THREADS, 1)


def check_cap(n, override=None):
    cap = dense_cap(override)
    if n > cap:
        raise CapacityError(
            f"n={n} exceeds the dense-table cap {cap} "
            f"(raise via {ENV_CAP_N} or an explicit cap argument)"
        )
    if n < 1:
        raise InvalidArgument(f"n must be >= 1, got {n}")
