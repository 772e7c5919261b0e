"""Working-precision modes backed by mpmath.

All numerical code evaluates in mpmath at whatever precision is active;
``double`` corresponds to a 53-bit mantissa, ``extended`` to 40 digits.
The active precision is process-global (mpmath's context), so parallel
work is done in separate processes.
"""
from __future__ import annotations

import os
from contextlib import contextmanager

import mpmath as mp

DPS = {"double": 15, "extended": 40}


def dps_for(mode: str) -> int:
    try:
        return DPS[mode]
    except KeyError:
        raise ValueError(f"unknown precision mode {mode!r}; expected one of {sorted(DPS)}") from None


@contextmanager
def working_precision(mode: str | None):
    """Temporarily switch mpmath to the named precision mode (``None`` keeps the current one)."""
    if mode is None:
        yield
        return
    with mp.workdps(dps_for(mode)):
        yield


def current_mode() -> str:
    return "extended" if mp.mp.dps > DPS["double"] else "double"


def eps():
    return mp.mp.eps


def as_mpc(z):
    """Coerce a Python/numpy/mpmath scalar or ``ComplexPoint`` to ``mpc``."""
    if hasattr(z, "value") and callable(getattr(z, "value")):
        z = z.value()
    if isinstance(z, str):
        return mp.mpc(complex(z.replace(" ", ""))) if "j" in z else mp.mpc(mp.mpf(z))
    return mp.mpc(z)


def as_mpf(x):
    return x if isinstance(x, mp.mpf) else mp.mpf(x)


def env_override(name: str, default):
    """Numeric tolerance override from ``BOOLCONV_<NAME>`` if set."""
    raw = os.environ.get("BOOLCONV_" + name.upper())
    if raw is None:
        return default
    return type(default)(raw) if isinstance(default, (int, float)) else mp.mpf(raw)
