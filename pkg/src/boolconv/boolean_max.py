"""Max convolutions of distribution functions on [0, inf): Boolean, free and classical.

Every operation is carried out on the survival function ``1 - F`` as well as on
``F``, so tails far below double-precision resolution of ``F`` itself stay
exact. A :class:`DistFunction` holds both callables.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import mpmath as mp

from .errors import DomainError, InvalidParameter
from .precision import as_mpf


@dataclass(frozen=True)
class DistFunction:
    """Distribution function ``F`` together with its survival function ``1 - F``."""

    cdf: Callable
    sf: Callable
    source: object = None

    def __call__(self, y):
        return self.cdf(y)

    def tail(self, y):
        return self.sf(y)


def from_measure(m) -> DistFunction:
    return DistFunction(lambda y: m.cdf(y), lambda y: m.tail(y), m)


def constant(F) -> DistFunction:
    """Distribution function taking the single value ``F`` (handy for scalar checks)."""
    F = as_mpf(F)
    return DistFunction(lambda y: F, lambda y: 1 - F, None)


def _odds(x, xbar):
    """``1/x - 1 = xbar / x``, infinite at ``x = 0``."""
    return mp.inf if x == 0 else xbar / x


def _bool_min_pair(a, abar, b, bbar):
    s = _odds(a, abar) + _odds(b, bbar)
    if s == mp.inf:
        return mp.mpf(0), mp.mpf(1)
    return 1 / (1 + s), s / (1 + s)


def bool_min_scalar(x, y):
    """``(x ^ y)^{-1} - 1 = (x^{-1} - 1) + (y^{-1} - 1)`` on ``[0, 1]``, 0 absorbing."""
    x, y = as_mpf(x), as_mpf(y)
    for v in (x, y):
        if not 0 <= v <= 1:
            raise InvalidParameter(f"argument {v} outside [0, 1]")
    return _bool_min_pair(x, 1 - x, y, 1 - y)[0]


def bool_max_conv(F1: DistFunction, F2: DistFunction) -> DistFunction:
    def both(y):
        return _bool_min_pair(F1.cdf(y), F1.sf(y), F2.cdf(y), F2.sf(y))

    return DistFunction(lambda y: both(y)[0], lambda y: both(y)[1])


def _check_n(n):
    if int(n) != n or n < 1:
        raise InvalidParameter(f"max powers need a positive integer n (got {n})")
    return int(n)


def bool_max_power(F: DistFunction, n: int) -> DistFunction:
    """``F / (n - (n-1) F)``; tail ``n Fbar / (1 + (n-1) Fbar)``."""
    n = _check_n(n)
    return DistFunction(
        lambda y: F.cdf(y) / (n - (n - 1) * F.cdf(y)),
        lambda y: n * F.sf(y) / (1 + (n - 1) * F.sf(y)),
    )


def free_max_power(F: DistFunction, n: int) -> DistFunction:
    """``max(n F - (n-1), 0)``; tail ``min(n Fbar, 1)``."""
    n = _check_n(n)
    return DistFunction(
        lambda y: max(n * F.cdf(y) - (n - 1), mp.mpf(0)),
        lambda y: min(n * F.sf(y), mp.mpf(1)),
    )


def classical_max_power(F: DistFunction, n: int) -> DistFunction:
    """``F^n``; tail ``1 - (1 - Fbar)^n`` evaluated without cancellation."""
    n = _check_n(n)
    return DistFunction(
        lambda y: F.cdf(y) ** n,
        lambda y: -mp.expm1(n * mp.log1p(-F.sf(y))) if F.sf(y) < 1 else mp.mpf(1),
    )


def _x_pair(F, Fbar):
    if F == 0:
        return mp.mpf(0), mp.mpf(1)
    return mp.exp(-Fbar / F), -mp.expm1(-Fbar / F)


def x_map(F: DistFunction, strict: bool = False) -> DistFunction:
    """``X(F) = exp(1 - 1/F)``; ``F = 0`` maps to 0 unless ``strict``."""

    def both(y):
        v = F.cdf(y)
        if strict and v == 0:
            raise DomainError("X is undefined where F = 0")
        return _x_pair(v, F.sf(y))

    return DistFunction(lambda y: both(y)[0], lambda y: both(y)[1])


def x_inv(F: DistFunction) -> DistFunction:
    """``X^{-1}(F) = 1 / (1 - log F)``."""

    def both(y):
        v = F.cdf(y)
        if v == 0:
            return mp.mpf(0), mp.mpf(1)
        # log F computed from the tail when F is close to 1
        lg = mp.log1p(-F.sf(y)) if F.sf(y) < mp.mpf("0.5") else mp.log(v)
        return 1 / (1 - lg), -lg / (1 - lg)

    return DistFunction(lambda y: both(y)[0], lambda y: both(y)[1])


def product(F: DistFunction, G: DistFunction) -> DistFunction:
    """Classical max convolution ``F G``."""
    return DistFunction(
        lambda y: F.cdf(y) * G.cdf(y),
        lambda y: F.sf(y) + G.sf(y) - F.sf(y) * G.sf(y),
    )
