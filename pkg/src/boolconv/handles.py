"""Lazily evaluated composition trees of transforms.

A :class:`TransformHandle` knows how to evaluate the reciprocal Cauchy
transform ``F`` of the measure it stands for at a complex point. Leaves wrap a
:class:`~boolconv.measures.Measure`; internal nodes (Boolean and free
operations) are defined in :mod:`boolconv.boolean_conv` and
:mod:`boolconv.free_additive`.

Handles are frozen dataclasses and therefore hashable. ``F`` values are
memoized per ``(handle, z, precision)`` in a process-wide LRU cache, which is
safe under concurrent reads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp

from .errors import DomainError, MomentError
from .measures import Measure
from .precision import as_mpc
from .transforms import _analytic, eta_series_coeffs, moments_from_eta_coeffs

CACHE_SIZE = 1 << 16


@lru_cache(maxsize=CACHE_SIZE)
def _cached_F(handle, z, prec):
    return handle._F(z)


class TransformHandle:
    """Common interface of every node in a composition tree."""

    # evaluation ---------------------------------------------------------
    def _F(self, z):
        raise NotImplementedError

    def F(self, z):
        """Reciprocal Cauchy transform at ``z``; lower half-plane by conjugation."""
        z = as_mpc(z)
        if z.imag < 0:
            return mp.conj(_cached_F(self, mp.conj(z), mp.mp.prec))
        return _cached_F(self, z, mp.mp.prec)

    def cauchy(self, z):
        return 1 / self.F(z)

    def K(self, z):
        z = as_mpc(z)
        return z - self.F(z)

    # metadata -----------------------------------------------------------
    def moment_count(self):
        raise NotImplementedError

    def mean(self):
        raise NotImplementedError

    def boolean_cumulants(self, n: int) -> list:
        """``e_1..e_n``, the Taylor coefficients of ``eta`` at 0."""
        raise MomentError(f"Boolean cumulants are not available for {type(self).__name__}")

    def moments(self, p: int) -> list:
        return moments_from_eta_coeffs(self.boolean_cumulants(p))

    def inv_b_remainder(self, z, p: int):
        raise MomentError(f"no analytic 1/B remainder for {type(self).__name__}")

    def support_positive(self) -> bool:
        raise NotImplementedError

    def leaves(self) -> tuple:
        raise NotImplementedError

    def breakpoints(self) -> tuple:
        return tuple(sorted({b for leaf in self.leaves() for b in leaf.measure.breakpoints()}))

    def has_atoms(self) -> bool:
        return True

    def support_hint(self) -> tuple:
        """Conservative ``(lo, hi)`` bounds on the support (infinite when unknown)."""
        return (0.0, math.inf) if self.support_positive() else (-math.inf, math.inf)


@dataclass(frozen=True)
class Leaf(TransformHandle):
    measure: Measure

    def _F(self, z):
        return 1 / self.measure.cauchy(z)

    def cauchy(self, z):
        return self.measure.cauchy(as_mpc(z))

    def moment_count(self):
        return self.measure.moment_count()

    def mean(self):
        return self.measure.mean()

    def boolean_cumulants(self, n):
        return eta_series_coeffs(self.measure.moments(n))

    def moments(self, p):
        return self.measure.moments(p)

    def inv_b_remainder(self, z, p):
        return _analytic("rInvB", self.measure, as_mpc(z), p)

    def support_positive(self):
        return self.measure.support_positive()

    def leaves(self):
        return (self,)

    def has_atoms(self):
        return self.measure.has_atoms()

    def support_hint(self):
        return self.measure.support()


def as_handle(x) -> TransformHandle:
    if isinstance(x, TransformHandle):
        return x
    if isinstance(x, Measure):
        return Leaf(x)
    raise DomainError(f"cannot build a transform handle from {x!r}")


def leaf_measure(h):
    """The wrapped measure if ``h`` is a leaf (or a bare measure), else ``None``."""
    if isinstance(h, Measure):
        return h
    if isinstance(h, Leaf):
        return h.measure
    return None
