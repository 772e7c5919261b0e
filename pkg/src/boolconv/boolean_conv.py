"""Boolean additive convolution, Boolean additive powers and Boolean multiplicative convolution.

All three act on transforms only:

* ``K_{mu + nu} = K_mu + K_nu``               (``F = F_mu + F_nu - z``)
* ``K_{mu^t} = t K_mu``                       (``F = (1 - t) z + t F_mu``)
* ``B_{mu x nu} = B_mu B_nu``, which with ``K(1/z) = 1/B(z)`` reads
  ``K_{mu x nu} = K_mu K_nu``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath as mp

from .errors import InvalidParameter, MomentError, ValidityError
from .handles import TransformHandle, as_handle
from .precision import as_mpc, as_mpf
from .transforms import eta


@dataclass(frozen=True)
class BoolAdd(TransformHandle):
    children: tuple

    def _F(self, z):
        return mp.fsum(c.F(z) for c in self.children) - (len(self.children) - 1) * z

    def moment_count(self):
        return min(c.moment_count() for c in self.children)

    def mean(self):
        return mp.fsum(c.mean() for c in self.children)

    def boolean_cumulants(self, n):
        cols = [c.boolean_cumulants(n) for c in self.children]
        return [mp.fsum(col[k] for col in cols) for k in range(n)]

    def inv_b_remainder(self, z, p):
        return mp.fsum(c.inv_b_remainder(z, p) for c in self.children)

    def support_positive(self):
        return all(c.support_positive() for c in self.children)

    def leaves(self):
        return tuple(leaf for c in self.children for leaf in c.leaves())


@dataclass(frozen=True)
class BoolAddPower(TransformHandle):
    child: TransformHandle
    t: float | str

    @property
    def _t(self):
        return as_mpf(self.t)

    def _F(self, z):
        t = self._t
        if t == 0:
            return z
        return (1 - t) * z + t * self.child.F(z)

    def moment_count(self):
        return math.inf if self._t == 0 else self.child.moment_count()

    def mean(self):
        return self._t * self.child.mean() if self._t else mp.mpf(0)

    def boolean_cumulants(self, n):
        if self._t == 0:
            return [mp.mpf(0)] * n
        return [self._t * e for e in self.child.boolean_cumulants(n)]

    def inv_b_remainder(self, z, p):
        if self._t == 0:
            return mp.mpc(0)
        return self._t * self.child.inv_b_remainder(z, p)

    def support_positive(self):
        return self._t == 0 or self.child.support_positive()

    def leaves(self):
        return self.child.leaves()


def _series_product(a, b, n):
    """First ``n`` coefficients of the product of two power series."""
    return [mp.fsum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n)]


@dataclass(frozen=True)
class BoolMult(TransformHandle):
    mu: TransformHandle
    nu: TransformHandle

    def _F(self, z):
        return z - self.mu.K(z) * self.nu.K(z)

    def moment_count(self):
        return min(self.mu.moment_count(), self.nu.moment_count())

    def mean(self):
        return self.mu.mean() * self.nu.mean()

    def boolean_cumulants(self, n):
        # 1/B = eta/z = sum e_i z^(i-1), and 1/B multiplies
        return _series_product(self.mu.boolean_cumulants(n), self.nu.boolean_cumulants(n), n)

    def inv_b_remainder(self, z, p):
        z = as_mpc(z)
        rm, rn = self.mu.inv_b_remainder(z, p), self.nu.inv_b_remainder(z, p)
        if p == 0:
            return rm * rn
        em, en = self.mu.boolean_cumulants(p), self.nu.boolean_cumulants(p)
        Pm = mp.polyval(em[::-1], z)
        Pn = mp.polyval(en[::-1], z)
        full = [mp.fsum(em[i] * en[k - i] for i in range(max(0, k - p + 1), min(k, p - 1) + 1)) for k in range(2 * p - 1)]
        # (Pm Pn - truncation to degree p-1) / z^(p-1): only degrees p..2p-2 survive
        excess = mp.polyval(full[p:][::-1], z) * z if p > 1 else mp.mpc(0)
        return excess + rm * Pn + rn * Pm + z ** (p - 1) * rm * rn

    def support_positive(self):
        return True

    def leaves(self):
        return self.mu.leaves() + self.nu.leaves()


def bool_add(*handles) -> BoolAdd:
    """Boolean additive convolution of two or more measures/handles."""
    if len(handles) == 1 and isinstance(handles[0], (list, tuple)):
        handles = tuple(handles[0])
    if len(handles) < 2:
        raise InvalidParameter("bool_add needs at least two operands")
    return BoolAdd(tuple(as_handle(h) for h in handles))


def bool_add_power(h, t) -> BoolAddPower:
    if float(t) < 0:
        raise InvalidParameter(f"Boolean powers need t >= 0 (got {t})")
    return BoolAddPower(as_handle(h), t)


@dataclass(frozen=True)
class ValidityReport:
    points: tuple
    margins: tuple
    ok: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "ok", all(m > 0 for m in self.margins))

    @property
    def failures(self):
        return [(z, m) for z, m in zip(self.points, self.margins) if not m > 0]


def default_sample(radii=None) -> list:
    """Rays ``arg z = k pi / 8`` (k = 1..7) crossed with 9 radii from 1e-3 to 10."""
    if radii is None:
        radii = [10.0 ** (-3 + k / 2) for k in range(9)]
    angles = [k * math.pi / 8 for k in range(1, 8)]
    return [complex(r * math.cos(a), r * math.sin(a)) for a in angles for r in radii]


def _arg(w):
    a = mp.arg(w)
    # the negative real axis has argument pi on both sides
    return mp.pi if (w.imag == 0 and w.real < 0) else a


def validate_mult_args(a, b, sample=None) -> ValidityReport:
    """Margins ``pi - (arg eta_a + arg eta_b - arg z)`` on a finite sample."""
    a, b = as_handle(a), as_handle(b)
    pts = default_sample() if sample is None else list(sample)
    margins = []
    for z in pts:
        z = as_mpc(z)
        m = mp.pi - (_arg(eta(a, z)) + _arg(eta(b, z)) - _arg(z))
        margins.append(float(m))
    return ValidityReport(tuple(complex(as_mpc(z)) for z in pts), tuple(margins))


def bool_mult(a, b, sample=None, check: bool = True) -> BoolMult:
    """Boolean multiplicative convolution; the second operand must have a finite mean."""
    a, b = as_handle(a), as_handle(b)
    if not (a.support_positive() and b.support_positive()):
        raise ValidityError("Boolean multiplicative convolution needs measures on [0, inf)")
    if b.moment_count() < 1:
        raise MomentError("the second operand of bool_mult must have a finite mean")
    if check:
        rep = validate_mult_args(a, b, sample)
        if not rep.ok:
            raise ValidityError(f"argument condition fails at {len(rep.failures)} sample point(s)")
    return BoolMult(a, b)
