"""Pointwise evaluation of the transform stack G, F, K, psi, eta, B and remainder terms.

Every function accepts a *source*: either a :class:`~boolconv.measures.Measure`
or a :class:`~boolconv.handles.TransformHandle`. Both expose ``cauchy(z)``;
everything else here is derived from that, except the ``direct`` psi path
and the analytic remainders, which use the measure's own integrals.

Conventions: ``psi(z) = int z t / (1 - z t) dmu(t)``, ``eta = psi / (1 + psi)``,
``B(z) = z / eta(z)`` and ``K(z) = z - 1 / G(z)``, so that ``K(1/z) = 1/B(z)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import mpmath as mp

from .errors import CancellationWarning, DomainError, InvalidParameter, MomentError
from .precision import as_mpc

REMAINDER_KINDS = ("rG", "rPsi", "rEta", "rInvB", "rK")


@dataclass(frozen=True)
class ComplexPoint:
    """An evaluation point tagged with the region it lives in."""

    re: float
    im: float

    def __post_init__(self):
        if self.im == 0 and self.re > 0:
            pass  # positive real axis: legal for G off the support, illegal for psi

    def value(self):
        return mp.mpc(self.re, self.im)

    @property
    def half_plane(self) -> str:
        if self.im > 0:
            return "upper"
        if self.im < 0:
            return "lower"
        return "negative-real-axis" if self.re < 0 else "positive-real-axis"

    @classmethod
    def tauberian(cls, y) -> "ComplexPoint":
        """The point ``-i / y`` used by the remainder theorems."""
        return cls(0.0, -1.0 / float(y))

    def in_cone(self, kappa: float) -> bool:
        """Membership in ``{z in C^- : |Re z| < -kappa Im z}``."""
        return self.im < 0 and abs(self.re) < -kappa * self.im


def _check_off_positive_axis(z):
    if z.imag == 0 and z.real > 0:
        raise DomainError(f"psi/eta/B are undefined on the positive real axis (z={z})")


def cauchy(m, z):
    """``G(z) = int dmu(t) / (z - t)``."""
    return m.cauchy(as_mpc(z))


def f_transform(m, z):
    """Reciprocal Cauchy transform ``F = 1 / G``."""
    z = as_mpc(z)
    if hasattr(m, "F"):
        return m.F(z)
    return 1 / m.cauchy(z)


def k_transform(m, z):
    """``K(z) = z - F(z)``; additive under Boolean convolution."""
    z = as_mpc(z)
    return z - f_transform(m, z)


def psi(m, z, method: str = "auto"):
    """``psi(z) = int z t / (1 - z t) dmu(t)`` for ``z`` off the positive real axis.

    ``method="cauchy"`` uses ``psi(z) = G(1/z)/z - 1``; ``"direct"`` integrates
    against the measure; ``"auto"`` picks the first for ``|z| <= 1``.
    """
    z = as_mpc(z)
    _check_off_positive_axis(z)
    if z == 0:
        return mp.mpc(0)
    if method == "auto":
        method = "cauchy" if abs(z) <= 1 or not hasattr(m, "psi_direct") else "direct"
    if method == "cauchy":
        return cauchy(m, 1 / z) / z - 1
    if method == "direct":
        return m.psi_direct(z)
    raise InvalidParameter(f"unknown psi method {method!r}")


def eta(m, z, method: str = "auto"):
    z = as_mpc(z)
    if z == 0:
        return mp.mpc(0)
    ps = psi(m, z, method)
    return ps / (1 + ps)


def b_transform(m, z, method: str = "auto"):
    """``B(z) = z / eta(z)``; multiplicative under Boolean multiplicative convolution."""
    z = as_mpc(z)
    return z / eta(m, z, method)


def inv_b(m, z, method: str = "auto"):
    z = as_mpc(z)
    return eta(m, z, method) / z


def eta_series_coeffs(moments) -> list:
    """Taylor coefficients ``e_1..e_p`` of ``eta`` at 0 from ``m_1..m_p``.

    Formal division of ``psi = sum m_i z^i`` by ``1 + psi``: from
    ``eta (1 + psi) = psi`` one gets ``e_k = m_k - sum_{j<k} e_j m_{k-j}``.
    These are the Boolean cumulants.
    """
    m = list(moments)
    e = []
    for k in range(1, len(m) + 1):
        e.append(m[k - 1] - sum(e[j - 1] * m[k - j - 1] for j in range(1, k)))
    return e


def moments_from_eta_coeffs(coeffs) -> list:
    """Inverse of :func:`eta_series_coeffs` (``psi = eta / (1 - eta)``)."""
    e = list(coeffs)
    m = []
    for k in range(1, len(e) + 1):
        m.append(e[k - 1] + sum(e[j - 1] * m[k - j - 1] for j in range(1, k)))
    return m


@dataclass(frozen=True)
class RemainderValue:
    kind: str
    p: int
    at: complex
    value: mp.mpc

    @property
    def real(self):
        return self.value.real

    @property
    def imag(self):
        return self.value.imag


def _poly(coeffs, z, start=0):
    """``sum_k coeffs[k] z^(k+start)`` by Horner."""
    acc = mp.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc * z**start if start else acc


def _source_moments(m, p):
    if p == 0:
        return []
    if hasattr(m, "moments"):
        return m.moments(p)
    raise MomentError(f"{m!r} exposes no moments")


def _source_eta_coeffs(m, p):
    if hasattr(m, "boolean_cumulants"):
        return m.boolean_cumulants(p)
    return eta_series_coeffs(_source_moments(m, p))


def default_order(m) -> int:
    p = m.moment_count()
    if p == math.inf:
        raise InvalidParameter("all moments are finite; pass the remainder order p explicitly")
    return int(p)


def _warn_if_cancelled(full, series, what, scale=None):
    """Warn when ``full - series`` is below the absolute accuracy of ``full``.

    ``scale`` is the magnitude the absolute error of ``full`` is relative to
    (``|series|`` by default).
    """
    scale = abs(series) if scale is None else max(abs(series), scale)
    if scale == 0:
        return
    if abs(full - series) < 1e3 * mp.mp.eps * scale:
        warnings.warn(f"{what}: subtraction cancelled to working precision", CancellationWarning, stacklevel=3)


def _eta_remainder_from_psi(m, z, p, r_psi):
    # psi = P + z^p R, eta - E = [z^(p+1) N~ + z^p R (1 - E)] / (1 + psi)
    mom = _source_moments(m, p)
    e = eta_series_coeffs(mom)
    P = _poly([0] + mom, z)
    E = _poly([0] + e, z)
    # N = P - E (1 + P): coefficients of order <= p vanish identically
    one_plus_P = [1] + mom
    Ecoef = [0] + e
    N = [0] * (2 * p + 1)
    for k, c in enumerate([0] + mom):
        N[k] += c
    for i, a in enumerate(Ecoef):
        for j, b in enumerate(one_plus_P):
            N[i + j] -= a * b
    tilde = N[p + 1 :]
    ps = P + z**p * r_psi
    return (z * _poly(tilde, z) + r_psi * (1 - E)) / (1 + ps)


def _analytic(kind, m, z, p):
    if kind == "rK":
        return _analytic("rInvB", m, 1 / z, p)
    if kind == "rG":
        return _analytic("rPsi", m, 1 / z, p)
    if not hasattr(m, "psi_remainder"):
        if kind in ("rInvB", "rEta") and hasattr(m, "inv_b_remainder"):
            if kind == "rEta" and p == 0:
                return z * m.inv_b_remainder(z, 0)
            return m.inv_b_remainder(z, p)
        raise MomentError(f"no analytic remainder available for {m!r}; use method='naive'")
    _check_off_positive_axis(z)
    r_psi = m.psi_remainder(z, p)
    if kind == "rPsi":
        return r_psi
    r_eta = _eta_remainder_from_psi(m, z, p, r_psi)
    if kind == "rInvB" and p == 0:
        return r_eta / z
    return r_eta


def _naive(kind, m, z, p):
    if kind == "rG":
        mom = [mp.mpf(1)] + _source_moments(m, p)
        G = cauchy(m, z)
        series = mp.fsum(mom[i - 1] * z ** (-i) for i in range(1, p + 2))
        _warn_if_cancelled(G, series, "r_G")
        return z ** (p + 1) * (G - series)
    if kind == "rK":
        K = k_transform(m, z)
        if p == 0:
            return K
        e = _source_eta_coeffs(m, p)
        series = mp.fsum(e[i - 1] * z ** (1 - i) for i in range(1, p + 1))
        _warn_if_cancelled(K, series, "r_K", abs(z))
        return z ** (p - 1) * (K - series)
    if kind == "rPsi":
        ps = psi(m, z, "cauchy")
        if p == 0:
            return ps
        mom = _source_moments(m, p)
        series = _poly([0] + mom, z)
        # psi = z G(1/z) - 1 is accurate to one unit of |z G| ~ 1
        _warn_if_cancelled(ps, series, "r_psi", 1)
        return (ps - series) / z**p
    et = eta(m, z, "cauchy")
    if p == 0:
        return et / z if kind == "rInvB" else et
    e = _source_eta_coeffs(m, p)
    series = _poly([0] + e, z)
    _warn_if_cancelled(et, series, "r_eta", 1)
    return (et - series) / z**p


def remainder(kind: str, m, z, p: int | None = None, method: str = "analytic") -> RemainderValue:
    """Remainder term of the requested kind at ``z``.

    kinds
        ``rPsi``  ``z^-p (psi(z) - sum_{i<=p} m_i z^i)`` (``psi`` itself for p = 0)
        ``rEta``  same with ``eta`` and its coefficients ``e_i``
        ``rInvB`` equals ``rEta`` for ``p >= 1``; ``1/B = eta/z`` for ``p = 0``
        ``rG``    ``z^(p+1) (G(z) - sum_{i<=p+1} m_{i-1} z^-i)``, equal to ``rPsi(1/z)``
        ``rK``    ``rInvB(1/z)``

    ``method="analytic"`` evaluates the remainder from a cancellation-free
    representation; ``method="naive"`` subtracts the truncated series from the
    full transform and warns (:class:`CancellationWarning`) when the difference
    has lost its digits.
    """
    if kind not in REMAINDER_KINDS:
        raise InvalidParameter(f"unknown remainder kind {kind!r}")
    z = as_mpc(z)
    if p is None:
        p = default_order(m)
    if p < 0:
        raise InvalidParameter("remainder order must be non-negative")
    if method == "analytic":
        value = _analytic(kind, m, z, p)
    elif method == "naive":
        value = _naive(kind, m, z, p)
    else:
        raise InvalidParameter(f"unknown remainder method {method!r}")
    return RemainderValue(kind, p, complex(z), value)
