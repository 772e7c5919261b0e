"""Free additive powers through subordination, the Belinschi-Nica map, and the Burgers check.

For ``t >= 1`` the free power ``mu^{boxplus t}`` has ``F_{mu^t}(z) = F_mu(omega(z))``
where the subordination function solves ``t omega = z + (t - 1) F_mu(omega)``.
The map is a holomorphic self-map of the upper half-plane, so plain
iteration from ``omega = z`` converges; averaged steps take over if it stalls.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp

from .errors import DomainError, InvalidParameter, NoConvergence
from .handles import TransformHandle, as_handle, leaf_measure
from .measures import Atomic
from .precision import as_mpc, as_mpf


@dataclass(frozen=True)
class FixedPointResult:
    omega: mp.mpc
    iterations: int
    residual: mp.mpf
    converged: bool


POLISH_EVERY = 200  # iterations between secant attempts once plain iteration is slow


def _default_tol(z):
    return 64 * mp.mp.eps * max(1, abs(z))


def subordinator(m, t, z, tol=None, max_iter: int = 4000, damping: float = 0.5) -> FixedPointResult:
    """Solve ``omega = (z + (t - 1) F(omega)) / t`` by fixed-point iteration from ``omega = z``.

    After ``max_iter // 2`` plain steps the update switches to
    ``omega <- (1 - damping) omega + damping * step``. Every ``POLISH_EVERY``
    steps a secant refinement is tried, which rescues the near-unit
    contraction close to support edges.
    """
    h = as_handle(m)
    t = as_mpf(t)
    z = as_mpc(z)
    if t < 1:
        raise InvalidParameter(f"free powers need t >= 1 (got {t})")
    if z.imag < 0:
        raise DomainError("subordination is solved in the closed upper half-plane")
    if t == 1:
        return FixedPointResult(z, 0, mp.mpf(0), True)
    point = _point_mass(h)
    if point is not None:
        # F(w) = w - a is linear, so the fixed point is explicit
        return FixedPointResult(z - (t - 1) * point, 0, mp.mpf(0), True)
    tol = _default_tol(z) if tol is None else tol
    omega = z
    res = mp.inf
    for k in range(1, max_iter + 1):
        step = (z + (t - 1) * h.F(omega)) / t
        res = abs(step - omega)
        lam = 1 if k <= max_iter // 2 else damping
        omega = omega + lam * (step - omega)
        if res <= tol:
            res = abs((z + (t - 1) * h.F(omega)) / t - omega)
            return FixedPointResult(omega, k, res, True)
        if k % POLISH_EVERY == 0:
            polished = _polish(h, t, z, omega, tol)
            if polished is not None:
                return FixedPointResult(polished[0], k, polished[1], True)
    polished = _polish(h, t, z, omega, tol)
    if polished is not None:
        return FixedPointResult(polished[0], max_iter, polished[1], True)
    result = FixedPointResult(omega, max_iter, res, False)
    raise NoConvergence(f"subordination did not converge at z={z} (residual {mp.nstr(res, 3)})", result)


def _point_mass(h):
    m = leaf_measure(h)
    if isinstance(m, Atomic):
        pairs = m.atom_list()
        if len(pairs) == 1:
            return as_mpf(pairs[0][0])
    return None


def _polish(h, t, z, omega, tol):
    """Secant refinement for the slow contraction near support edges; ``None`` if it leaves the half-plane."""
    g = lambda w: t * w - z - (t - 1) * h.F(w)
    try:
        root = mp.findroot(g, omega, solver="secant", tol=tol**2)
    except (ValueError, ZeroDivisionError, ArithmeticError):
        return None
    res = abs(g(root)) / t
    if root.imag < z.imag - tol or res > tol:
        return None
    return root, res


def free_power_F(m, t, z):
    """``F`` of ``mu^{boxplus t}`` at ``z``."""
    h = as_handle(m)
    z = as_mpc(z)
    if z.imag < 0:
        return mp.conj(free_power_F(h, t, mp.conj(z)))
    return h.F(subordinator(h, t, z).omega)


@dataclass(frozen=True)
class FreePower(TransformHandle):
    child: TransformHandle
    t: float | str

    def _F(self, z):
        return free_power_F(self.child, self.t, z)

    def moment_count(self):
        return self.child.moment_count()

    def mean(self):
        return as_mpf(self.t) * self.child.mean()

    def support_positive(self):
        return self.child.support_positive()

    def leaves(self):
        return self.child.leaves()


@dataclass(frozen=True)
class BNMap(TransformHandle):
    """``(mu^{boxplus (1+t)})^{uplus 1/(1+t)}``."""

    child: TransformHandle
    t: float | str

    def _F(self, z):
        s = 1 + as_mpf(self.t)
        if s == 1:
            return self.child.F(z)
        return z + (free_power_F(self.child, s, z) - z) / s

    def moment_count(self):
        return self.child.moment_count()

    def mean(self):
        return self.child.mean()

    def support_positive(self):
        return self.child.support_positive()

    def leaves(self):
        return self.child.leaves()


def free_power(m, t) -> FreePower:
    if float(t) < 1:
        raise InvalidParameter(f"free powers need t >= 1 (got {t})")
    return FreePower(as_handle(m), t)


def belinschi_nica(m, t) -> BNMap:
    if float(t) < 0:
        raise InvalidParameter(f"the Belinschi-Nica map needs t >= 0 (got {t})")
    return BNMap(as_handle(m), t)


def burgers_residual(m, t, z, dt=None, dz=None):
    """``|d_t h - h d_z h|`` for ``h(t, z) = F_{B_t(mu)}(z) - z`` by central differences."""
    h0 = as_handle(m)
    t, z = as_mpf(t), as_mpc(z)
    dt = as_mpf(dt) if dt is not None else mp.mpf("1e-4") * abs(z)
    dz = as_mpf(dz) if dz is not None else mp.mpf("1e-4") * abs(z)
    if t - dt < 0:
        raise InvalidParameter("central differences in t need t >= dt")

    def h(tt, zz):
        return BNMap(h0, tt).F(zz) - zz

    ht = (h(t + dt, z) - h(t - dt, z)) / (2 * dt)
    hz = (h(t, z + dz) - h(t, z - dz)) / (2 * dz)
    return abs(ht - h(t, z) * hz)
