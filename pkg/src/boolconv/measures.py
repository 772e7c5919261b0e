"""Probability measures on the real line in closed parametric or discretized form.

Every measure is an immutable (frozen, hashable) dataclass. Parameters are
stored exactly as given (int, float or decimal string) and converted to
mpmath numbers at evaluation time, so a literal such as ``"0.1"`` is read
at whatever working precision is active.

The common surface used by the rest of the package:

``tail(y)``            mass of ``(y, inf)``
``moment(k)``          :class:`MomentInfo`
``moment_count()``     largest ``p`` with a finite ``p``-th moment
``cauchy(z)``          Cauchy transform ``G(z) = int dmu(t) / (z - t)``
``psi_direct(z)``      ``int z t / (1 - z t) dmu(t)`` without going through ``G``
``psi_remainder(z,p)`` ``z * int t**(p+1) / (1 - z t) dmu(t)``, the Taylor
                       remainder of ``psi`` at 0 in cancellation-free form
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import mpmath as mp

from .errors import DomainError, InvalidParameter, MomentError, QuadratureFailure
from .precision import as_mpc, as_mpf

Number = Union[int, float, str]

MASS_TOL = 1e-12
ATOM_TOL = 1e-12


@dataclass(frozen=True)
class MomentInfo:
    order: int
    value: mp.mpf | None

    @property
    def divergent(self) -> bool:
        return self.value is None

    @property
    def finite(self) -> bool:
        return self.value is not None


def _num(x) -> Number:
    if isinstance(x, (int, float, str)):
        return x
    if isinstance(x, mp.mpf):
        return mp.nstr(x, mp.mp.dps + 5, strip_zeros=False)
    return float(x)


def _quad(f, points, what):
    value, err = mp.quad(f, points, error=True)
    scale = max(abs(value), mp.mpf(1))
    if err > mp.mpf(10) ** (-(mp.mp.dps // 2)) * scale:
        raise QuadratureFailure(f"{what}: quadrature error estimate {mp.nstr(err, 3)} too large")
    return value


class Measure:
    """Shared behaviour; concrete variants are the dataclasses below."""

    def support(self) -> tuple:
        raise NotImplementedError

    def breakpoints(self) -> tuple:
        return ()

    def has_atoms(self) -> bool:
        return False

    def atom_list(self) -> list:
        return []

    def support_positive(self) -> bool:
        return self.support()[0] >= 0

    def mean(self):
        info = self.moment(1)
        if info.divergent:
            raise MomentError(f"{self!r} has no finite mean")
        return info.value

    def moments(self, p: int) -> list:
        """``[m_1, ..., m_p]``; raises :class:`MomentError` if any diverges."""
        out = []
        for k in range(1, p + 1):
            info = self.moment(k)
            if info.divergent:
                raise MomentError(f"moment {k} of {self!r} diverges")
            out.append(info.value)
        return out

    def cdf(self, y):
        return 1 - self.tail(y)

    def psi_direct(self, z):
        raise NotImplementedError

    def psi_remainder(self, z, p: int):
        raise NotImplementedError


@dataclass(frozen=True)
class Atomic(Measure):
    """Finite sum of point masses ``sum m_i delta_{a_i}``."""

    atoms: tuple

    def __post_init__(self):
        atoms = tuple((_num(a), _num(m)) for a, m in self.atoms)
        if not atoms:
            raise InvalidParameter("Atomic needs at least one atom")
        locs = sorted(float(a) for a, _ in atoms)
        for lo, hi in zip(locs, locs[1:]):
            if hi - lo <= ATOM_TOL:
                raise InvalidParameter(f"atom locations {lo} and {hi} are not distinct")
        masses = [float(m) for _, m in atoms]
        if any(not (0 < m <= 1) for m in masses):
            raise InvalidParameter("atom masses must lie in (0, 1]")
        if abs(math.fsum(masses) - 1) > MASS_TOL:
            raise InvalidParameter(f"atom masses sum to {math.fsum(masses)}, not 1")
        object.__setattr__(self, "atoms", atoms)

    def _pairs(self):
        return [(as_mpf(a), as_mpf(m)) for a, m in self.atoms]

    def support(self):
        locs = [float(a) for a, _ in self.atoms]
        return (min(locs), max(locs))

    def breakpoints(self):
        return tuple(sorted(float(a) for a, _ in self.atoms))

    def has_atoms(self):
        return True

    def atom_list(self):
        return sorted(self._pairs())

    def tail(self, y):
        y = as_mpf(y)
        return mp.fsum(m for a, m in self._pairs() if a > y)

    def moment(self, k: int) -> MomentInfo:
        return MomentInfo(k, mp.fsum(m * a**k for a, m in self._pairs()))

    def moment_count(self):
        return math.inf

    def density(self, x):
        return mp.mpf(0)

    def cauchy(self, z):
        z = as_mpc(z)
        return mp.fsum(m / (z - a) for a, m in self._pairs())

    def psi_direct(self, z):
        z = as_mpc(z)
        return mp.fsum(m * z * a / (1 - z * a) for a, m in self._pairs())

    def psi_remainder(self, z, p):
        z = as_mpc(z)
        return z * mp.fsum(m * a ** (p + 1) / (1 - z * a) for a, m in self._pairs())


def bernoulli(a: Number = -1, b: Number = 1) -> Atomic:
    """Symmetric two-point law ``(delta_a + delta_b) / 2``."""
    return Atomic(((a, 0.5), (b, 0.5)))


def dirac(a: Number) -> Atomic:
    return Atomic(((a, 1),))


@dataclass(frozen=True)
class GridDensity(Measure):
    """Piecewise-constant density: cell ``[xs[k], xs[k+1]]`` carries mass ``ws[k]``.

    Mass beyond the last cell is zero by definition.
    """

    xs: tuple
    ws: tuple

    def __post_init__(self):
        xs = tuple(_num(x) for x in self.xs)
        ws = tuple(_num(w) for w in self.ws)
        if len(xs) < 2 or len(ws) != len(xs) - 1:
            raise InvalidParameter("GridDensity needs len(ws) == len(xs) - 1 >= 1")
        fx = [float(x) for x in xs]
        if any(b <= a for a, b in zip(fx, fx[1:])):
            raise InvalidParameter("grid must be strictly increasing")
        fw = [float(w) for w in ws]
        if any(w < 0 for w in fw):
            raise InvalidParameter("cell weights must be non-negative")
        if abs(math.fsum(fw) - 1) > MASS_TOL:
            raise InvalidParameter(f"cell weights sum to {math.fsum(fw)}, not 1")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ws", ws)

    def _cells(self):
        xs = [as_mpf(x) for x in self.xs]
        return [(xs[k], xs[k + 1], as_mpf(w)) for k, w in enumerate(self.ws)]

    def support(self):
        return (float(self.xs[0]), float(self.xs[-1]))

    def breakpoints(self):
        return tuple(float(x) for x in self.xs)

    def tail(self, y):
        y = as_mpf(y)
        total = mp.mpf(0)
        for a, b, w in self._cells():
            if y <= a:
                total += w
            elif y < b:
                total += w * (b - y) / (b - a)
        return total

    def density(self, x):
        x = as_mpf(x)
        for a, b, w in self._cells():
            if a <= x < b:
                return w / (b - a)
        return mp.mpf(0)

    def moment(self, k):
        return MomentInfo(
            k, mp.fsum(w * (b ** (k + 1) - a ** (k + 1)) / ((k + 1) * (b - a)) for a, b, w in self._cells())
        )

    def moment_count(self):
        return math.inf

    def cauchy(self, z):
        z = as_mpc(z)
        if z.imag == 0 and self.support()[0] <= float(z.real) <= self.support()[1]:
            raise DomainError("Cauchy transform of a grid density evaluated on its support")
        return mp.fsum(w / (b - a) * (mp.log(z - a) - mp.log(z - b)) for a, b, w in self._cells())

    def psi_direct(self, z):
        z = as_mpc(z)
        if z == 0:
            return mp.mpc(0)

        def prim(t):
            return -t - mp.log(1 - z * t) / z

        return mp.fsum(w / (b - a) * (prim(b) - prim(a)) for a, b, w in self._cells())

    def psi_remainder(self, z, p):
        z = as_mpc(z)
        return z * mp.fsum(
            w / (b - a) * _quad(lambda t: t ** (p + 1) / (1 - z * t), [a, b], "grid psi remainder")
            for a, b, w in self._cells()
            if w != 0
        )


@dataclass(frozen=True)
class ParetoTail(Measure):
    """Pareto law with tail ``(xm / y) ** alpha`` on ``[xm, inf)``."""

    alpha: Number
    xm: Number = 1

    def __post_init__(self):
        object.__setattr__(self, "alpha", _num(self.alpha))
        object.__setattr__(self, "xm", _num(self.xm))
        if not float(self.alpha) > 0:
            raise InvalidParameter("ParetoTail needs alpha > 0")
        if not float(self.xm) > 0:
            raise InvalidParameter("ParetoTail needs xm > 0")

    @property
    def a(self):
        return as_mpf(self.alpha)

    @property
    def scale(self):
        return as_mpf(self.xm)

    def support(self):
        return (float(self.xm), math.inf)

    def breakpoints(self):
        return (float(self.xm),)

    def tail(self, y):
        y = as_mpf(y)
        if y < self.scale:
            return mp.mpf(1)
        return (self.scale / y) ** self.a

    def density(self, x):
        x = as_mpf(x)
        if x < self.scale:
            return mp.mpf(0)
        return self.a * self.scale**self.a * x ** (-self.a - 1)

    def moment(self, k):
        if k == 0:
            return MomentInfo(0, mp.mpf(1))
        if k >= self.a:
            return MomentInfo(k, None)
        return MomentInfo(k, self.a * self.scale**k / (self.a - k))

    def moment_count(self):
        return math.ceil(float(self.alpha)) - 1

    def cauchy(self, z):
        # int_1^inf a t^(-a-1) / (u - t) dt = -a/(a+1) 2F1(1, a+1; a+2; u)
        z = as_mpc(z)
        a, c = self.a, self.scale
        u = z / c
        if u.imag == 0 and u.real >= 1:
            raise DomainError("Pareto Cauchy transform evaluated on its support")
        return -a / (a + 1) * mp.hyp2f1(1, a + 1, a + 2, u) / c

    def cauchy_quad(self, z, rel_tol=1e-12):
        """Cauchy transform by quadrature on ``[xm, M]`` plus a bounded tail.

        ``M`` is chosen so that ``|int_M^inf dmu / (z - t)| <= 2 mu(M, inf) / M``
        falls below ``rel_tol * |G|`` (``|G|`` estimated from the closed form).
        """
        z = as_mpc(z)
        a, c = self.a, self.scale
        scale = abs(self.cauchy(z))
        M = max(2 * abs(z), 2 * c)
        while 2 * (c / M) ** a / M > rel_tol * scale:
            M *= 10
        pts = [c] + [x for x in (abs(z.real), 2 * abs(z)) if c < x < M] + [M]
        f = lambda t: a * c**a * t ** (-a - 1) / (z - t)
        return _quad(f, sorted(set(pts)), "Pareto Cauchy transform")

    def psi_direct(self, z):
        z = as_mpc(z)
        a, c = self.a, self.scale
        if z == 0:
            return mp.mpc(0)
        if z.imag == 0 and z.real > 0:
            raise DomainError("psi evaluated on the positive real axis")
        f = lambda t: z * t / (1 - z * t) * a * c**a * t ** (-a - 1)
        knee = 1 / abs(z)
        pts = [c] + ([knee] if knee > c else []) + [mp.inf]
        return _quad(f, pts, "Pareto psi")

    def psi_remainder(self, z, p):
        # z * int t^(p+1)/(1 - z t) dmu = -(a/(a-p)) c^p 2F1(1, a-p; a-p+1; 1/(c z))
        if p >= self.a:
            raise MomentError(f"remainder order p={p} needs alpha > p (alpha={self.alpha})")
        z = as_mpc(z)
        a, c = self.a, self.scale
        if z == 0:
            raise DomainError("remainder evaluated at 0")
        w = 1 / (c * z)
        if w.imag == 0 and w.real >= 1:
            raise DomainError("psi remainder evaluated on the positive real axis")
        return -(a / (a - p)) * c**p * mp.hyp2f1(1, a - p, a - p + 1, w)


@dataclass(frozen=True)
class StandardCauchy(Measure):
    """Density ``1 / (pi (1 + x^2))``."""

    def support(self):
        return (-math.inf, math.inf)

    def breakpoints(self):
        return (0.0,)

    def tail(self, y):
        return mp.mpf(1) / 2 - mp.atan(as_mpf(y)) / mp.pi

    def density(self, x):
        return 1 / (mp.pi * (1 + as_mpf(x) ** 2))

    def moment(self, k):
        return MomentInfo(k, mp.mpf(1) if k == 0 else None)

    def moment_count(self):
        return 0

    def cauchy(self, z):
        z = as_mpc(z)
        if z.imag > 0:
            return 1 / (z + 1j)
        if z.imag < 0:
            return 1 / (z - 1j)
        raise DomainError("Cauchy law has full support; G is undefined on the real axis")

    def psi_direct(self, z):
        z = as_mpc(z)
        if z.imag == 0:
            raise DomainError("psi of the Cauchy law is undefined on the real axis")
        f = lambda t: z * t / (1 - z * t) / (mp.pi * (1 + t * t))
        return _quad(f, [-mp.inf, -1, 0, 1, mp.inf], "Cauchy psi")

    def psi_remainder(self, z, p):
        if p != 0:
            raise MomentError("the Cauchy law has no finite moments beyond order 0")
        z = as_mpc(z)
        return self.cauchy(1 / z) / z - 1


@dataclass(frozen=True)
class Semicircle(Measure):
    """Wigner semicircle centred at 0 with the given variance."""

    variance: Number = 1

    def __post_init__(self):
        object.__setattr__(self, "variance", _num(self.variance))
        if not float(self.variance) > 0:
            raise InvalidParameter("Semicircle needs variance > 0")

    @property
    def radius(self):
        return 2 * mp.sqrt(as_mpf(self.variance))

    def support(self):
        r = 2 * math.sqrt(float(self.variance))
        return (-r, r)

    def breakpoints(self):
        r = 2 * math.sqrt(float(self.variance))
        return (-r, 0.0, r)

    def tail(self, y):
        y, R = as_mpf(y), self.radius
        if y <= -R:
            return mp.mpf(1)
        if y >= R:
            return mp.mpf(0)
        cdf = mp.mpf(1) / 2 + (y * mp.sqrt(R * R - y * y)) / (mp.pi * R * R) + mp.asin(y / R) / mp.pi
        return 1 - cdf

    def density(self, x):
        x, R = as_mpf(x), self.radius
        if abs(x) >= R:
            return mp.mpf(0)
        return mp.sqrt(R * R - x * x) / (2 * mp.pi * as_mpf(self.variance))

    def moment(self, k):
        if k % 2:
            return MomentInfo(k, mp.mpf(0))
        n = k // 2
        return MomentInfo(k, mp.binomial(2 * n, n) / (n + 1) * as_mpf(self.variance) ** n)

    def moment_count(self):
        return math.inf

    def cauchy(self, z):
        z, v, R = as_mpc(z), as_mpf(self.variance), self.radius
        if z.imag == 0 and -R <= z.real <= R:
            raise DomainError("semicircle Cauchy transform evaluated on its support")
        # product of principal roots puts the cut exactly on [-R, R];
        # (z - s)(z + s) = 4v, and z + s does not cancel
        s = mp.sqrt(z - R) * mp.sqrt(z + R)
        return 2 / (z + s)

    def psi_direct(self, z):
        z, R = as_mpc(z), self.radius
        f = lambda t: z * t / (1 - z * t) * self.density(t)
        return _quad(f, [-R, 0, R], "semicircle psi")

    def psi_remainder(self, z, p):
        z, R = as_mpc(z), self.radius
        f = lambda t: t ** (p + 1) / (1 - z * t) * self.density(t)
        return z * _quad(f, [-R, 0, R], "semicircle psi remainder")


@dataclass(frozen=True)
class Mixture(Measure):
    """Convex combination ``sum w_i mu_i``."""

    components: tuple

    def __post_init__(self):
        comps = tuple((_num(w), m) for w, m in self.components)
        if not comps:
            raise InvalidParameter("Mixture needs at least one component")
        ws = [float(w) for w, _ in comps]
        if any(not (0 < w <= 1) for w in ws):
            raise InvalidParameter("mixture weights must lie in (0, 1]")
        if abs(math.fsum(ws) - 1) > MASS_TOL:
            raise InvalidParameter(f"mixture weights sum to {math.fsum(ws)}, not 1")
        if not all(isinstance(m, Measure) for _, m in comps):
            raise InvalidParameter("mixture components must be measures")
        object.__setattr__(self, "components", comps)

    def _parts(self):
        return [(as_mpf(w), m) for w, m in self.components]

    def support(self):
        sup = [m.support() for _, m in self.components]
        return (min(s[0] for s in sup), max(s[1] for s in sup))

    def breakpoints(self):
        return tuple(sorted({b for _, m in self.components for b in m.breakpoints()}))

    def has_atoms(self):
        return any(m.has_atoms() for _, m in self.components)

    def atom_list(self):
        merged = {}
        for w, m in self._parts():
            for a, mass in m.atom_list():
                merged[a] = merged.get(a, 0) + w * mass
        return sorted(merged.items())

    def tail(self, y):
        return mp.fsum(w * m.tail(y) for w, m in self._parts())

    def density(self, x):
        return mp.fsum(w * m.density(x) for w, m in self._parts())

    def moment(self, k):
        total = []
        for w, m in self._parts():
            info = m.moment(k)
            if info.divergent:
                return MomentInfo(k, None)
            total.append(w * info.value)
        return MomentInfo(k, mp.fsum(total))

    def moment_count(self):
        return min(m.moment_count() for _, m in self.components)

    def cauchy(self, z):
        return mp.fsum(w * m.cauchy(z) for w, m in self._parts())

    def cauchy_quad(self, z, rel_tol=1e-12):
        return mp.fsum(w * getattr(m, "cauchy_quad", m.cauchy)(z) for w, m in self._parts())

    def psi_direct(self, z):
        return mp.fsum(w * m.psi_direct(z) for w, m in self._parts())

    def psi_remainder(self, z, p):
        return mp.fsum(w * m.psi_remainder(z, p) for w, m in self._parts())


def tail(m: Measure, y) -> mp.mpf:
    """``m(y, inf)``."""
    return m.tail(y)


def moment(m: Measure, k: int) -> MomentInfo:
    if k < 0:
        raise InvalidParameter("moment order must be non-negative")
    if k == 0:
        return MomentInfo(0, mp.mpf(1))
    return m.moment(k)


def moment_count(m: Measure):
    """Largest ``p`` with a finite ``p``-th moment (``math.inf`` if all are finite)."""
    return m.moment_count()


def support_positive(m: Measure) -> bool:
    return m.support_positive()
