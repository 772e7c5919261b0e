"""Stieltjes inversion of transform handles: densities, atoms, tail mass and total mass.

The density is ``-Im G(x + i eps) / pi`` extrapolated to ``eps = 0``
(polynomial extrapolation in ``eps`` over the profile's schedule; the
expansion of ``Im G(x + i eps)`` has odd as well as even powers of ``eps``).
``eps`` is taken relative to ``max(1, |x|)`` so the smoothing is scale-aware
in heavy tails. Atoms are the real zeros of ``F``; the mass of an atom at
``x0`` is the extrapolated limit of ``-eps Im G(x0 + i eps)``. Integrals
subtract the poles of detected atoms from ``G`` first, so the remaining
density is smooth through the atom locations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import mpmath as mp
import numpy as np

from .errors import AtomProximity, FitError, InvalidParameter
from .handles import as_handle, leaf_measure
from .precision import as_mpf, current_mode, env_override

ATOM_SIGNAL = 1e-2   # eps |G| above this means an atom is too close for density evaluation
MASS_FLOOR = 1e-10   # smaller extrapolated masses are not reported as atoms
EDGE_FLOOR = 1e-9    # density below this counts as outside the support when locating edges
EDGE_SCAN = 401
EDGE_EPS_SCALE = 1e-3


@dataclass(frozen=True)
class InversionProfile:
    eps_schedule: tuple = (1e-2, 1e-3, 1e-4)
    order: int = 2
    clip_negative: bool = True
    nodes_per_interval: int = 20
    span: float = 1e3
    scan_points: int = 2001

    def __post_init__(self):
        eps = [float(e) for e in self.eps_schedule]
        if len(eps) < 2:
            raise InvalidParameter("an eps schedule needs at least two levels")
        if any(e <= 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
            raise InvalidParameter("eps schedule must be positive and strictly decreasing")
        if not 1 <= self.order <= len(eps) - 1:
            raise InvalidParameter("extrapolation order must be between 1 and len(schedule) - 1")

    @classmethod
    def for_precision(cls, mode: str | None = None) -> "InversionProfile":
        mode = mode or current_mode()
        if mode == "extended":
            return cls(eps_schedule=(1e-12, 1e-13), order=1, span=1e5)
        # the class default leaves ~1e-4 relative error on tails at y ~ 1e3
        sched = tuple(env_override("eps_" + str(k), e) for k, e in enumerate((1e-5, 1e-6, 1e-7)))
        return cls(eps_schedule=sched, span=1e5)


def _profile(prof):
    return InversionProfile.for_precision() if prof is None else prof


def _neville_at_zero(xs, ys):
    """Value at 0 of the interpolating polynomial through ``(xs, ys)``."""
    p = list(ys)
    n = len(xs)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = (xs[i + k] * p[i] - xs[i] * p[i + 1]) / (xs[i + k] - xs[i])
    return p[0]


def _levels(prof, x):
    scale = max(mp.mpf(1), abs(as_mpf(x)))
    eps = [as_mpf(e) * scale for e in prof.eps_schedule]
    return eps[-(prof.order + 1):]


def density_at(h, x, prof: InversionProfile | None = None, clipped: list | None = None, poles=()):
    """``-(1/pi) Im G(x + i0)`` by extrapolation over the eps schedule.

    Negative extrapolated values are clipped to 0 when the profile says so;
    their magnitude is appended to ``clipped`` if a list is supplied.
    ``poles`` are ``(location, mass)`` atoms whose ``mass / (z - location)``
    is removed from ``G`` before inverting.
    """
    h, prof = as_handle(h), _profile(prof)
    x = as_mpf(x)
    eps = _levels(prof, x)
    vals = [h.cauchy(mp.mpc(x, e)) for e in eps]
    if poles:
        vals = [g - mp.fsum(m / (mp.mpc(x, e) - a) for a, m in poles) for g, e in zip(vals, eps)]
    if eps[-1] * abs(vals[-1]) > ATOM_SIGNAL:
        raise AtomProximity(f"an atom lies within reach of the smoothing at x={mp.nstr(x, 8)}")
    d = _neville_at_zero(eps, [-g.imag / mp.pi for g in vals])
    if d < 0 and prof.clip_negative:
        if clipped is not None:
            clipped.append(-d)
        return mp.mpf(0)
    return d


def _atom_mass(h, x0, prof):
    eps = _levels(prof, x0)
    return _neville_at_zero(eps, [-e * h.cauchy(mp.mpc(x0, e)).imag for e in eps])


def atoms(h, window, prof: InversionProfile | None = None) -> list:
    """Atoms ``(location, mass)`` of ``h`` inside the closed interval ``window``.

    Candidate locations are local minima of ``|F(x + i eta)|`` on a uniform
    scan (``eta`` = scan spacing), refined to a zero of ``F`` by a complex
    secant iteration; the mass is then extrapolated from ``-eps Im G``.
    """
    h, prof = as_handle(h), _profile(prof)
    lo, hi = (as_mpf(w) for w in window)
    if not hi > lo:
        raise InvalidParameter("atom window must have positive length")
    leaf = leaf_measure(h)
    if leaf is not None:
        return [(a, m) for a, m in leaf.atom_list() if lo <= a <= hi]
    n = prof.scan_points
    step = (hi - lo) / (n - 1)
    xs = [lo + k * step for k in range(n)]
    mags = [abs(h.F(mp.mpc(x, step))) for x in xs]
    found = []
    for k in range(n):
        left = mags[k - 1] if k > 0 else mp.inf
        right = mags[k + 1] if k < n - 1 else mp.inf
        if not (mags[k] <= left and mags[k] <= right):
            continue
        # an isolated zero of F gives |F(x + i eta)| ~ eta near the atom
        if mags[k] > 4 * step * (1 + abs(xs[k])):
            continue
        try:
            root = mp.findroot(h.F, mp.mpc(xs[k], step / 4), solver="secant", tol=mp.mp.eps**1.5)
        except (ValueError, ZeroDivisionError, ArithmeticError):
            continue
        if abs(root.imag) > mp.sqrt(mp.mp.eps) * max(1, abs(root.real)):
            continue
        x0 = root.real
        if not lo - step <= x0 <= hi + step:
            continue
        if any(abs(x0 - a) <= 2 * step for a, _ in found):
            continue
        mass = _atom_mass(h, x0, prof)
        if mass > MASS_FLOOR:
            found.append((x0, mass))
    return sorted((a, m) for a, m in found if lo <= a <= hi)


# ---------------------------------------------------------------- integration


def _gl_rule(n: int):
    nodes, weights = np.polynomial.legendre.leggauss(n)
    return [mp.mpf(float(t)) for t in nodes], [mp.mpf(float(w)) for w in weights]


def _gl_nodes(a, b, n, logscale=False):
    """Gauss-Legendre nodes and weights on ``[a, b]``.

    Decade pieces use the variable ``log x``; finite pieces use
    ``x = a + (b - a)(1 - cos theta) / 2``, which smooths inverse square
    root behaviour at support edges placed on the piece ends.
    """
    t, w = _gl_rule(n)
    if logscale:
        la, lb = mp.log(a), mp.log(b)
        half, mid = (lb - la) / 2, (lb + la) / 2
        xs = [mp.exp(mid + half * ti) for ti in t]
        return xs, [half * wi * x for wi, x in zip(w, xs)]
    thetas = [mp.pi * (1 + ti) / 2 for ti in t]
    xs = [a + (b - a) * (1 - mp.cos(th)) / 2 for th in thetas]
    return xs, [mp.pi / 2 * wi * (b - a) / 2 * mp.sin(th) for wi, th in zip(w, thetas)]


def _gl(f, a, b, n, logscale=False):
    xs, ws = _gl_nodes(a, b, n, logscale)
    return mp.fsum(w * f(x) for x, w in zip(xs, ws))


def _pieces(a, b, cuts):
    """Split ``[a, b]`` at ``cuts``; pieces with ``a > 0`` spanning more than a decade are cut per decade."""
    pts = sorted({a, b, *[c for c in cuts if a < c < b]})
    out = []
    for u, v in zip(pts, pts[1:]):
        if u > 0 and v / u > 10:
            k = int(mp.ceil(mp.log10(v / u)))
            r = (v / u) ** (mp.mpf(1) / k)
            out += [(u * r**i, u * r ** (i + 1), True) for i in range(k)]
        else:
            out.append((u, v, False))
    return out


def _integrate(h, a, b, prof, cuts, poles, n=None):
    """Integral over ``[a, b]`` of the density with the atom ``poles`` removed.

    Returns ``(integral, clipped)`` where ``clipped`` is the negative mass
    removed by clipping.
    """
    n = n or prof.nodes_per_interval
    raw = replace(prof, clip_negative=False)
    total, neg = mp.mpf(0), mp.mpf(0)
    for u, v, logscale in _pieces(a, b, list(cuts) + [x for x, _ in poles]):
        xs, ws = _gl_nodes(u, v, n, logscale)
        dens = [density_at(h, x, raw, poles=poles) for x in xs]
        total += mp.fsum(w * d for w, d in zip(ws, dens))
        neg += mp.fsum(w * d for w, d in zip(ws, dens) if d < 0)
    if prof.clip_negative:
        return total - neg, -neg
    return total, mp.mpf(0)


def _power_tail(h, Y, prof, width):
    """Mass beyond ``Y`` from a power law fitted to the density on ``[Y / width, Y]``."""
    a = Y / width
    da, db = density_at(h, a, prof), density_at(h, Y, prof)
    if da <= 0 or db <= 0:
        raise FitError(f"density vanishes near {mp.nstr(Y, 6)}; no power-law tail to fit")
    slope = (mp.log(db) - mp.log(da)) / (mp.log(Y) - mp.log(a))
    if slope >= -1:
        raise FitError(f"fitted density slope {mp.nstr(slope, 4)} does not give a decaying integrable tail")
    return db * Y / (-slope - 1), slope


@dataclass(frozen=True)
class TailEstimate:
    value: mp.mpf
    error: mp.mpf
    integral: mp.mpf = mp.mpf(0)
    extrapolated: mp.mpf = mp.mpf(0)
    atoms: tuple = ()
    clipped: mp.mpf = mp.mpf(0)
    fitted_slope: mp.mpf | None = field(default=None)

    def __float__(self):
        return float(self.value)


def _needs_atom_scan(h, y):
    """Atoms are impossible where every leaf has a density that is positive on all of ``[y, inf)``."""
    for leaf in h.leaves():
        m = leaf.measure
        lo, hi = m.support()
        if m.has_atoms() or hi != math.inf or lo > y:
            return True
    return False


def tail_mass(h, y, prof: InversionProfile | None = None, atom_window=None) -> TailEstimate:
    """Mass of ``(y, inf)``: density integral to ``Y = span * y``, fitted power tail beyond, plus atoms."""
    h0 = h
    prof = _profile(prof)
    y = as_mpf(y)
    leaf = leaf_measure(h0)
    if leaf is not None:
        return TailEstimate(leaf.tail(y), mp.mpf(0))
    h = as_handle(h0)
    Y = max(y, mp.mpf(1)) * prof.span
    found = []
    if atom_window is not None or _needs_atom_scan(h, y):
        lo, hi = atom_window if atom_window is not None else (y, Y)
        found = [(a, m) for a, m in atoms(h, (lo, hi), prof) if a > y]
    cuts = [b for b in h.breakpoints() if y < b < Y]
    integral, clipped = _integrate(h, y, Y, prof, cuts, found)
    coarse, _ = _integrate(h, y, Y, prof, cuts, found, n=max(4, prof.nodes_per_interval // 2))
    hi_support = h.support_hint()[1]
    extrap, slope = mp.mpf(0), None
    if hi_support > Y:
        try:
            extrap, slope = _power_tail(h, Y, prof, 10)
            extrap_short, _ = _power_tail(h, Y, prof, mp.sqrt(10))
        except FitError:
            # a density that is zero near Y carries no tail beyond it
            if density_at(h, Y, prof) > 0:
                raise
            extrap_short = mp.mpf(0)
    else:
        extrap_short = extrap
    atom_mass = mp.fsum(m for _, m in found)
    value = integral + extrap + atom_mass
    error = abs(integral - coarse) + abs(extrap - extrap_short) + clipped
    return TailEstimate(value, error, integral, extrap, tuple(found), clipped, slope)


def _edges(h, lo, hi, prof, poles, n=EDGE_SCAN):
    """Support edges in ``[lo, hi]``: sign changes of ``density > 0`` on a uniform scan, bisected."""
    # smoothing at the integration eps blurs the edge by tens of eps; locate it much finer
    fine = replace(prof, clip_negative=False, eps_schedule=tuple(e * EDGE_EPS_SCALE for e in prof.eps_schedule))

    def inside(x):
        return density_at(h, x, fine, poles=poles) > EDGE_FLOOR
    xs = [lo + (hi - lo) * k / (n - 1) for k in range(n)]
    flags = [inside(x) for x in xs]
    out = []
    for a, b, fa, fb in zip(xs, xs[1:], flags, flags[1:]):
        if fa == fb:
            continue
        for _ in range(48):
            mid = (a + b) / 2
            if inside(mid) == fa:
                a = mid
            else:
                b = mid
        out.append((a + b) / 2)
    return out


def total_mass(h, prof: InversionProfile | None = None, window=None) -> mp.mpf:
    """Integrated density plus atom masses over the real line."""
    prof = _profile(prof)
    h = as_handle(h)
    lo, hi = h.support_hint() if window is None else window
    lo, hi = as_mpf(lo), as_mpf(hi)
    bps = [as_mpf(b) for b in h.breakpoints()]
    reach = 10 * (1 + max([abs(b) for b in bps] or [1]))
    core_lo = lo if lo > -mp.inf else -reach
    core_hi = hi if hi < mp.inf else reach
    found = atoms(h, (core_lo, core_hi), prof) if h.has_atoms() else []
    cuts = bps + [mp.mpf(0)] + [mp.mpf(s) * 10**k for k in range(-1, 3) for s in (1, -1)]
    if leaf_measure(h) is None:
        cuts += _edges(h, core_lo, core_hi, prof, found)
    mass, _ = _integrate(h, core_lo, core_hi, prof, cuts, found)
    if hi == mp.inf:
        mass += _tail_beyond(h, core_hi, prof)
    if lo == -mp.inf:
        mirrored = lambda x: density_at(h, -x, prof)
        mass += _tail_beyond(h, -core_lo, prof, density=mirrored)
    return mass + mp.fsum(m for _, m in found)


def _tail_beyond(h, X, prof, density=None):
    """Mass of ``(X, inf)`` (or its mirror): integrate a few decades, then a fitted power tail."""
    dens = density or (lambda x: density_at(h, x, prof))
    Y = X * prof.span
    inner = mp.fsum(_gl(dens, u, v, prof.nodes_per_interval, True) for u, v, _ in _pieces(X, Y, []))
    a, b = dens(Y / 10), dens(Y)
    if a <= 0 or b <= 0:
        return inner
    slope = (mp.log(b) - mp.log(a)) / mp.log(10)
    if slope >= -1:
        raise FitError(f"fitted density slope {mp.nstr(slope, 4)} is not integrable")
    return inner + b * Y / (-slope - 1)
