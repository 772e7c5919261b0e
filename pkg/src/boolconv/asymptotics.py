"""Finite-y verification of tail asymptotics.

Each ``verify_*``/scenario function returns an :class:`AsymptoticsReport`
holding one or more *relations* (a measured left-hand side against a target
right-hand side on a y-grid, passing when ``max |lhs/rhs - 1| <= tol``) and
*side checks* (log-slope sandwiches and similar finite-sample proxies of
``<<``/``>>`` statements). The verdict is the conjunction of all of them.

Remainder constants come in two conventions:

``printed``  the constants exactly as stated for the five Tauberian cases;
``karamata`` the constants obtained by evaluating the defining integrals
             ``int s^(p+1) / (1 + s^2) dmu(y s)`` (and the ``s^(p+2)`` analogue)
             for a tail ``y^-alpha`` with Karamata's theorem.
"""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

from . import boolean_max as bm
from .boolean_conv import bool_add, bool_mult
from .errors import CancellationWarning, FitError, InvalidParameter, NotApplicable, OutOfRegion, PrecisionBudget
from .free_additive import belinschi_nica, burgers_residual
from .handles import Leaf
from .inversion import InversionProfile, tail_mass
from .measures import Atomic, Measure, Mixture, ParetoTail
from .precision import as_mpf, working_precision
from .transforms import eta, psi, remainder

THEOREMS = ("T2.2", "P2.3", "T2.5", "T2.6", "T3.1", "T3.2", "T3.3", "T3.4", "T3.5", "E2.4", "L5.1", "R5.3", "P6.6", "Burgers")
SANDWICH_R = 0.25
SLOPE_MARGIN = 0.05
TAIL_BUDGET = {"double": 1e-5, "extended": 1e-9}


# ------------------------------------------------------------------ report


@dataclass(frozen=True)
class Relation:
    name: str
    y: tuple
    lhs: tuple
    rhs: tuple
    constant: float | None
    tolerance: float

    @property
    def ratio(self) -> tuple:
        return tuple(a / b if b != 0 else math.nan for a, b in zip(self.lhs, self.rhs))

    @property
    def max_deviation(self) -> float:
        devs = [abs(r - 1) for r in self.ratio]
        return max(devs) if devs and not any(math.isnan(d) for d in devs) else math.inf

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class AsymptoticsReport:
    theorem_id: str
    relations: tuple
    checks: tuple = ()
    fitted_index: float | None = None
    params: dict = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return all(r.passed for r in self.relations) and all(c.passed for c in self.checks)

    # primary relation views
    @property
    def primary(self) -> Relation:
        return self.relations[0]

    @property
    def y_grid(self):
        return self.primary.y

    @property
    def lhs(self):
        return self.primary.lhs

    @property
    def rhs(self):
        return self.primary.rhs

    @property
    def ratio(self):
        return self.primary.ratio

    @property
    def target_constant(self):
        return self.primary.constant

    @property
    def tolerance(self):
        return self.primary.tolerance

    def relation(self, name: str) -> Relation:
        for r in self.relations:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_csv(self, relation: str | None = None) -> str:
        """Columns ``y, lhs, rhs, ratio`` with 17 significant digits."""
        rel = self.primary if relation is None else self.relation(relation)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["y", "lhs", "rhs", "ratio"])
        for row in zip(rel.y, rel.lhs, rel.rhs, rel.ratio):
            w.writerow([fmt(v) for v in row])
        return buf.getvalue()

    def to_keyvalue(self) -> str:
        lines = [f"theorem_id = {self.theorem_id}", f"verdict = {'pass' if self.verdict else 'fail'}"]
        for k, v in sorted(self.params.items()):
            lines.append(f"param.{k} = {v}")
        if self.fitted_index is not None:
            lines.append(f"fitted_index = {fmt(self.fitted_index)}")
        for r in self.relations:
            lines.append(f"relation.{r.name}.constant = {fmt(r.constant) if r.constant is not None else 'none'}")
            lines.append(f"relation.{r.name}.tolerance = {fmt(r.tolerance)}")
            lines.append(f"relation.{r.name}.max_deviation = {fmt(r.max_deviation)}")
            lines.append(f"relation.{r.name}.verdict = {'pass' if r.passed else 'fail'}")
        for c in self.checks:
            lines.append(f"check.{c.name} = {'pass' if c.passed else 'fail'}")
            if c.detail:
                lines.append(f"check.{c.name}.detail = {c.detail}")
        return "\n".join(lines) + "\n"

    def summary(self) -> str:
        parts = [f"{r.name}: max|ratio-1|={r.max_deviation:.4g} (tol {r.tolerance:g})" for r in self.relations]
        parts += [f"{c.name}: {'ok' if c.passed else 'FAIL'} {c.detail}".rstrip() for c in self.checks]
        return f"{self.theorem_id} {'PASS' if self.verdict else 'FAIL'} | " + "; ".join(parts)


def fmt(v) -> str:
    if v is None:
        return ""
    x = float(v)
    return repr(x) if math.isnan(x) or math.isinf(x) else f"{x:.17g}"


# ------------------------------------------------------------------ fitting


def _loglog_slope(ys, vals):
    lx = np.log([float(y) for y in ys])
    ly = np.log([float(v) for v in vals])
    return float(np.polyfit(lx, ly, 1)[0])


def rv_index(tail_samples) -> float:
    """Regular-variation index ``alpha`` from ``(y, mass)`` samples (negated log-log slope)."""
    pts = [(float(y), float(m)) for y, m in tail_samples]
    if len(pts) < 5:
        raise FitError("index fit needs at least 5 samples")
    if any(m <= 0 or y <= 0 for y, m in pts):
        raise FitError("index fit needs positive y and positive masses")
    ys = [y for y, _ in pts]
    if math.log10(max(ys) / min(ys)) < 1.5:
        raise FitError("index fit needs samples spanning at least 1.5 decades")
    return -_loglog_slope(ys, [m for _, m in pts])


def log_grid(lo, hi, n: int = 9) -> list:
    lo, hi = float(lo), float(hi)
    return [lo * (hi / lo) ** (k / (n - 1)) for k in range(n)]


def tail_index(m) -> float:
    """Tail index of a measure with a pure power tail (Pareto or mixture containing one)."""
    if isinstance(m, Leaf):
        m = m.measure
    if isinstance(m, ParetoTail):
        return float(m.alpha)
    if isinstance(m, Mixture):
        idx = [tail_index(c) for _, c in m.components if isinstance(c, (ParetoTail, Mixture))]
        if idx:
            return min(idx)
    raise NotApplicable(f"{m!r} has no regularly varying power tail")


def _bisect_tail(m, level):
    lo, hi = 1.0, 10.0
    while m.tail(hi) > level:
        lo, hi = hi, hi * 10
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if m.tail(mid) > level:
            lo = mid
        else:
            hi = mid
        if hi / lo < 1 + 1e-12:
            break
    return hi


def trusted_window(m, precision: str = "extended", orders: float = 3.0, n: int = 9) -> list:
    """Log grid over the last ``orders`` decades of tail mass above the precision budget."""
    budget = TAIL_BUDGET[precision]
    return tail_window(m, budget * 10**orders, budget, n)


def tail_window(m, hi_level: float, lo_level: float, n: int = 7) -> list:
    """Log grid of ``y`` with ``m(y, inf)`` running from ``hi_level`` down to ``lo_level``."""
    return log_grid(_bisect_tail(m, hi_level), _bisect_tail(m, lo_level), n)


def sandwich(name, ys, vals, lower=None, upper=None, margin=SLOPE_MARGIN) -> Check:
    """``y^lower << |vals| << y^upper`` as ``lower + margin < slope < upper - margin``."""
    mags = [abs(v) for v in vals]
    if any(v == 0 for v in mags):
        return Check(name, False, "zero values")
    s = _loglog_slope(ys, mags)
    ok = (lower is None or s > lower + margin) and (upper is None or s < upper - margin)
    lo_s = "-inf" if lower is None else f"{lower + margin:.4g}"
    hi_s = "inf" if upper is None else f"{upper - margin:.4g}"
    return Check(name, ok, f"slope={s:.4f} required in ({lo_s}, {hi_s})")


# ------------------------------------------------------------------ Tauberian constants


def theorem_for(alpha, p) -> str:
    a = float(alpha)
    if p >= 1 and p < a < p + 1:
        return "T3.1"
    if p >= 1 and a == p:
        return "T3.2"
    if p == 0 and 0 <= a < 1:
        return "T3.3"
    if p == 0 and a == 1:
        return "T3.4"
    if p >= 1 and a == p + 1:
        return "T3.5"
    raise OutOfRegion(f"no remainder theorem covers alpha={alpha}, p={p}")


def tauberian_constant(alpha, p: int, part: str, convention: str = "printed"):
    """Constant ``c`` of the remainder asymptotics for the theorem covering ``(alpha, p)``.

    The normalised quantity behind each ``part``:

    ``T3.1``  Im / Re of ``r_{1/B}(-i/y)`` over ``y^p mu(y, inf)``
    ``T3.2``  Im of ``r_{1/B}(-i/y)`` over ``y^p mu(y, inf)``
    ``T3.3``  ``Re``: ``-y^-1 Re (1/B)(-i/y)``, ``Im``: ``y^-1 Im (1/B)(-i/y)``, over ``mu(y, inf)``
    ``T3.4``  Im: ``y^-1 Im (1/B)(-i/y)`` over ``mu(y, inf)``
    ``T3.5``  Re of ``r_{1/B}(-i/y)`` over ``y^p mu(y, inf)``
    """
    if part not in ("Im", "Re"):
        raise InvalidParameter("part must be 'Im' or 'Re'")
    if convention not in ("printed", "karamata"):
        raise InvalidParameter("convention must be 'printed' or 'karamata'")
    a = as_mpf(alpha)
    th = theorem_for(alpha, p)
    pi = mp.pi
    half = pi / 2
    if th == "T3.1":
        if convention == "printed":
            if part == "Im":
                return -(pi * (p + 1 - a) / 2) / mp.cos(pi * (a - p) / 2)
            return -(pi * (p + 2 - a) / 2) / mp.sin(pi * (a - p) / 2)
        if part == "Im":
            return -a * half / mp.cos(pi * (a - p) / 2)
        return -a * half / mp.sin(pi * (a - p) / 2)
    if th == "T3.2":
        if part != "Im":
            raise OutOfRegion("the alpha = p case states an Im asymptotic only")
        return -half if convention == "printed" else -a * half
    if th == "T3.3":
        if part == "Re":
            num = pi * (1 - a) / 2 if convention == "printed" else a * half
            return -num / mp.cos(pi * a / 2)
        if a == 0:
            return mp.mpf(-1)
        num = pi * (2 - a) / 2 if convention == "printed" else a * half
        return -num / mp.sin(pi * a / 2)
    if th == "T3.4":
        if part != "Im":
            raise OutOfRegion("the alpha = 1, p = 0 case states an Im asymptotic only")
        return -half
    if part != "Re":
        raise OutOfRegion("the alpha = p + 1 case states a Re asymptotic only")
    return -half if convention == "printed" else -a * half


# ------------------------------------------------------------------ remainder theorems


def _remainders(m, p, ys):
    """Analytic ``r_{1/B}(-i/y)`` on the grid plus a naive cross-check and its cancellation count."""
    vals, naive, cancelled = [], [], 0
    for y in ys:
        z = mp.mpc(0, -1 / as_mpf(y))
        vals.append(remainder("rInvB", m, z, p).value)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", CancellationWarning)
            naive.append(remainder("rInvB", m, z, p, method="naive").value)
        if any(issubclass(w.category, CancellationWarning) for w in caught):
            cancelled += 1
    return vals, naive, cancelled


def verify_remainder(
    m,
    theorem_id: str,
    y_grid=None,
    p: int | None = None,
    convention: str = "printed",
    tol: float = 0.05,
    precision: str | None = "extended",
    method: str = "analytic",
) -> AsymptoticsReport:
    """Check the remainder asymptotics of ``theorem_id`` for ``m`` on ``y_grid``.

    ``method="naive"`` uses the subtracted series instead of the analytic
    remainder and raises :class:`PrecisionBudget` when more than 10% of the
    grid lost its digits.
    """
    with working_precision(precision):
        alpha = tail_index(m)
        p = int(m.moment_count()) if p is None else p
        region = theorem_for(alpha, p)
        if region != theorem_id:
            raise OutOfRegion(f"alpha={alpha}, p={p} falls under {region}, not {theorem_id}")
        ys = list(y_grid) if y_grid is not None else trusted_window(m, precision or "double")
        analytic, naive, cancelled = _remainders(m, p, ys)
        if method == "naive":
            if cancelled > 0.1 * len(ys):
                raise PrecisionBudget(f"{cancelled} of {len(ys)} grid points lost their digits; raise precision")
            rs = naive
        else:
            rs = analytic
        tails = [m.tail(y) for y in ys]
        norm = [as_mpf(y) ** p * t for y, t in zip(ys, tails)]
        r_lo, r_hi = -(1 + SANDWICH_R / 2), -(1 - SANDWICH_R / 2)

        def rel(name, lhs, part, base):
            c = tauberian_constant(alpha, p, part, convention)
            return Relation(name, tuple(float(y) for y in ys), tuple(float(v) for v in lhs),
                            tuple(float(c * b) for b in base), float(c), tol)

        ims = [r.imag for r in rs]
        res = [r.real for r in rs]
        if theorem_id == "T3.1":
            relations = (rel("Im", ims, "Im", norm), rel("Re", res, "Re", norm))
            ratio = [a / b for a, b in zip(res, ims)]
            target = tauberian_constant(alpha, p, "Re", convention) / tauberian_constant(alpha, p, "Im", convention)
            dev = max(abs(float(q / target) - 1) for q in ratio)
            checks = (
                sandwich("Im>>y^-1", ys, ims, lower=-1),
                sandwich("Re>>y^-1", ys, res, lower=-1),
                Check("Re/Im", dev <= tol, f"max|(Re/Im)/{float(target):.5g} - 1|={dev:.4g}"),
            )
        elif theorem_id == "T3.2":
            relations = (rel("Im", ims, "Im", norm),)
            checks = (sandwich("Re>>y^-1", ys, res, lower=-1), sandwich("Im>>y^-1", ys, ims, lower=-1))
        elif theorem_id == "T3.3":
            # p = 0: the remainder is 1/B itself
            q_re = [-r.real / as_mpf(y) for r, y in zip(rs, ys)]
            q_im = [r.imag / as_mpf(y) for r, y in zip(rs, ys)]
            relations = (rel("Im", q_im, "Im", tails), rel("Re", q_re, "Re", tails))
            checks = (sandwich("-Re/y>>y^-1", ys, q_re, lower=-1), sandwich("Im/y>>y^-1", ys, q_im, lower=-1))
        elif theorem_id == "T3.4":
            q_re = [-r.real / as_mpf(y) for r, y in zip(rs, ys)]
            q_im = [r.imag / as_mpf(y) for r, y in zip(rs, ys)]
            relations = (rel("Im", q_im, "Im", tails),)
            checks = (
                sandwich("Im/y sandwich", ys, q_im, lower=r_lo, upper=-1 + SANDWICH_R / 2),
                sandwich("-Re/y sandwich", ys, q_re, lower=-1, upper=r_hi),
            )
        else:  # T3.5
            relations = (rel("Re", res, "Re", norm),)
            checks = (
                sandwich("Re sandwich", ys, res, lower=r_lo, upper=r_hi),
                sandwich("Im sandwich", ys, ims, lower=-1, upper=r_hi),
            )
        finite = [(n, a) for n, a in zip(naive, analytic)]
        xdev = max(float(abs(n - a) / abs(a)) for n, a in finite)
        params = {"alpha": alpha, "p": p, "convention": convention, "method": method,
                  "naive_crosscheck_max_rel_diff": f"{xdev:.3g}", "naive_cancelled_points": cancelled}
        idx = -_loglog_slope(ys, [abs(v) for v in relations[0].lhs])
        return AsymptoticsReport(theorem_id, relations, checks, idx, params)


# ------------------------------------------------------------------ additive and max scenarios


def _n_fold(m, n):
    return Leaf(m) if n == 1 else bool_add(*([m] * n))


def _require_heavy(m, ys):
    for y in ys:
        if m.tail(y) <= 0:
            raise NotApplicable(f"tail vanishes at y={y}: bounded support is outside the subexponential class")


def subexp_ratio(m, n: int, y_grid, tol: float = 0.05, prof: InversionProfile | None = None, precision="extended"):
    """``m^{uplus n}(y, inf) / (n m(y, inf))``."""
    with working_precision(precision):
        ys = list(y_grid)
        _require_heavy(m, ys)
        h = _n_fold(m, n)
        lhs = [tail_mass(h, y, prof).value for y in ys]
        rhs = [n * m.tail(y) for y in ys]
        rel = Relation(f"n={n}", tuple(map(float, ys)), tuple(map(float, lhs)), tuple(map(float, rhs)), float(n), tol)
        return AsymptoticsReport("T2.2", (rel,), (), None, {"n": n})


def one_large_jump(m, n: int, y_grid, tol: float = 0.05, prof: InversionProfile | None = None, precision="extended"):
    """Tails of the Boolean sum, Boolean max, free max and classical max ``n``-fold powers."""
    with working_precision(precision):
        ys = list(y_grid)
        _require_heavy(m, ys)
        F = bm.from_measure(m)
        h = _n_fold(m, n)
        series = {
            "bool_sum": [tail_mass(h, y, prof).value for y in ys],
            "bool_max": [bm.bool_max_power(F, n).tail(y) for y in ys],
            "free_max": [bm.free_max_power(F, n).tail(y) for y in ys],
            "classical_max": [bm.classical_max_power(F, n).tail(y) for y in ys],
        }
        names = list(series)
        fy = tuple(map(float, ys))
        relations = tuple(
            Relation(f"{a}/{b}", fy, tuple(map(float, series[a])), tuple(map(float, series[b])), 1.0, tol)
            for i, a in enumerate(names) for b in names[i + 1:]
        )
        # closed forms: n F/(1 + (n-1) F) - (1 - (1 - F)^n) = -n(n-1)/2 F^2 + O(F^3)
        gaps = [abs(a - b) / (n * (n - 1) * m.tail(y) ** 2) if n > 1 else mp.mpf(0)
                for a, b, y in zip(series["bool_max"], series["classical_max"], ys)]
        check = Check("bool_max-classical=O(Fbar^2)", all(g <= 1 for g in gaps), f"max gap/(n(n-1)Fbar^2)={float(max(gaps)):.4g}")
        return AsymptoticsReport("P2.3", relations, (check,), None, {"n": n})


def max_trio(m, n: int, y_grid, lo: float = 0.98, hi: float = 1.02):
    """Pairwise ratios of the three closed-form max powers (no inversion involved)."""
    ys = list(y_grid)
    F = bm.from_measure(m)
    tails = {
        "bool_max": [bm.bool_max_power(F, n).tail(y) for y in ys],
        "free_max": [bm.free_max_power(F, n).tail(y) for y in ys],
        "classical_max": [bm.classical_max_power(F, n).tail(y) for y in ys],
    }
    names = list(tails)
    tol = max(1 - lo, hi - 1)
    fy = tuple(map(float, ys))
    relations = tuple(
        Relation(f"{a}/{b}", fy, tuple(map(float, tails[a])), tuple(map(float, tails[b])), 1.0, tol)
        for i, a in enumerate(names) for b in names[i + 1:]
    )
    return AsymptoticsReport("E2.4", relations, (), None, {"n": n})


def bt_tail_equivalence(m, t, y_grid, tol: float = 0.1, prof: InversionProfile | None = None, precision="extended"):
    """``B_t(mu)(y, inf) / mu(y, inf)``."""
    with working_precision(precision):
        ys = list(y_grid)
        h = belinschi_nica(m, t)
        lhs = [tail_mass(h, y, prof).value for y in ys]
        rhs = [m.tail(y) for y in ys]
        rel = Relation(f"t={t}", tuple(map(float, ys)), tuple(map(float, lhs)), tuple(map(float, rhs)), 1.0, tol)
        return AsymptoticsReport("T2.5", (rel,), (), None, {"t": t})


# ------------------------------------------------------------------ multiplicative scenarios


def tail_balance(mu, nu) -> float:
    """``c`` with ``nu(y, inf) ~ c mu(y, inf)`` for equal pure power tails."""
    a, b = tail_index(mu), tail_index(nu)
    if a != b:
        raise NotApplicable("tail balance needs equal indices")
    y = mp.mpf(10) ** 12
    return float(nu.tail(y) / mu.tail(y))


def breiman_boolean(mu, nu, y_grid, c=None, tol: float = 0.1, prof: InversionProfile | None = None, precision="extended"):
    """``(mu x nu)(y, inf)`` against ``m(nu) mu(y, inf)`` or ``(1 + c) m(nu) mu(y, inf)``."""
    with working_precision(precision):
        a, b = tail_index(mu), tail_index(nu)
        if a > b:
            raise InvalidParameter("pass the heavier-tailed measure first (alpha <= beta)")
        mean = nu.mean()
        if a < b:
            const, case = mean, "alpha<beta"
        else:
            c = tail_balance(mu, nu) if c is None else c
            const, case = (1 + as_mpf(c)) * mean, "alpha=beta"
        ys = list(y_grid)
        h = bool_mult(mu, nu)
        lhs = [tail_mass(h, y, prof).value for y in ys]
        rhs = [const * mu.tail(y) for y in ys]
        rel = Relation(case, tuple(map(float, ys)), tuple(map(float, lhs)), tuple(map(float, rhs)), float(const), tol)
        return AsymptoticsReport("T2.6", (rel,), (), None, {"alpha": a, "beta": b, "m_nu": float(mean)})


def remark53_scenario(mu, nu, y_grid, tol: float = 0.1, prof: InversionProfile | None = None, precision="extended"):
    """Same index ``-(p+1)`` but ``mu`` in ``M_p`` and ``nu`` in ``M_{p+1}``; target ``m(nu) mu(y, inf)``.

    With constant slowly varying parts two pure power tails of equal index
    always have equal moment counts, so the scenario cannot be instantiated.
    """
    a, b = tail_index(mu), tail_index(nu)
    p, q = mu.moment_count(), nu.moment_count()
    if not (p >= 1 and q == p + 1 and a == b == p + 1):
        raise NotApplicable(
            f"needs mu in M_p, nu in M_(p+1), both of index -(p+1); got p={p}, q={q}, alpha={a}, beta={b}"
        )
    with working_precision(precision):
        ys = list(y_grid)
        h = bool_mult(mu, nu)
        mean = nu.mean()
        lhs = [tail_mass(h, y, prof).value for y in ys]
        rhs = [mean * mu.tail(y) for y in ys]
        rel = Relation("m(nu)", tuple(map(float, ys)), tuple(map(float, lhs)), tuple(map(float, rhs)), float(mean), tol)
        return AsymptoticsReport("R5.3", (rel,), (), None, {})


def mult_index(mu, nu, y_grid, tol: float = 0.05, prof: InversionProfile | None = None, precision="extended"):
    """Fitted tail index of ``mu x nu`` against ``min(alpha, beta)``."""
    with working_precision(precision):
        ys = list(y_grid)
        h = bool_mult(mu, nu)
        tails = [tail_mass(h, y, prof).value for y in ys]
        fitted = rv_index(zip(ys, tails))
        target = min(tail_index(mu), tail_index(nu))
        ok = abs(fitted - target) <= tol
        return AsymptoticsReport(
            "L5.1", (), (Check("index", ok, f"fitted={fitted:.5f} target={target:g} tol={tol:g}"),), fitted,
            {"moment_count": h.moment_count()},
        )


# ------------------------------------------------------------------ classical contrast


def _sampler(m, rng, n):
    if isinstance(m, ParetoTail):
        u = rng.random(n)
        return float(m.xm) * (1 - u) ** (-1 / float(m.alpha))
    if isinstance(m, Atomic):
        locs = np.array([float(a) for a, _ in m.atoms])
        ps = np.array([float(w) for _, w in m.atoms])
        return rng.choice(locs, size=n, p=ps / ps.sum())
    raise NotApplicable(f"no sampler for {type(m).__name__}")


def alpha_moment(nu, alpha) -> float:
    """``int y^alpha dnu``."""
    a = float(alpha)
    if isinstance(nu, Atomic):
        return math.fsum(float(w) * float(x) ** a for x, w in nu.atoms)
    if isinstance(nu, ParetoTail):
        b, xm = float(nu.alpha), float(nu.xm)
        if b <= a:
            return math.inf
        return b * xm**a / (b - a)
    raise NotApplicable(f"no alpha-moment formula for {type(nu).__name__}")


def classical_breiman_mc(mu, nu, y_grid, samples: int = 1_000_000, seed: int = 0, tol: float = 0.1):
    """Monte-Carlo tail of the product ``X Y`` against ``int y^alpha dnu * mu(y, inf)``."""
    rng = np.random.default_rng(seed)
    x = _sampler(mu, rng, samples)
    y = _sampler(nu, rng, samples)
    prod = np.sort(x * y)
    alpha = tail_index(mu)
    const = alpha_moment(nu, alpha)
    ys = [float(v) for v in y_grid]
    lhs = [float(samples - np.searchsorted(prod, v, side="right")) / samples for v in ys]
    rhs = [const * float(mu.tail(v)) for v in ys]
    rel = Relation("int y^alpha dnu", tuple(map(float, ys)), tuple(lhs), tuple(rhs), const, tol)
    return AsymptoticsReport("classical-breiman", (rel,), (), None, {"seed": seed, "samples": samples})


# ------------------------------------------------------------------ transform-level equivalences


def prop66_ratio(m, y_grid, p: int | None = None, tol: float = 0.05, precision="extended"):
    """``r_eta(-i/y) / r_psi(-i/y)`` against 1 (modulus of the complex ratio minus 1)."""
    with working_precision(precision):
        p = int(m.moment_count()) if p is None else p
        ys = list(y_grid)
        lhs, rhs = [], []
        for y in ys:
            z = mp.mpc(0, -1 / as_mpf(y))
            re = remainder("rEta", m, z, p).value
            rp = remainder("rPsi", m, z, p).value
            lhs.append(abs(re / rp - 1) + 1)
            rhs.append(1.0)
        rel = Relation("|r_eta/r_psi|", tuple(map(float, ys)), tuple(map(float, lhs)), tuple(rhs), 1.0, tol)
        return AsymptoticsReport("P6.6", (rel,), (), None, {"p": p})


def burgers_order(m, t, z, step=None, halvings: int = 3, precision="extended"):
    """Observed convergence order of the Burgers residual under step halving."""
    with working_precision(precision):
        z = mp.mpc(z)
        h0 = mp.mpf("1e-2") * abs(z) if step is None else as_mpf(step)
        steps = [h0 / 2**k for k in range(halvings + 1)]
        res = [burgers_residual(m, t, z, s, s) for s in steps]
        orders = [float(mp.log(a / b, 2)) for a, b in zip(res, res[1:]) if a > 0 and b > 0]
        return res, orders


def verify_burgers(smooth, exact_cases, samples, tol_order: float = 1.9, tol_exact: float = 1e-8, precision="extended"):
    checks = []
    for t, z in samples:
        res, orders = burgers_order(smooth, t, z, precision=precision)
        ok = bool(orders) and min(orders) >= tol_order
        checks.append(Check(f"order t={t} z={complex(z)}", ok, "orders=" + ",".join(f"{o:.3f}" for o in orders)))
    for m in exact_cases:
        for t, z in samples:
            with working_precision(precision):
                r = burgers_residual(m, t, z)
            checks.append(Check(f"exact {type(m).__name__} t={t} z={complex(z)}", r < tol_exact, f"residual={float(r):.3g}"))
    return AsymptoticsReport("Burgers", (), tuple(checks), None, {})


def eta_sign_ok(m, x) -> bool:
    """``eta(x)`` is a negative real number for ``x < 0``."""
    v = eta(m, x)
    return v.real < 0 and abs(v.imag) <= 1e3 * mp.mp.eps * abs(v)


def eta_arg_ok(m, z) -> bool:
    """``arg z <= arg eta(z) < pi`` on the upper half-plane (up to rounding)."""
    v = eta(m, z)
    slack = 1e3 * mp.mp.eps
    return mp.arg(z) - slack <= mp.arg(v) < mp.pi


def psi_paths_agree(m, z, tol=1e-8) -> bool:
    a, b = psi(m, z, "cauchy"), psi(m, z, "direct")
    return abs(a - b) <= tol * max(1, abs(a))
