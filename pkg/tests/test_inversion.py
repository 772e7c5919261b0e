import math

import mpmath as mp
import pytest

from boolconv.boolean_conv import bool_add, bool_add_power, bool_mult
from boolconv.errors import AtomProximity, FitError, InvalidParameter
from boolconv.free_additive import belinschi_nica
from boolconv.handles import Leaf
from boolconv import inversion
from boolconv.inversion import InversionProfile, atoms, density_at, tail_mass, total_mass
from boolconv.measures import GridDensity, ParetoTail, Semicircle, StandardCauchy, bernoulli, dirac
from boolconv.precision import working_precision

# principal-value quadrature of the inverted transforms at 40 digits (tests/oracles/generate.py)
ORACLE_TAILS = {
    "pareto^2 at 100": "0.00207381881280681",
    "pareto^3 at 100": "0.00322891204174535",
    "pareto x pareto3 at 1e3": "4.75371971169601e-5",
}


def bb():
    return bool_add(bernoulli(), bernoulli())


def test_density_examples():
    assert density_at(Semicircle(1), 0) == pytest.approx(1 / math.pi, abs=1e-6)
    assert density_at(StandardCauchy(), 0) == pytest.approx(1 / math.pi, abs=1e-6)
    assert density_at(bb(), 0) == pytest.approx(0, abs=1e-8)


def test_density_refuses_to_sit_on_an_atom():
    with pytest.raises(AtomProximity):
        density_at(bb(), math.sqrt(2))


@pytest.mark.parametrize("m", [Semicircle(1), StandardCauchy(), ParetoTail(3, 1), GridDensity((0, 1, 2), (0.3, 0.7))])
def test_leaf_density_matches_closed_form(m):
    lo, hi = m.support()
    xs = [x for x in (-1.5, -0.4, 0.3, 1.7, 2.5, 8, 40) if lo + 0.05 < x < hi - 0.05 and abs(x - 1) > 0.05]
    assert xs
    err = max(abs(density_at(Leaf(m), x) - m.density(x)) for x in xs)
    assert err < 1e-6


def test_atoms_examples():
    found = atoms(bool_add(dirac(1), dirac(2.5)), (-5, 10))
    assert len(found) == 1
    assert found[0][0] == pytest.approx(3.5, abs=1e-8)
    assert found[0][1] == pytest.approx(1, abs=1e-8)
    pair = atoms(bb(), (-3, 3))
    assert [float(a) for a, _ in pair] == pytest.approx([-math.sqrt(2), math.sqrt(2)], abs=1e-8)
    assert all(abs(m - 0.5) < 1e-6 for _, m in pair)
    assert atoms(Semicircle(1), (-3, 3)) == []
    assert atoms(bool_add_power(Semicircle(1), 2), (-3, 3)) == []


def test_atoms_of_half_boolean_power():
    pair = atoms(bool_add_power(bernoulli(), 0.5), (-2, 2))
    assert [float(a) for a, _ in pair] == pytest.approx([-2**-0.5, 2**-0.5], abs=1e-8)
    assert all(abs(m - 0.5) < 1e-6 for _, m in pair)


def test_atoms_window_must_have_length():
    with pytest.raises(InvalidParameter):
        atoms(bb(), (1, 1))


def test_tail_examples():
    assert float(tail_mass(ParetoTail(1.5, 1), 4)) == pytest.approx(0.125, rel=1e-2)
    assert float(tail_mass(bb(), 1)) == pytest.approx(0.5, abs=1e-6)
    assert float(tail_mass(bool_add_power(ParetoTail(1.5, 1), 2), 100)) == pytest.approx(2e-3, rel=0.1)


@pytest.mark.parametrize(
    "key,build,y",
    [
        ("pareto^2 at 100", lambda: bool_add_power(ParetoTail(1.5), 2), 100),
        ("pareto^3 at 100", lambda: bool_add(ParetoTail(1.5), ParetoTail(1.5), ParetoTail(1.5)), 100),
        ("pareto x pareto3 at 1e3", lambda: bool_mult(ParetoTail(1.5), ParetoTail(3)), 1000),
    ],
)
def test_tail_mass_matches_quadrature_oracle(key, build, y):
    with working_precision("extended"):
        est = tail_mass(build(), y)
        assert abs(est.value / mp.mpf(ORACLE_TAILS[key]) - 1) < 1e-9
    est = tail_mass(build(), y)
    assert abs(est.value / mp.mpf(ORACLE_TAILS[key]) - 1) < 1e-6


def test_tail_reports_error_and_fit():
    est = tail_mass(bool_add_power(ParetoTail(1.5), 2), 100)
    assert est.error < 1e-3 * est.value
    assert est.fitted_slope == pytest.approx(-2.5, abs=0.05)
    assert est.value == est.integral + est.extrapolated


def test_tail_is_monotone():
    h = bool_add(ParetoTail(1.5), ParetoTail(3))
    tails = [tail_mass(h, y).value for y in (2, 5, 20, 100, 1000)]
    assert all(a > b for a, b in zip(tails, tails[1:]))


def test_fit_error_for_non_decaying_tail(monkeypatch):
    monkeypatch.setattr(inversion, "density_at", lambda h, x, prof=None, clipped=None, poles=(): 1 / x)
    with pytest.raises(FitError):
        tail_mass(bool_add_power(ParetoTail(0.5), 2), 100)


@pytest.mark.parametrize(
    "build",
    [
        lambda: ParetoTail(1.5),
        lambda: Semicircle(1),
        lambda: bb(),
        lambda: bool_add(ParetoTail(1.5), ParetoTail(3)),
        lambda: bool_add(Semicircle(1), GridDensity((0, 1, 2), (0.5, 0.5))),
        lambda: belinschi_nica(Semicircle(1), 1),
        lambda: belinschi_nica(bernoulli(), 0.5),
    ],
)
def test_total_mass_is_one(build):
    assert 0.999 <= total_mass(build()) <= 1.001


@pytest.mark.parametrize(
    "kw",
    [dict(eps_schedule=(1e-2,)), dict(eps_schedule=(1e-3, 1e-2)), dict(eps_schedule=(1e-2, 0)), dict(order=3)],
)
def test_profile_validation(kw):
    with pytest.raises(InvalidParameter):
        InversionProfile(**kw)


def test_extended_profile():
    with working_precision("extended"):
        prof = InversionProfile.for_precision()
    assert prof.eps_schedule[0] < 1e-10
    assert InversionProfile().eps_schedule == (1e-2, 1e-3, 1e-4)
    assert InversionProfile().order == 2
    assert InversionProfile.for_precision("double").eps_schedule == (1e-5, 1e-6, 1e-7)


def test_clipping_is_recorded():
    # coarse smoothing leaves negative extrapolated values just outside the semicircle edge
    xs = (1.9, 2.0, 2.05, 2.2, 3)
    coarse = InversionProfile(eps_schedule=(1e-1, 1e-2, 1e-3))
    clipped = []
    values = [density_at(Semicircle(1), x, coarse, clipped) for x in xs]
    assert all(v >= 0 for v in values)
    unclipped = InversionProfile(eps_schedule=(1e-1, 1e-2, 1e-3), clip_negative=False)
    raw = [density_at(Semicircle(1), x, unclipped) for x in xs]
    assert len(clipped) == sum(r < 0 for r in raw) > 0
    assert clipped == pytest.approx([-r for r in raw if r < 0])
