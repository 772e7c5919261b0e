import math

import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from boolconv.errors import InvalidParameter
from boolconv.measures import (
    Atomic, GridDensity, Mixture, ParetoTail, Semicircle, StandardCauchy, bernoulli, dirac, moment_count,
    support_positive, tail,
)

# Cauchy transform of Pareto(1.5, 1) by direct quadrature at 80 digits (tests/oracles/generate.py)
PARETO_G = {
    ("2", "1"): ("0.15771138265016105392", "-0.62131666009141146458"),
    ("0.5", "0.1"): ("-0.94029460905603942792", "-0.11863432448613341668"),
    ("-3", "2"): ("-0.17015004477892050948", "-0.071907078898815263271"),
}

FAMILY = [
    dirac(2), bernoulli(), Atomic(((0.5, 0.25), (3, 0.75))), GridDensity((0, 1, 2, 4), (0.5, 0.25, 0.25)),
    ParetoTail(1.5), ParetoTail(0.5, 2), ParetoTail(3), StandardCauchy(), Semicircle(1),
    Mixture(((0.5, GridDensity((0, 1), (1,))), (0.5, ParetoTail(1.5)))),
]


def test_tail_examples():
    assert tail(ParetoTail(1.5, 1), 4) == pytest.approx(0.125, abs=1e-15)
    assert tail(Atomic(((-1, 0.5), (1, 0.5))), 0) == 0.5
    oracle = mp.quad(lambda x: 1 / (mp.pi * (1 + x * x)), [1, mp.inf])
    assert tail(StandardCauchy(), 1) == pytest.approx(0.25, abs=1e-15)
    assert float(oracle) == pytest.approx(0.25, abs=1e-15)


def test_moment_examples():
    oracle = mp.quad(lambda t: t * 3 * t**-4, [1, mp.inf])
    assert ParetoTail(3, 1).moment(1).value == pytest.approx(1.5, abs=1e-14)
    assert float(oracle) == pytest.approx(1.5, abs=1e-14)
    assert ParetoTail(1.5, 1).moment(2).divergent
    assert Atomic(((2, 1),)).moment(3).value == 8


def test_moment_count_examples():
    assert moment_count(ParetoTail(1.5, 1)) == 1
    assert moment_count(ParetoTail(2, 1)) == 1
    assert moment_count(Semicircle(1)) == math.inf


@pytest.mark.parametrize("m", FAMILY, ids=lambda m: type(m).__name__)
def test_zeroth_moment_is_one(m):
    assert m.moment(0).value == 1


@pytest.mark.parametrize("m", FAMILY, ids=lambda m: type(m).__name__)
def test_tail_limits(m):
    assert m.tail(-1e12) == pytest.approx(1, abs=1e-6)
    assert m.tail(1e30) == pytest.approx(0, abs=1e-6)


@pytest.mark.parametrize("m", FAMILY, ids=lambda m: type(m).__name__)
@given(a=st.floats(-50, 50), b=st.floats(-50, 50))
def test_tail_is_monotone(m, a, b):
    lo, hi = min(a, b), max(a, b)
    assert m.tail(lo) >= m.tail(hi)


@given(alpha=st.floats(0.2, 5), xm=st.floats(0.1, 10), y=st.floats(1, 1e6), t=st.floats(1, 100))
def test_pareto_tail_scales_exactly(alpha, xm, y, t):
    m = ParetoTail(alpha, xm)
    y = max(y, xm)
    assert float(m.tail(t * y) / m.tail(y)) == pytest.approx(t**-alpha, rel=1e-12)


def test_mixture_tail_is_weighted_sum():
    body, heavy = GridDensity((0, 1, 2), (0.7, 0.3)), ParetoTail(1.5)
    mix = Mixture(((0.25, body), (0.75, heavy)))
    for y in (0.5, 1.5, 3, 100):
        assert float(mix.tail(y)) == pytest.approx(float(0.25 * body.tail(y) + 0.75 * heavy.tail(y)), abs=1e-12)


def test_total_mass_of_discrete_families():
    assert math.fsum(float(w) for _, w in bernoulli().atom_list()) == pytest.approx(1, abs=1e-12)
    assert GridDensity((0, 1, 3), (0.4, 0.6)).tail(-1) == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("z", list(PARETO_G))
def test_pareto_cauchy_matches_quadrature_oracle(z):
    with mp.workdps(40):
        g = ParetoTail(1.5, 1).cauchy(mp.mpc(*z))
        assert abs(g - mp.mpc(*PARETO_G[z])) < mp.mpf(10) ** -18


def test_pareto_closed_form_matches_internal_quadrature():
    m = ParetoTail(2.5, 3)
    for z in (mp.mpc(1, 1), mp.mpc(10, 0.5), mp.mpc(-2, 0.01)):
        assert abs(m.cauchy(z) - m.cauchy_quad(z)) < 1e-12


def test_support_positive():
    assert support_positive(ParetoTail(1.5))
    assert support_positive(dirac(0))
    assert not support_positive(bernoulli())
    assert support_positive(Mixture(((0.5, dirac(1)), (0.5, GridDensity((0, 1), (1,))))))
    assert not support_positive(StandardCauchy())


@pytest.mark.parametrize(
    "build",
    [
        lambda: ParetoTail(0),
        lambda: ParetoTail(1.5, -1),
        lambda: Atomic(((0, 0.5), (1, 0.4))),
        lambda: Atomic(((0, 0.5), (0, 0.5))),
        lambda: Atomic(((0, 0), (1, 1))),
        lambda: GridDensity((0, 1, 1), (0.5, 0.5)),
        lambda: GridDensity((0, 1), (0.9,)),
        lambda: Semicircle(0),
        lambda: Mixture(((0.4, dirac(0)), (0.4, dirac(1)))),
    ],
)
def test_invalid_parameters_are_rejected(build):
    with pytest.raises(InvalidParameter):
        build()
