import warnings

import mpmath as mp
import pytest

from boolconv.errors import CancellationWarning, DomainError, InvalidParameter, MomentError
from boolconv.measures import Atomic, GridDensity, ParetoTail, Semicircle, StandardCauchy, bernoulli, dirac
from boolconv.transforms import (
    ComplexPoint, b_transform, cauchy, eta, eta_series_coeffs, f_transform, inv_b, k_transform,
    moments_from_eta_coeffs, psi, remainder,
)

# brute-force (eta(w) - m1 w) / w for Pareto(1.5, 1) at w = -i/y, 80 digits (tests/oracles/generate.py)
PARETO15_INVB_REMAINDER = {
    100: ("-0.3187880546935014515", "-0.23241674062719044692"),
    1000: ("-0.10480273425419910858", "-0.094001323363505163319"),
    10000: ("-0.033302280138802837073", "-0.032141604372665498487"),
}
PARETO05_INVB_AT_100 = ("12.626651953278832986", "-11.055228383233348188")


def close(a, b, tol=1e-13):
    return abs(mp.mpc(a) - mp.mpc(b)) <= tol * max(1, abs(mp.mpc(b)))


# ----------------------------------------------------------------- G, F, K


def test_cauchy_examples():
    assert close(cauchy(dirac(0), 1j), -1j)
    assert close(cauchy(bernoulli(), 2j), -0.4j)
    for y in (2, 10, 1e3):
        assert close(cauchy(StandardCauchy(), mp.mpc(0, y)), mp.mpc(0, -1 / (y + 1)))


def test_cauchy_of_standard_cauchy_matches_quadrature():
    z = mp.mpc(0.3, 1.7)
    oracle = mp.quad(lambda x: 1 / (mp.pi * (1 + x * x)) / (z - x), [-mp.inf, 0, mp.inf])
    assert close(cauchy(StandardCauchy(), z), oracle, 1e-12)


def test_f_transform_examples():
    z = mp.mpc(0.7, 0.4)
    assert close(f_transform(dirac(3), z), z - 3)
    assert close(f_transform(StandardCauchy(), z), z + 1j)
    assert close(f_transform(Semicircle(1), 2j), 1j / (mp.sqrt(2) - 1))


def test_k_transform_examples():
    z = mp.mpc(-1.2, 0.9)
    assert close(k_transform(dirac(2.5), z), 2.5)
    assert close(k_transform(bernoulli(), z), 1 / z)
    assert close(k_transform(StandardCauchy(), z), -1j)


def test_normalisation_at_infinity():
    y = mp.mpf(1000)
    for m, tol in ((Semicircle(1), 1e-6), (bernoulli(), 1e-6), (ParetoTail(1.5), 1e-2), (StandardCauchy(), 1e-2)):
        z = mp.mpc(0, y)
        assert abs(z * cauchy(m, z) - 1) < tol


# ----------------------------------------------------------------- psi, eta, B


def test_psi_examples():
    assert close(psi(dirac(1), -1), -0.5)
    z = mp.mpc(-0.3, 0.2)
    assert close(psi(dirac(2), z), 2 * z / (1 - 2 * z))


def test_psi_paths_agree_for_pareto():
    z = mp.mpc(0, -1e-2)
    m = ParetoTail(1.5, 1)
    a, b = psi(m, z, "cauchy"), psi(m, z, "direct")
    assert abs(a - b) < 1e-8


@pytest.mark.parametrize("m", [ParetoTail(1.5), ParetoTail(3, 2), GridDensity((0, 1, 2), (0.5, 0.5)), dirac(0.3)])
@pytest.mark.parametrize("z", [mp.mpc(0, 0.1), mp.mpc(-0.05, -0.05), mp.mpc(-0.1, 0), mp.mpc(0.07, 0.02)])
def test_psi_paths_agree_near_zero(m, z):
    a, b = psi(m, z, "cauchy"), psi(m, z, "direct")
    assert abs(a - b) <= 1e-8 * max(1, abs(a))


def test_psi_rejects_positive_axis():
    with pytest.raises(DomainError):
        psi(ParetoTail(1.5), 0.5)


def test_eta_examples():
    z = mp.mpc(0.2, 0.3)
    assert close(eta(dirac(1), z), z)
    assert close(eta(dirac(2.5), z), 2.5 * z)


@pytest.mark.parametrize("m", [ParetoTail(1.5), ParetoTail(0.5), dirac(2), GridDensity((0, 1, 5), (0.5, 0.5))])
def test_eta_is_negative_on_negative_axis(m):
    v = eta(m, -1e-3)
    assert v.real < 0 and abs(v.imag) < 1e-12 * abs(v)


def test_b_transform_examples():
    z = mp.mpc(-0.4, 0.1)
    assert close(b_transform(dirac(1), z), 1)
    assert close(b_transform(dirac(2), z), 0.5)
    for w in (mp.mpc(0.1, 0.1), mp.mpc(-2, 0.5)):
        assert close(b_transform(dirac(4), w), 0.25)
    assert close(inv_b(dirac(4), z), 4)


def test_eta_series_examples():
    assert eta_series_coeffs([3]) == [3]
    m1, m2 = mp.mpf(2), mp.mpf(7)
    assert eta_series_coeffs([m1, m2]) == [m1, m2 - m1**2]
    assert eta_series_coeffs([1, 1, 1]) == [1, 0, 0]


def test_eta_series_round_trip():
    moms = [mp.mpf(v) for v in (1.5, 4, 11, 40)]
    assert all(close(a, b) for a, b in zip(moments_from_eta_coeffs(eta_series_coeffs(moms)), moms))


# ----------------------------------------------------------------- remainders


def test_remainder_of_cauchy_transform_for_point_mass():
    # z^2 (G - 1/z - a/z^2) = a^2 / (z - a) for G = 1/(z - a)
    a = mp.mpf(1.5)
    for z in (mp.mpc(3, 1), mp.mpc(-10, 20)):
        r = remainder("rG", dirac(a), z, p=1, method="naive").value
        assert close(r, a**2 / (z - a), 1e-12)
        assert close(remainder("rG", dirac(a), z, p=1).value, a**2 / (z - a), 1e-12)
    z = mp.mpc(0, 1e8)
    assert close(z * remainder("rG", dirac(a), z, p=1).value, a**2, 1e-7)


def test_eta_and_inverse_b_remainders_coincide():
    m = ParetoTail(2.5)
    for p in (1, 2):
        z = mp.mpc(-0.01, -0.02)
        assert remainder("rEta", m, z, p).value == remainder("rInvB", m, z, p).value


@pytest.mark.parametrize("y", sorted(PARETO15_INVB_REMAINDER))
def test_inverse_b_remainder_matches_brute_force_oracle(y):
    with mp.workdps(40):
        r = remainder("rInvB", ParetoTail(1.5, 1), mp.mpc(0, -1 / mp.mpf(y)), 1).value
        assert abs(r / mp.mpc(*PARETO15_INVB_REMAINDER[y]) - 1) < mp.mpf(10) ** -18


def test_order_zero_remainder_is_inverse_b():
    with mp.workdps(40):
        z = mp.mpc(0, -mp.mpf("0.01"))
        r = remainder("rInvB", ParetoTail(0.5, 1), z, 0).value
        assert abs(r / mp.mpc(*PARETO05_INVB_AT_100) - 1) < mp.mpf(10) ** -18


def test_remainder_im_part_matches_printed_constant_at_y_100():
    y = 100
    r = remainder("rInvB", ParetoTail(1.5, 1), mp.mpc(0, -1 / y), 1)
    target = -1.1107 * y * y**-1.5
    assert float(r.imag) == pytest.approx(target, rel=0.05)


@pytest.mark.parametrize("kind", ["rPsi", "rEta", "rInvB", "rG", "rK"])
@pytest.mark.parametrize("m,p", [(ParetoTail(1.5), 1), (ParetoTail(3.5), 2), (GridDensity((0, 1, 3), (0.5, 0.5)), 2)])
def test_analytic_and_naive_remainders_agree(kind, m, p):
    z = mp.mpc(-0.02, -0.05) if kind not in ("rG", "rK") else mp.mpc(-20, -50)
    with mp.workdps(40):
        a = remainder(kind, m, z, p).value
        b = remainder(kind, m, z, p, method="naive").value
        assert abs(a - b) <= mp.mpf(10) ** -25 * max(1, abs(a))


def test_naive_remainder_warns_when_digits_are_lost():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        remainder("rInvB", ParetoTail(1.5), mp.mpc(0, -1e-30), 1, method="naive")
    assert any(issubclass(w.category, CancellationWarning) for w in caught)


def test_remainder_argument_checks():
    with pytest.raises(InvalidParameter):
        remainder("rX", dirac(1), 1j, 1)
    with pytest.raises(InvalidParameter):
        remainder("rG", dirac(1), 1j)
    with pytest.raises(MomentError):
        remainder("rInvB", ParetoTail(1.5), -0.1j, 2)


def test_complex_point():
    w = ComplexPoint.tauberian(100)
    assert w.value() == mp.mpc(0, -0.01)
    assert w.half_plane == "lower"
    assert ComplexPoint(1, 2).half_plane == "upper"
    assert close(cauchy(dirac(0), ComplexPoint(0, 1)), -1j)


def test_atomic_is_exact_for_many_atoms():
    m = Atomic(tuple((k, 0.1) for k in range(10)))
    z = mp.mpc(4.5, 0.25)
    assert close(cauchy(m, z), mp.fsum(0.1 / (z - k) for k in range(10)))
