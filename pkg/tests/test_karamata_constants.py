"""Remainder constants from the defining integrals, against 20-digit quadrature.

``-alpha * int_0^inf s^(k - alpha) / (1 + s^2) ds`` with ``k = p`` for the
imaginary part and ``k = p + 1`` for the real part (tests/oracles/generate.py).
"""
import mpmath as mp
import pytest

from boolconv import asymptotics as A
from boolconv.measures import ParetoTail

QUADRATURE = {
    (1.5, 1, "Im"): "-3.3321622036187746853",
    (1.5, 1, "Re"): "-3.3321622036187746853",
    (0.5, 0, "Im"): "-1.1107207345395915618",
    (0.5, 0, "Re"): "-1.1107207345395915618",
    (2.5, 2, "Im"): "-5.5536036726979578088",
    (2.5, 2, "Re"): "-5.5536036726979578088",
}


@pytest.mark.parametrize("key", sorted(QUADRATURE))
def test_karamata_constant_matches_quadrature(key):
    alpha, p, part = key
    with mp.workdps(30):
        c = A.tauberian_constant(alpha, p, part, convention="karamata")
        assert abs(c / mp.mpf(QUADRATURE[key]) - 1) < mp.mpf(10) ** -18


def test_printed_real_part_agrees_only_at_alpha_one_and_a_half():
    # the printed numerator p + 2 - alpha equals alpha only when alpha = p/2 + 1
    a = A.tauberian_constant(1.5, 1, "Re")
    assert float(a) == pytest.approx(float(A.tauberian_constant(1.5, 1, "Re", convention="karamata")), rel=1e-14)
    for alpha, p in ((1.25, 1), (2.5, 2), (3.5, 3)):
        printed = A.tauberian_constant(alpha, p, "Re")
        exact = A.tauberian_constant(alpha, p, "Re", convention="karamata")
        assert float(exact / printed) == pytest.approx(alpha / (p + 2 - alpha), rel=1e-12)


def test_printed_imaginary_part_of_interior_case_differs():
    a = A.tauberian_constant(1.5, 1, "Im")
    b = A.tauberian_constant(1.5, 1, "Im", convention="karamata")
    assert float(a) == pytest.approx(-1.11072, abs=1e-5)
    assert float(b / a) == pytest.approx(3, rel=1e-12)


@pytest.mark.parametrize(
    "m,th,p",
    [(ParetoTail(1.5, 1), "T3.1", 1), (ParetoTail(0.5, 1), "T3.3", 0), (ParetoTail(1, 1), "T3.4", 0)],
)
def test_karamata_convention_passes_on_trusted_window(m, th, p):
    rep = A.verify_remainder(m, th, p=p, convention="karamata")
    assert all(r.passed for r in rep.relations), rep.summary()


def test_karamata_convention_at_second_order():
    # the Im ratio carries a y^-1/2 correction: 0.82 at y = 250, so go further out
    m = ParetoTail(2.5, 1)
    assert not A.verify_remainder(m, "T3.1", p=2, convention="karamata").relation("Im").passed
    rep = A.verify_remainder(m, "T3.1", A.log_grid(1e5, 1e8, 7), p=2, convention="karamata")
    assert all(r.passed for r in rep.relations), rep.summary()


def test_karamata_real_part_of_boundary_case():
    rep = A.verify_remainder(ParetoTail(2, 1), "T3.5", p=1, convention="karamata")
    assert rep.relation("Re").passed, rep.summary()
