import mpmath as mp
import pytest

from boolconv.errors import DomainError, InvalidParameter, NoConvergence
from boolconv.free_additive import belinschi_nica, burgers_residual, free_power, free_power_F, subordinator
from boolconv.handles import Leaf
from boolconv.measures import ParetoTail, Semicircle, StandardCauchy, bernoulli, dirac

POINTS = [mp.mpc(0.3, 0.8), mp.mpc(-2, 0.1), mp.mpc(5, 3), mp.mpc(0, 2)]


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol * max(1, abs(b))


def test_subordinator_for_point_mass():
    for t in (1.5, 2, 7):
        for z in POINTS:
            res = subordinator(dirac(2), t, z)
            assert res.converged
            assert close(res.omega, z - (t - 1) * 2)


def test_subordinator_at_t_one_is_identity():
    res = subordinator(ParetoTail(1.5), 1, mp.mpc(1, 1))
    assert res.omega == mp.mpc(1, 1) and res.iterations == 0


def test_semicircle_power_is_semicircle():
    z = mp.mpc(0, 2)
    assert close(free_power_F(Semicircle(1), 2, z), Leaf(Semicircle(2)).F(z), 1e-10)
    for z in POINTS:
        assert close(free_power(Semicircle(1), 2).F(z), Leaf(Semicircle(2)).F(z), 1e-10)


def test_power_of_point_mass_and_cauchy():
    for z in POINTS:
        assert close(free_power(dirac(1.5), 3).F(z), z - 4.5)
        assert close(free_power(StandardCauchy(), 2).F(z), z + 2j)


def test_belinschi_nica_examples():
    for z in POINTS:
        for t in (0.3, 1, 4):
            assert close(belinschi_nica(dirac(2), t).F(z), z - 2)
        m = ParetoTail(1.5)
        assert close(belinschi_nica(m, 0).F(z), Leaf(m).F(z))
        assert close(belinschi_nica(StandardCauchy(), 1).F(z), z + 1j, 1e-10)


def test_parameter_checks():
    with pytest.raises(InvalidParameter):
        free_power(dirac(1), 0.5)
    with pytest.raises(InvalidParameter):
        subordinator(dirac(1), 0.9, 1j)
    with pytest.raises(InvalidParameter):
        belinschi_nica(dirac(1), -0.1)
    with pytest.raises(DomainError):
        subordinator(dirac(1), 2, mp.mpc(0, -1))


def test_no_convergence_carries_the_last_iterate():
    with pytest.raises(NoConvergence) as info:
        subordinator(ParetoTail(1.5), 3, mp.mpc(2, 1), tol=mp.mpf(0), max_iter=4)
    assert info.value.result is not None and not info.value.result.converged


@pytest.mark.parametrize("m", [ParetoTail(1.5), Semicircle(1), bernoulli(), StandardCauchy()])
@pytest.mark.parametrize("t", [1.5, 2, 5])
def test_subordination_residual_and_half_plane(m, t):
    for z in POINTS:
        res = subordinator(m, t, z)
        assert res.converged
        assert res.residual <= 64 * mp.mp.eps * max(1, abs(z)) * 4
        assert res.omega.imag >= z.imag


def test_inverse_transform_identity_for_free_powers():
    # F_{mu^t}^{-1}(w) = (1 - t) w + t F_mu^{-1}(w), checked by numeric inversion of F
    m, t = Semicircle(1), 2.5
    for w in (mp.mpc(0.5, 2), mp.mpc(-1, 3), mp.mpc(2, 1.5)):
        inv_mu = mp.findroot(lambda z: Leaf(m).F(z) - w, w)
        inv_pow = mp.findroot(lambda z: free_power(m, t).F(z) - w, w)
        assert abs(inv_pow - ((1 - t) * w + t * inv_mu)) < 1e-6


def test_burgers_residual_vanishes_for_point_mass_and_cauchy():
    for m in (dirac(2), StandardCauchy()):
        for t, z in ((0.5, mp.mpc(1, 1)), (1, mp.mpc(0, 2))):
            assert burgers_residual(m, t, z) < 1e-8


def test_burgers_residual_is_second_order_for_semicircle():
    with mp.workdps(40):
        z, t = mp.mpc(0, 2), 1
        steps = [mp.mpf("1e-2") / 2**k for k in range(4)]
        res = [burgers_residual(Semicircle(1), t, z, s, s) for s in steps]
        orders = [mp.log(a / b, 2) for a, b in zip(res, res[1:])]
        assert all(o >= 1.9 for o in orders)
