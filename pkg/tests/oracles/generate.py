"""Independent oracles for values frozen into the test-suite.

Uses mpmath only (no boolconv import): Cauchy transforms by direct
quadrature of the density, remainders by brute-force subtraction at 80
digits, Karamata integrals by quadrature, and tails of convolved laws by
integrating the boundary density ``-Im G(x + i0) / pi`` built from
principal-value integrals.

Run ``python3 tests/oracles/generate.py`` to reprint the table.
"""
import mpmath as mp

mp.mp.dps = 80


def pareto_density(alpha, xm=1):
    a, xm = mp.mpf(alpha), mp.mpf(xm)
    return lambda t: a * xm**a * t ** (-a - 1)


def cauchy_quad(alpha, z, xm=1):
    f = pareto_density(alpha, xm)
    return mp.quad(lambda t: f(t) / (z - t), [xm, 10 * xm, 100 * xm, mp.inf])


def psi_quad(alpha, w, xm=1):
    f = pareto_density(alpha, xm)
    return mp.quad(lambda t: w * t / (1 - w * t) * f(t), [xm, 10 * xm, 1 / abs(w), 10 / abs(w), mp.inf])


def inv_b_remainder_p1(alpha, y):
    """``(eta(w) - m1 w) / w`` at ``w = -i/y``; needs alpha > 1."""
    a = mp.mpf(alpha)
    w = mp.mpc(0, -1 / mp.mpf(y))
    ps = psi_quad(alpha, w)
    eta = ps / (1 + ps)
    m1 = a / (a - 1)
    return (eta - m1 * w) / w


def inv_b_p0(alpha, y):
    w = mp.mpc(0, -1 / mp.mpf(y))
    ps = psi_quad(alpha, w)
    return ps / (1 + ps) / w


def karamata(alpha, p, part):
    a = mp.mpf(alpha)
    k = p if part == "Im" else p + 1
    return -a * mp.quad(lambda s: s ** (k - a) / (1 + s**2), [0, 1, mp.inf])


def boundary_G(alpha, x, xm=1):
    """``G(x + i0)`` for Pareto at ``x > xm`` via a subtracted principal value."""
    f = pareto_density(alpha, xm)
    x = mp.mpf(x)
    fx = f(x)
    hi = 2 * x
    pv = mp.quad(lambda t: (f(t) - fx) / (x - t), [xm, x, hi]) + fx * (mp.log(x - xm) - mp.log(hi - x))
    pv += mp.quad(lambda t: f(t) / (x - t), [hi, 10 * hi, mp.inf])
    return mp.mpc(pv, -mp.pi * fx)


def boolean_sum_density(alpha, n, x):
    G = boundary_G(alpha, x)
    F = 1 / G
    Fn = n * F - (n - 1) * x
    return -mp.im(1 / Fn) / mp.pi


def boolean_mult_density(alpha, beta, x):
    Ga, Gb = boundary_G(alpha, x), boundary_G(beta, x)
    Ka, Kb = x - 1 / Ga, x - 1 / Gb
    return -mp.im(1 / (x - Ka * Kb)) / mp.pi


def tail_from_density(dens, y):
    y = mp.mpf(y)
    pts = [y * 10**k for k in range(0, 7)] + [mp.inf]
    return mp.quad(dens, pts)


if __name__ == "__main__":
    for z in (mp.mpc(2, 1), mp.mpc("0.5", "0.1"), mp.mpc(-3, 2)):
        print("G pareto1.5", z, mp.nstr(cauchy_quad(1.5, z), 20))
    for y in (100, 1000, 10000):
        print("rInvB pareto1.5 p=1 y=", y, mp.nstr(inv_b_remainder_p1(1.5, y), 20))
    print("invB pareto0.5 p=0 y=100", mp.nstr(inv_b_p0(0.5, 100), 20))
    for a, p in ((1.5, 1), (0.5, 0), (2.5, 2)):
        for part in ("Im", "Re"):
            print("karamata", a, p, part, mp.nstr(karamata(a, p, part), 20))
    mp.mp.dps = 20
    print("tail pareto1.5^{+2} at 100", mp.nstr(tail_from_density(lambda x: boolean_sum_density(1.5, 2, x), 100), 15))
    print("tail pareto1.5^{+3} at 100", mp.nstr(tail_from_density(lambda x: boolean_sum_density(1.5, 3, x), 100), 15))
    print("tail pareto1.5 x pareto3 at 1e3",
          mp.nstr(tail_from_density(lambda x: boolean_mult_density(1.5, 3, x), 1000), 15))
