"""Reference values for the Mittag-Leffler and exact-solution tests.

Two independent high-precision routes (mpmath):
  * the defining power series, summed with enough working digits that the
    cancellation of the alternating series is irrelevant (small |z| only);
  * the Laplace-type integral of the completely monotone kernel, evaluated
    with mpmath's tanh-sinh quadrature.
Where both routes are feasible they are cross-checked before printing.
For gamma = 1/2 the erfc identity is evaluated by quadrature of the erfc
integral definition.

Run with `python3 mittag_leffler_oracle.py`; the printed values are frozen
into the C++ unit tests.
"""
import sys

import mpmath as mp


def ml_series(gamma, z):
    gamma = mp.mpf(gamma)
    z = mp.mpf(z)
    total = mp.mpf(0)
    n = 0
    prev = None
    peaked = False
    while True:
        term = z**n / mp.gamma(gamma * n + 1)
        total += term
        mag = abs(term)
        if prev is not None and mag < prev:
            peaked = True
        if peaked and mag < mp.mpf(10) ** -40:
            return total
        prev = mag
        n += 1


def ml_laplace(gamma, z):
    # E_g(-x) = sin(g pi)/(g pi) * int_0^inf exp(-x^(1/g) u^(1/g)) / (u^2 + 2u cos(g pi) + 1) du
    gamma = mp.mpf(gamma)
    x = -mp.mpf(z)
    if x == 0:
        return mp.mpf(1)
    t = x ** (1 / gamma)
    c = mp.cos(gamma * mp.pi)
    f = lambda u: mp.exp(-t * u ** (1 / gamma)) / (u * u + 2 * u * c + 1)
    return mp.sin(gamma * mp.pi) / (gamma * mp.pi) * mp.quad(f, [0, 1, 10, mp.inf])


def ml(gamma, z):
    if mp.mpf(gamma) == 1:
        return mp.exp(z)
    return ml_laplace(gamma, z)


def erfc_quad(x):
    x = mp.mpf(x)
    return 2 / mp.sqrt(mp.pi) * mp.quad(lambda s: mp.exp(-s * s), [x, x + 10, mp.inf])


def exact_canonical(gamma, k, x, t, tol=mp.mpf("1e-14")):
    total = mp.mpf(0)
    m = 1
    while True:
        b = 8 / (mp.pi**3 * m**3)
        if b < tol:
            return total
        zz = -k * m * m * mp.pi**2 * mp.mpf(t) ** mp.mpf(gamma)
        total += b * mp.sin(m * mp.pi * mp.mpf(x)) * ml(gamma, zz)
        m += 2


def show(label, v):
    print(f"{label} = {mp.nstr(v, 20)}", flush=True)


if __name__ == "__main__":
    mp.mp.dps = 50
    for x in ["0.5", "1", "2", "4"]:
        show(f"E_0.5(-{x}) via erfc quadrature", mp.exp(mp.mpf(x) ** 2) * erfc_quad(x))

    # cross-check the two routes where the series is affordable
    mp.mp.dps = 120
    for g, z in [("0.25", "-2"), ("0.5", "-6"), ("0.75", "-8"), ("0.9", "-10")]:
        a = ml_series(g, z)
        mp.mp.dps = 40
        b = ml_laplace(g, z)
        mp.mp.dps = 120
        assert abs(a - b) < mp.mpf("1e-25"), (g, z, a, b)

    mp.mp.dps = 250
    show("E_0.75(-50) series", ml_series("0.75", -50))
    mp.mp.dps = 40
    show("E_0.75(-50) laplace", ml_laplace("0.75", -50))
    show("E_0.5(-pi^2*sqrt(0.5))", ml("0.5", -mp.pi**2 * mp.sqrt(mp.mpf("0.5"))))
    for g in ["0.25", "0.5", "0.75", "0.9"]:
        for z in ["-1", "-3", "-6", "-10", "-25", "-100"]:
            show(f"E_{g}({z})", ml(g, z))
    mp.mp.dps = 30
    show("exact(gamma=0.5,K=1,x=0.5,t=0.5)", exact_canonical("0.5", 1, "0.5", "0.5"))
    show("exact(gamma=1,K=1,x=0.5,t=0.5)", exact_canonical("1", 1, "0.5", "0.5"))
    if "--profile" in sys.argv:
        for j in range(21):
            show(f"fig3 gamma=0.75 x={j}/20", exact_canonical("0.75", 1, mp.mpf(j) / 20, "0.5", tol=mp.mpf("1e-12")))
