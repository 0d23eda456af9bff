"""High-precision single-site Gibbs moments with mpmath (independent of the C++ quadrature).

Prints the frozen constants used by tests/test_equilibrium.cpp and tests/test_hydro.cpp.
"""
import mpmath as mp

mp.mp.dps = 40


def moments(gamma, beta=1, tau=0, kmax=12):
    lam = tau * beta
    w = lambda u: mp.exp(-beta * (u**2 / 2 + gamma * u**4 / 4) - lam * u)
    z = mp.quad(w, [-mp.inf, -4, 0, 4, mp.inf])
    return [mp.quad(lambda u: u**k * w(u), [-mp.inf, -4, 0, 4, mp.inf]) / z for k in range(kmax + 1)]


def cum2(m, a, b):
    return m(a * b) - m(a) * m(b)


if __name__ == "__main__":
    for g in ["0.05", "0.1", "0.2"]:
        m = moments(mp.mpf(g))
        print(f"gamma={g} m2={mp.nstr(m[2], 20)} m4={mp.nstr(m[4], 20)} kappa={mp.nstr(m[4] / m[2], 20)}")
    g = mp.mpf("0.001")
    m = moments(g)
    e = m[2] / 2 + g * m[4] / 4
    print("gamma=1e-3 e_mean", mp.nstr(e, 20), "slope", mp.nstr((e - mp.mpf(1) / 2) / g, 20))
    # Gamma at tau=0: beta/4 <Y;Y> <e2;e2>, e2 = Y^2 + 2 gamma V = Y^2 + gamma Y^4/2
    for gs in ["0", "0.05", "0.1"]:
        g = mp.mpf(gs)
        m = moments(g, kmax=12)
        var_e2 = (m[4] + g * m[6] + g**2 * m[8] / 4) - (m[2] + g * m[4] / 2) ** 2
        Gam = m[2] * var_e2 / 4
        dvtau = -var_e2 / (4 * Gam)
        print(f"gamma={gs} Gamma={mp.nstr(Gam, 20)} dtau_dv={mp.nstr(dvtau, 20)} c={mp.nstr(2 * dvtau, 20)}")
